//! Direct (MCMC-free) draws from the conjugate one-way posterior.
//!
//! One joint draw takes three steps:
//!
//! 1. `σ²_ε ~ Γ⁻¹(ig_eps)`
//! 2. `σ²_αε ~ Γ⁻¹(ig_alpha_eps)` and `σ²_α = σ²_αε - κ_ε σ²_ε`; a
//!    nonpositive difference is recorded as an atom at `σ²_α = 0`
//! 3. `α_i ~ N(Q⁻¹[τ_α α₀/σ²_α + n_J α̂_i/σ²_ε], Q⁻¹)` for each group,
//!    degenerate at `α₀` when `σ²_α = 0`
//!
//! Draw `k` of a sample with seed `s` always uses stream `(s, k)`, so any
//! partition of the index range reproduces the serial result.

use std::ops::Range;

use rayon::prelude::*;
use serde::Serialize;

use crate::bayes::OneWayPosterior;
use crate::error::{Error, Result};
use crate::specfun::{sample_inv_gamma, sample_normal, RngStream};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PosteriorDraw {
    pub sigma2_eps: f64,
    /// `max(0, σ²_αε - κ_ε σ²_ε)`
    pub sigma2_alpha: f64,
    /// The untruncated shifted variance `σ²_αε`.
    pub sigma2_alpha_eps: f64,
    pub at_zero: bool,
    pub alpha: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PosteriorSample {
    pub draws: Vec<PosteriorDraw>,
    pub seed: u64,
    pub n_draws: usize,
    /// Per-draw finite-population sd `s_α` of the group effects.
    pub finite_sd: Vec<f64>,
}

/// Where a predictive observation comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictTarget {
    /// Another measurement on an observed group.
    Existing(usize),
    /// A measurement on a group not yet seen.
    NewGroup,
}

/// Sample sd `sqrt(Σ(α_i - ᾱ)² / (n_I - 1))` of one draw's group effects.
pub fn finite_population_sd(alpha: &[f64]) -> f64 {
    let n = alpha.len();
    if n < 2 {
        return 0.0;
    }
    let mean = alpha.iter().sum::<f64>() / n as f64;
    (alpha.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
}

pub fn draw_one(post: &OneWayPosterior, rng: &mut RngStream) -> Result<PosteriorDraw> {
    post.check_proper()?;
    Ok(draw_unchecked(post, rng))
}

fn draw_unchecked(post: &OneWayPosterior, rng: &mut RngStream) -> PosteriorDraw {
    let sigma2_eps = sample_inv_gamma(rng, post.ig_eps.u, post.ig_eps.v).expect("proper ig_eps");
    let sigma2_alpha_eps =
        sample_inv_gamma(rng, post.ig_alpha_eps.u, post.ig_alpha_eps.v).expect("proper ig_alpha_eps");
    let diff = sigma2_alpha_eps - post.kappa_eps * sigma2_eps;
    let at_zero = diff <= 0.0;
    let sigma2_alpha = if at_zero { 0.0 } else { diff };
    let alpha = post
        .alpha_loc_weights
        .iter()
        .map(|loc| {
            let (mean, var) = loc.conditional(post.alpha0, sigma2_alpha, sigma2_eps);
            sample_normal(rng, mean, var).expect("nonnegative variance")
        })
        .collect();
    PosteriorDraw {
        sigma2_eps,
        sigma2_alpha,
        sigma2_alpha_eps,
        at_zero,
        alpha,
    }
}

/// Draw number `index` of the sample seeded with `seed`.
pub fn draw_at(post: &OneWayPosterior, seed: u64, index: u64) -> Result<PosteriorDraw> {
    draw_one(post, &mut RngStream::new(seed, index))
}

/// Draws `indices` of the sample seeded with `seed`, in index order.
pub fn draw_range(post: &OneWayPosterior, seed: u64, indices: Range<u64>) -> Result<Vec<PosteriorDraw>> {
    post.check_proper()?;
    Ok(indices
        .into_par_iter()
        .map(|k| draw_unchecked(post, &mut RngStream::new(seed, k)))
        .collect())
}

pub fn sample(post: &OneWayPosterior, n_draws: usize, seed: u64) -> Result<PosteriorSample> {
    if n_draws == 0 {
        return Err(Error::TooFewDraws { needed: 1, got: 0 });
    }
    let draws = draw_range(post, seed, 0..n_draws as u64)?;
    Ok(PosteriorSample::from_draws(draws, seed))
}

impl PosteriorSample {
    pub fn from_draws(draws: Vec<PosteriorDraw>, seed: u64) -> Self {
        let finite_sd = draws.iter().map(|d| finite_population_sd(&d.alpha)).collect();
        Self {
            n_draws: draws.len(),
            draws,
            seed,
            finite_sd,
        }
    }

    pub fn sigma_eps(&self) -> impl Iterator<Item = f64> + '_ {
        self.draws.iter().map(|d| d.sigma2_eps.sqrt())
    }

    pub fn sigma_alpha(&self) -> impl Iterator<Item = f64> + '_ {
        self.draws.iter().map(|d| d.sigma2_alpha.sqrt())
    }

    /// Draws as CSV: `draw,sigma2_eps,sigma2_alpha,at_zero,alpha_1..alpha_nI,s_alpha`.
    pub fn to_csv(&self) -> String {
        let n_groups = self.draws.first().map_or(0, |d| d.alpha.len());
        let mut out = String::from("draw,sigma2_eps,sigma2_alpha,at_zero");
        for i in 1..=n_groups {
            out.push_str(&format!(",alpha_{i}"));
        }
        out.push_str(",s_alpha\n");
        for (k, (d, s)) in self.draws.iter().zip(&self.finite_sd).enumerate() {
            out.push_str(&format!("{k},{},{},{}", d.sigma2_eps, d.sigma2_alpha, d.at_zero as u8));
            for a in &d.alpha {
                out.push_str(&format!(",{a}"));
            }
            out.push_str(&format!(",{s}\n"));
        }
        out
    }

    pub fn summary_json(&self) -> String {
        let n = self.n_draws as f64;
        let mean = |it: &mut dyn Iterator<Item = f64>| it.sum::<f64>() / n;
        let value = serde_json::json!({
            "seed": self.seed,
            "n_draws": self.n_draws,
            "n_at_zero": self.draws.iter().filter(|d| d.at_zero).count(),
            "mean_sigma2_eps": mean(&mut self.draws.iter().map(|d| d.sigma2_eps)),
            "mean_sigma2_alpha": mean(&mut self.draws.iter().map(|d| d.sigma2_alpha)),
            "mean_s_alpha": mean(&mut self.finite_sd.iter().copied()),
        });
        serde_json::to_string_pretty(&value).expect("summary serializes")
    }
}

/// A posterior predictive observation conditional on one joint draw.
pub fn predictive_draw(
    post: &OneWayPosterior,
    draw: &PosteriorDraw,
    target: PredictTarget,
    rng: &mut RngStream,
) -> Result<f64> {
    let location = match target {
        PredictTarget::Existing(i) => *draw.alpha.get(i).ok_or(Error::UnknownGroup {
            index: i,
            n_groups: draw.alpha.len(),
        })?,
        PredictTarget::NewGroup => sample_normal(rng, post.alpha0, draw.sigma2_alpha)?,
    };
    sample_normal(rng, location, draw.sigma2_eps)
}

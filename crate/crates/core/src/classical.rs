//! Classical one-way ANOVA: the sums-of-squares decomposition, the fixed
//! effects F test, and random-effects variance components by moments and
//! by maximum likelihood.
//!
//! For the random-effects model `Y_ij = μ + α_i + ε_ij` with
//! `α_i ~ N(0, σ²_α)` and `ε_ij ~ N(0, σ²_ε)`, the balanced likelihood
//! factors into the within-group contrasts and the group means:
//!
//! ```text
//! ℓ = -½ [ n ln 2π + (n - n_I) ln σ²_ε + SSE/σ²_ε
//!          + n_I ln ω + (SSA + n (Ȳ.. - μ)²)/ω ],     ω = σ²_ε + n_J σ²_α
//! ```
//!
//! which makes the optimum separable in `(σ²_ε, ω)` away from the
//! `σ²_α = 0` boundary.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::BalancedOneWayData;
use crate::error::{domain, Error, Result};
use crate::region::{cell_centers, check_axis, check_levels, ContourLevel, GridSpec, RegionGrid, RegionKind};
use crate::specfun::{chi2_quantile, f_upper_tail};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumsOfSquares {
    pub sst: f64,
    pub ssa: f64,
    pub sse: f64,
    pub df_a: u64,
    pub df_e: u64,
}

impl SumsOfSquares {
    pub fn msa(&self) -> f64 {
        self.ssa / self.df_a as f64
    }

    pub fn mse(&self) -> f64 {
        self.sse / self.df_e as f64
    }
}

pub fn decompose(data: &BalancedOneWayData) -> SumsOfSquares {
    let summary = data.summarize();
    let grand = summary.grand_mean;
    let n_j = data.n_reps() as f64;
    let mut sse = 0.0;
    let mut sst = 0.0;
    for (group, &mean) in data.values().iter().zip(&summary.group_means) {
        for &y in group {
            sse += (y - mean).powi(2);
            sst += (y - grand).powi(2);
        }
    }
    let ssa = n_j * summary.group_means.iter().map(|m| (m - grand).powi(2)).sum::<f64>();
    SumsOfSquares {
        sst,
        ssa,
        sse,
        df_a: (data.n_groups() - 1) as u64,
        df_e: (data.n() - data.n_groups()) as u64,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalRow {
    pub source: String,
    pub df: u64,
    pub sum_sq: f64,
    pub mean_sq: f64,
    pub f_value: Option<f64>,
    pub p_value: Option<f64>,
}

/// The two-row fixed-effects table: factor then residuals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalTable {
    pub rows: Vec<ClassicalRow>,
}

impl ClassicalTable {
    pub fn factor(&self) -> &ClassicalRow {
        &self.rows[0]
    }

    pub fn errors(&self) -> &ClassicalRow {
        &self.rows[1]
    }

    pub fn f_value(&self) -> f64 {
        self.factor().f_value.expect("factor row carries F")
    }

    pub fn p_value(&self) -> f64 {
        self.factor().p_value.expect("factor row carries p")
    }

    pub fn render_text(&self) -> String {
        let width = self.rows.iter().map(|r| r.source.len()).max().unwrap_or(0).max(6);
        let mut out = format!(
            "{:<width$} {:>4} {:>10} {:>10} {:>8} {:>9}\n",
            "", "Df", "Sum Sq", "Mean Sq", "F value", "Pr(>F)"
        );
        for r in &self.rows {
            let f = r.f_value.map(|f| format!("{f:.2}")).unwrap_or_default();
            let p = r.p_value.map(|p| format!("{p:.6}")).unwrap_or_default();
            out.push_str(
                format!(
                    "{:<width$} {:>4} {:>10.2} {:>10.2} {:>8} {:>9}",
                    r.source, r.df, r.sum_sq, r.mean_sq, f, p
                )
                .trim_end(),
            );
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("source,df,sum_sq,mean_sq,f_value,p_value\n");
        let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.source,
                r.df,
                r.sum_sq,
                r.mean_sq,
                opt(r.f_value),
                opt(r.p_value)
            ));
        }
        out
    }
}

pub fn fixed_effects_table(data: &BalancedOneWayData) -> Result<ClassicalTable> {
    fixed_effects_table_labeled(data, "Factor")
}

/// As [`fixed_effects_table`] with a custom label for the factor row.
pub fn fixed_effects_table_labeled(data: &BalancedOneWayData, factor: &str) -> Result<ClassicalTable> {
    let ss = decompose(data);
    if ss.sse == 0.0 {
        return Err(Error::Degenerate(
            "zero within-group variation (SSE = 0): the F ratio is undefined".into(),
        ));
    }
    let (msa, mse) = (ss.msa(), ss.mse());
    let f = msa / mse;
    let p = f_upper_tail(f, ss.df_a, ss.df_e)?;
    Ok(ClassicalTable {
        rows: vec![
            ClassicalRow {
                source: factor.to_string(),
                df: ss.df_a,
                sum_sq: ss.ssa,
                mean_sq: msa,
                f_value: Some(f),
                p_value: Some(p),
            },
            ClassicalRow {
                source: "Residuals".into(),
                df: ss.df_e,
                sum_sq: ss.sse,
                mean_sq: mse,
                f_value: None,
                p_value: None,
            },
        ],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VarCompMethod {
    MoM,
    ML,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarCompEstimate {
    pub mu_hat: f64,
    pub sigma2_alpha_hat: f64,
    pub sigma2_eps_hat: f64,
    pub method: VarCompMethod,
    /// The unconstrained `σ²_α` estimate was negative and has been set to 0.
    pub boundary_hit: bool,
}

/// Moment estimates from `E[MSE] = σ²_ε` and `E[MSA] = σ²_ε + n_J σ²_α`.
pub fn mom_varcomp(data: &BalancedOneWayData) -> VarCompEstimate {
    let ss = decompose(data);
    let n_j = data.n_reps() as f64;
    let raw = (ss.msa() - ss.mse()) / n_j;
    VarCompEstimate {
        mu_hat: data.summarize().grand_mean,
        sigma2_alpha_hat: raw.max(0.0),
        sigma2_eps_hat: ss.mse(),
        method: VarCompMethod::MoM,
        boundary_hit: raw < 0.0,
    }
}

/// Exact balanced log-likelihood of the random-effects model.
pub fn loglik(data: &BalancedOneWayData, mu: f64, sigma2_alpha: f64, sigma2_eps: f64) -> Result<f64> {
    if !(sigma2_eps > 0.0) {
        return Err(domain(format!("sigma2_eps must be > 0, got {sigma2_eps}")));
    }
    if !(sigma2_alpha >= 0.0) {
        return Err(domain(format!("sigma2_alpha must be >= 0, got {sigma2_alpha}")));
    }
    let ss = decompose(data);
    let grand = data.summarize().grand_mean;
    Ok(loglik_from_ss(
        &ss,
        data.n_groups(),
        data.n_reps(),
        grand,
        mu,
        sigma2_alpha,
        sigma2_eps,
    ))
}

fn loglik_from_ss(
    ss: &SumsOfSquares,
    n_i: usize,
    n_j: usize,
    grand: f64,
    mu: f64,
    sigma2_alpha: f64,
    sigma2_eps: f64,
) -> f64 {
    let n = (n_i * n_j) as f64;
    let omega = sigma2_eps + n_j as f64 * sigma2_alpha;
    -0.5 * (n * (2.0 * PI).ln()
        + (n - n_i as f64) * sigma2_eps.ln()
        + ss.sse / sigma2_eps
        + n_i as f64 * omega.ln()
        + (ss.ssa + n * (grand - mu).powi(2)) / omega)
}

/// Maximum-likelihood estimates under `σ²_α ≥ 0`.
///
/// Off the boundary the optimum is `σ̂²_ε = SSE/(n - n_I)` and
/// `ω̂ = SSA/n_I`. When `ω̂ < σ̂²_ε` the constrained optimum lies on
/// `σ²_α = 0`, where the model is iid and `σ̂²_ε = SST/n`.
///
/// Data without within-group variation yield `σ̂²_ε = 0`; the likelihood
/// is unbounded there and the estimate is only a diagnostic.
pub fn ml_varcomp(data: &BalancedOneWayData) -> VarCompEstimate {
    let ss = decompose(data);
    let n_i = data.n_groups() as f64;
    let n_j = data.n_reps() as f64;
    let mu_hat = data.summarize().grand_mean;
    let sigma2_eps = ss.sse / ss.df_e as f64;
    let omega = ss.ssa / n_i;
    if omega >= sigma2_eps {
        VarCompEstimate {
            mu_hat,
            sigma2_alpha_hat: (omega - sigma2_eps) / n_j,
            sigma2_eps_hat: sigma2_eps,
            method: VarCompMethod::ML,
            boundary_hit: false,
        }
    } else {
        VarCompEstimate {
            mu_hat,
            sigma2_alpha_hat: 0.0,
            sigma2_eps_hat: ss.sst / data.n() as f64,
            method: VarCompMethod::ML,
            boundary_hit: true,
        }
    }
}

/// Relative log-likelihood over a grid with data-driven default ranges.
///
/// Unset ranges default to `(0, 3·sqrt(max(MSA, MSE)/n_J)]` for `σ_α`
/// and `(0, 3·sqrt(MSE)]` for `σ_ε`.
pub fn relative_likelihood_grid(data: &BalancedOneWayData, grid: &GridSpec, levels: &[f64]) -> Result<RegionGrid> {
    let ss = decompose(data);
    let n_j = data.n_reps() as f64;
    let (msa, mse) = (ss.msa(), ss.mse());
    let fallback = |v: f64| if v > 0.0 { v } else { 1.0 };
    let alpha = grid
        .alpha_range
        .unwrap_or((0.0, fallback(3.0 * (msa.max(mse) / n_j).sqrt())));
    let eps = grid.eps_range.unwrap_or((0.0, fallback(3.0 * mse.sqrt())));
    relative_likelihood_on_axes(
        data,
        &cell_centers(alpha.0, alpha.1, grid.n_alpha),
        &cell_centers(eps.0, eps.1, grid.n_eps),
        levels,
    )
}

/// Relative log-likelihood `ℓ(Ȳ.., a², e²) - ℓ(θ̂_ML)` at every axis pair,
/// with contour thresholds `-½ χ²_2(γ)`.
pub fn relative_likelihood_on_axes(
    data: &BalancedOneWayData,
    sigma_alpha_axis: &[f64],
    sigma_eps_axis: &[f64],
    levels: &[f64],
) -> Result<RegionGrid> {
    check_axis(sigma_alpha_axis, "sigma_alpha")?;
    check_axis(sigma_eps_axis, "sigma_eps")?;
    check_levels(levels)?;
    let ml = ml_varcomp(data);
    if !(ml.sigma2_eps_hat > 0.0) {
        return Err(Error::Degenerate(
            "likelihood is unbounded for data without within-group variation".into(),
        ));
    }
    let ss = decompose(data);
    let (n_i, n_j) = (data.n_groups(), data.n_reps());
    let grand = ml.mu_hat;
    let peak = loglik_from_ss(&ss, n_i, n_j, grand, grand, ml.sigma2_alpha_hat, ml.sigma2_eps_hat);

    let values: Vec<Vec<f64>> = sigma_alpha_axis
        .par_iter()
        .map(|&a| {
            sigma_eps_axis
                .iter()
                .map(|&e| (loglik_from_ss(&ss, n_i, n_j, grand, grand, a * a, e * e) - peak).min(0.0))
                .collect()
        })
        .collect();

    let contour_levels = levels
        .iter()
        .map(|&g| {
            Ok(ContourLevel {
                confidence: g,
                threshold: -0.5 * chi2_quantile(g, 2)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(RegionGrid {
        kind: RegionKind::RelativeLikelihood,
        sigma_alpha_axis: sigma_alpha_axis.to_vec(),
        sigma_eps_axis: sigma_eps_axis.to_vec(),
        values,
        contour_levels,
    })
}

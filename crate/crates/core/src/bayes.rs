//! Normal–inverse-gamma priors and the conjugate one-way posterior.
//!
//! The one-way prior is a normal–inverse-gamma–inverse-gamma family
//!
//! ```text
//! α_i | σ²_α, σ²_ε ~ N(α₀, [τ_α/σ²_α + τ_ε/σ²_ε]⁻¹)
//! σ²_αε | σ²_ε     ~ Γ⁻¹(u_α, v_α),     σ²_αε = σ²_α + κ_ε σ²_ε
//! σ²_ε             ~ Γ⁻¹(u_ε, v_ε)
//! ```
//!
//! With `τ_ε = 0` and `κ_ε = τ_α / n_J` the posterior stays in the family
//! and factors into two independent inverse-gamma laws plus normal group
//! effects, which is what [`crate::sampler`] draws from.

use serde::{Deserialize, Serialize};

use crate::classical::decompose;
use crate::dataset::BalancedOneWayData;
use crate::error::{domain, Error, Result};
use crate::specfun::ln_gamma;

/// `NΓ⁻¹(μ₀, τ, u, v)`: `μ | σ² ~ N(μ₀, σ²/τ)`, `σ² ~ Γ⁻¹(u, v)`.
///
/// Zeros in `tau` or `v` (and `u ≤ 0`) encode the improper limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NigParams {
    pub mu0: f64,
    pub tau: f64,
    pub u: f64,
    pub v: f64,
}

impl NigParams {
    pub fn new(mu0: f64, tau: f64, u: f64, v: f64) -> Result<Self> {
        if !mu0.is_finite() || !(tau >= 0.0) || !(u >= -0.5) || !(v >= 0.0) {
            return Err(domain(format!(
                "NIG parameters need tau >= 0, u >= -1/2, v >= 0 (got tau={tau}, u={u}, v={v})"
            )));
        }
        Ok(Self { mu0, tau, u, v })
    }

    pub fn is_proper(&self) -> bool {
        self.tau > 0.0 && self.u > 0.0 && self.v > 0.0
    }
}

/// Classic noninformative choices for `(μ, σ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorPreset {
    /// `p(μ, σ²) ∝ (σ²)⁻¹`
    JeffreysIndependence,
    /// `p(μ, σ²) ∝ (σ²)^(-3/2)`
    JeffreysMultivariate,
}

impl PriorPreset {
    /// `(u, v)` of the inverse-gamma law on `σ²` alone.
    pub fn inverse_gamma(self) -> (f64, f64) {
        match self {
            PriorPreset::JeffreysIndependence => (0.0, 0.0),
            PriorPreset::JeffreysMultivariate => (0.5, 0.0),
        }
    }

    /// The same prior as a joint NIG. The flat `μ` factor still carries
    /// `(σ²)^(-1/2)`, so the NIG shape is the inverse-gamma shape minus ½.
    pub fn nig(self) -> NigParams {
        let (u, v) = self.inverse_gamma();
        NigParams {
            mu0: 0.0,
            tau: 0.0,
            u: u - 0.5,
            v,
        }
    }
}

/// A density value, or an unnormalized kernel for improper parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density {
    pub value: f64,
    pub normalized: bool,
}

pub fn nig_density(p: &NigParams, mu: f64, sigma2: f64) -> Result<Density> {
    if !(sigma2 > 0.0) {
        return Err(domain(format!("NIG density needs sigma2 > 0, got {sigma2}")));
    }
    let quad = p.tau * (mu - p.mu0).powi(2) / (2.0 * sigma2);
    if p.is_proper() {
        let ln = -0.5 * (2.0 * std::f64::consts::PI * sigma2 / p.tau).ln() - quad + p.u * p.v.ln()
            - ln_gamma(p.u)?
            - (p.u + 1.0) * sigma2.ln()
            - p.v / sigma2;
        Ok(Density {
            value: ln.exp(),
            normalized: true,
        })
    } else {
        let ln = -0.5 * sigma2.ln() - quad - (p.u + 1.0) * sigma2.ln() - p.v / sigma2;
        Ok(Density {
            value: ln.exp(),
            normalized: false,
        })
    }
}

/// Conjugate update with `n` observations of mean `ybar` and centered sum
/// of squares `ss`.
pub fn nig_update(prior: &NigParams, n: usize, ybar: f64, ss: f64) -> NigParams {
    if n == 0 {
        return *prior;
    }
    let nf = n as f64;
    let tau = prior.tau + nf;
    let mu0 = (prior.tau * prior.mu0 + nf * ybar) / tau;
    // (ȳ-μ₀)² / (1/n + 1/τ) = nτ/(n+τ) (ȳ-μ₀)², which vanishes at τ = 0
    let shrink = nf * prior.tau / tau * (ybar - prior.mu0).powi(2);
    NigParams {
        mu0,
        tau,
        u: prior.u + nf / 2.0,
        v: prior.v + 0.5 * (ss + shrink),
    }
}

/// The eight hyperparameters of the one-way prior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    pub alpha0: f64,
    pub tau_alpha: f64,
    pub tau_eps: f64,
    pub kappa_eps: f64,
    pub u_alpha: f64,
    pub v_alpha: f64,
    pub u_eps: f64,
    pub v_eps: f64,
}

/// Partial override of [`Hyperparameters`]; absent fields keep their defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperOverrides {
    pub alpha0: Option<f64>,
    pub tau_alpha: Option<f64>,
    pub tau_eps: Option<f64>,
    pub kappa_eps: Option<f64>,
    pub u_alpha: Option<f64>,
    pub v_alpha: Option<f64>,
    pub u_eps: Option<f64>,
    pub v_eps: Option<f64>,
}

impl Hyperparameters {
    /// Whether direct sampling applies: `τ_ε = 0` and `κ_ε = τ_α / n_J`.
    pub fn conjugate_mode(&self, n_reps: usize) -> bool {
        let expected = self.tau_alpha / n_reps as f64;
        self.tau_eps == 0.0 && (self.kappa_eps - expected).abs() <= 1e-12 * expected.abs().max(1e-300)
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("tau_eps", self.tau_eps),
            ("kappa_eps", self.kappa_eps),
            ("u_alpha", self.u_alpha),
            ("v_alpha", self.v_alpha),
            ("u_eps", self.u_eps),
            ("v_eps", self.v_eps),
        ];
        if let Some((name, v)) = nonneg.iter().find(|(_, v)| !(*v >= 0.0) || !v.is_finite()) {
            return Err(domain(format!(
                "hyperparameter {name} must be finite and >= 0, got {v}"
            )));
        }
        if !(self.tau_alpha > 0.0) || !self.tau_alpha.is_finite() {
            return Err(domain(format!("tau_alpha must be > 0, got {}", self.tau_alpha)));
        }
        if !self.alpha0.is_finite() {
            return Err(domain("alpha0 must be finite"));
        }
        Ok(())
    }

    pub fn with_overrides(mut self, o: &HyperOverrides) -> Self {
        macro_rules! apply {
            ($($f:ident),*) => { $( if let Some(v) = o.$f { self.$f = v; } )* };
        }
        apply!(alpha0, tau_alpha, tau_eps, kappa_eps, u_alpha, v_alpha, u_eps, v_eps);
        self
    }
}

/// Invariant variance priors, conjugate settings, `τ_α = 1` and `α₀` at
/// the grand mean.
pub fn default_hyperparameters(data: &BalancedOneWayData) -> Hyperparameters {
    let tau_alpha = 1.0;
    Hyperparameters {
        alpha0: data.summarize().grand_mean,
        tau_alpha,
        tau_eps: 0.0,
        kappa_eps: tau_alpha / data.n_reps() as f64,
        u_alpha: 0.0,
        v_alpha: 0.0,
        u_eps: 0.0,
        v_eps: 0.0,
    }
}

/// Shape/scale pair of an inverse-gamma law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvGammaParams {
    pub u: f64,
    pub v: f64,
}

impl InvGammaParams {
    pub fn is_proper(&self) -> bool {
        self.u > 0.0 && self.v > 0.0 && self.u.is_finite() && self.v.is_finite()
    }
}

/// Per-group location data for the conditional draw of `α_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupLocation {
    /// `α̂_i`, the group mean.
    pub alpha_hat: f64,
    pub tau_alpha: f64,
    pub n_reps: usize,
}

impl GroupLocation {
    /// Conditional mean and variance of `α_i` given the variances:
    /// precision `Q = τ_α/σ²_α + n_J/σ²_ε`, mean `Q⁻¹(τ_α α₀/σ²_α + n_J α̂_i/σ²_ε)`.
    /// At `σ²_α = 0` the law collapses onto `α₀`.
    pub fn conditional(&self, alpha0: f64, sigma2_alpha: f64, sigma2_eps: f64) -> (f64, f64) {
        if sigma2_alpha <= 0.0 {
            return (alpha0, 0.0);
        }
        let prior_prec = self.tau_alpha / sigma2_alpha;
        let data_prec = self.n_reps as f64 / sigma2_eps;
        let q = prior_prec + data_prec;
        ((prior_prec * alpha0 + data_prec * self.alpha_hat) / q, 1.0 / q)
    }
}

/// Updated parameters of the conjugate one-way posterior.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneWayPosterior {
    pub alpha_loc_weights: Vec<GroupLocation>,
    /// Law of `σ²_αε = σ²_α + κ_ε σ²_ε`.
    pub ig_alpha_eps: InvGammaParams,
    /// Law of `σ²_ε`.
    pub ig_eps: InvGammaParams,
    pub kappa_eps: f64,
    pub alpha0: f64,
    pub n_groups: usize,
    pub n_reps: usize,
}

impl OneWayPosterior {
    pub fn is_proper(&self) -> bool {
        self.ig_eps.is_proper() && self.ig_alpha_eps.is_proper()
    }

    pub fn check_proper(&self) -> Result<()> {
        if !self.ig_eps.is_proper() {
            return Err(Error::DegeneratePosterior(format!(
                "error-variance posterior Γ⁻¹({}, {}) is improper (no within-group variation?)",
                self.ig_eps.u, self.ig_eps.v
            )));
        }
        if !self.ig_alpha_eps.is_proper() {
            return Err(Error::DegeneratePosterior(format!(
                "group-variance posterior Γ⁻¹({}, {}) is improper (identical group means?)",
                self.ig_alpha_eps.u, self.ig_alpha_eps.v
            )));
        }
        Ok(())
    }
}

pub fn posterior_update(h: &Hyperparameters, data: &BalancedOneWayData) -> Result<OneWayPosterior> {
    h.validate()?;
    let n_reps = data.n_reps();
    if !h.conjugate_mode(n_reps) {
        return Err(Error::NonConjugateConfig {
            tau_eps: h.tau_eps,
            kappa_eps: h.kappa_eps,
            expected_kappa: h.tau_alpha / n_reps as f64,
        });
    }
    let ss = decompose(data);
    let means = data.summarize().group_means;
    let n_groups = data.n_groups();
    let spread: f64 = means.iter().map(|m| (m - h.alpha0).powi(2)).sum();
    Ok(OneWayPosterior {
        alpha_loc_weights: means
            .iter()
            .map(|&alpha_hat| GroupLocation {
                alpha_hat,
                tau_alpha: h.tau_alpha,
                n_reps,
            })
            .collect(),
        ig_alpha_eps: InvGammaParams {
            u: h.u_alpha + n_groups as f64 / 2.0,
            v: h.v_alpha + 0.5 * h.tau_alpha * spread,
        },
        ig_eps: InvGammaParams {
            u: h.u_eps + (data.n() - n_groups) as f64 / 2.0,
            v: h.v_eps + 0.5 * ss.sse,
        },
        kappa_eps: h.kappa_eps,
        alpha0: h.alpha0,
        n_groups,
        n_reps,
    })
}

/// Unnormalized log posterior densities for arbitrary hyperparameters,
/// including non-conjugate `(τ_ε, κ_ε)`. These are evaluators only; the
/// general case has no direct sampler.
pub mod general {
    use super::*;

    struct Stats {
        sse: f64,
        spread: f64,
        n: usize,
        n_groups: usize,
        n_reps: usize,
    }

    fn stats(h: &Hyperparameters, data: &BalancedOneWayData) -> Stats {
        let means = data.summarize().group_means;
        Stats {
            sse: decompose(data).sse,
            spread: means.iter().map(|m| (m - h.alpha0).powi(2)).sum(),
            n: data.n(),
            n_groups: data.n_groups(),
            n_reps: data.n_reps(),
        }
    }

    /// `ln p(σ²_ε | Y)` up to a constant.
    pub fn ln_post_sigma2_eps(h: &Hyperparameters, data: &BalancedOneWayData, sigma2_eps: f64) -> Result<f64> {
        if !(sigma2_eps > 0.0) {
            return Err(domain("sigma2_eps must be > 0"));
        }
        let s = stats(h, data);
        let shape = h.u_eps + (s.n - s.n_groups) as f64 / 2.0;
        Ok(-(shape + 1.0) * sigma2_eps.ln() - (h.v_eps + 0.5 * s.sse) / sigma2_eps)
    }

    /// `ς²_αε = (τ_α/σ²_α + τ_ε/σ²_ε)⁻¹`.
    pub fn varsigma2(h: &Hyperparameters, sigma2_alpha: f64, sigma2_eps: f64) -> f64 {
        1.0 / (h.tau_alpha / sigma2_alpha + h.tau_eps / sigma2_eps)
    }

    /// `ln p(σ²_α | Y, σ²_ε)` up to a constant, for `σ²_α + κ_ε σ²_ε > 0`.
    ///
    /// Negative `σ²_α` is accepted as long as the shifted variance stays
    /// positive; that region is where the posterior puts its mass at zero.
    pub fn ln_post_sigma2_alpha(
        h: &Hyperparameters,
        data: &BalancedOneWayData,
        sigma2_alpha: f64,
        sigma2_eps: f64,
    ) -> Result<f64> {
        if !(sigma2_eps > 0.0) {
            return Err(domain("sigma2_eps must be > 0"));
        }
        let shifted = sigma2_alpha + h.kappa_eps * sigma2_eps;
        if !(shifted > 0.0) {
            return Err(domain("sigma2_alpha + kappa_eps * sigma2_eps must be > 0"));
        }
        let s = stats(h, data);
        let spread_var = varsigma2(h, sigma2_alpha, sigma2_eps) + sigma2_eps / s.n_reps as f64;
        if !(spread_var > 0.0) {
            return Err(domain("group-mean variance must be > 0"));
        }
        Ok(-(h.u_alpha + 1.0) * shifted.ln()
            - 0.5 * s.n_groups as f64 * spread_var.ln()
            - h.v_alpha / shifted
            - 0.5 * s.spread / spread_var)
    }

    /// `ln p(α_i | Y, σ²_ε, σ²_α)` (normalized) with precision
    /// `Q_α = τ_α/σ²_α + (τ_ε + n_J)/σ²_ε`.
    pub fn ln_post_alpha(
        h: &Hyperparameters,
        data: &BalancedOneWayData,
        group: usize,
        alpha: f64,
        sigma2_alpha: f64,
        sigma2_eps: f64,
    ) -> Result<f64> {
        if group >= data.n_groups() {
            return Err(Error::UnknownGroup {
                index: group,
                n_groups: data.n_groups(),
            });
        }
        if !(sigma2_alpha > 0.0) || !(sigma2_eps > 0.0) {
            return Err(domain("variances must be > 0"));
        }
        let alpha_hat = data.summarize().group_means[group];
        let n_j = data.n_reps() as f64;
        let inv_vs = 1.0 / varsigma2(h, sigma2_alpha, sigma2_eps);
        let q = inv_vs + n_j / sigma2_eps;
        let mean = (inv_vs * h.alpha0 + n_j / sigma2_eps * alpha_hat) / q;
        Ok(0.5 * (q / (2.0 * std::f64::consts::PI)).ln() - 0.5 * q * (alpha - mean).powi(2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::rail;
    use approx::assert_relative_eq;

    fn toy() -> BalancedOneWayData {
        BalancedOneWayData::from_rows(vec![vec![0.0, 2.0], vec![4.0, 6.0]]).unwrap()
    }

    #[test]
    fn density_by_substitution() {
        let p = NigParams::new(0.0, 1.0, 1.0, 1.0).unwrap();
        let d = nig_density(&p, 0.0, 1.0).unwrap();
        assert!(d.normalized);
        assert_relative_eq!(
            d.value,
            (-1.0f64).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            max_relative = 1e-13
        );
        assert!(nig_density(&p, 0.0, 0.0).is_err());
    }

    #[test]
    fn density_symmetric_in_mu() {
        let p = NigParams::new(1.5, 2.0, 3.0, 0.7).unwrap();
        for &dm in &[0.1, 0.8, 2.0] {
            let a = nig_density(&p, 1.5 + dm, 0.4).unwrap().value;
            let b = nig_density(&p, 1.5 - dm, 0.4).unwrap().value;
            assert_relative_eq!(a, b, max_relative = 1e-14);
        }
    }

    #[test]
    fn density_integrates_to_one() {
        // tensor midpoint rule over (μ, ln σ²)
        let p = NigParams::new(0.5, 2.0, 3.0, 2.0).unwrap();
        let (nm, ns) = (400, 600);
        let (m_lo, m_hi) = (-6.0, 7.0);
        let (l_lo, l_hi) = (-6.0f64, 5.0f64);
        let dm = (m_hi - m_lo) / nm as f64;
        let dl = (l_hi - l_lo) / ns as f64;
        let mut total = 0.0;
        for i in 0..nm {
            let mu = m_lo + (i as f64 + 0.5) * dm;
            for j in 0..ns {
                let s2 = (l_lo + (j as f64 + 0.5) * dl).exp();
                total += nig_density(&p, mu, s2).unwrap().value * s2 * dm * dl;
            }
        }
        assert!((total - 1.0).abs() < 1e-3, "total {total}");
    }

    #[test]
    fn improper_kernels_match_jeffreys() {
        let ind = PriorPreset::JeffreysIndependence.nig();
        let mv = PriorPreset::JeffreysMultivariate.nig();
        assert_eq!(PriorPreset::JeffreysIndependence.inverse_gamma(), (0.0, 0.0));
        assert_eq!(PriorPreset::JeffreysMultivariate.inverse_gamma(), (0.5, 0.0));
        for &s2 in &[0.3, 1.0, 4.0] {
            let a = nig_density(&ind, 0.7, s2).unwrap();
            assert!(!a.normalized);
            assert_relative_eq!(a.value, 1.0 / s2, max_relative = 1e-14);
            let b = nig_density(&mv, -2.0, s2).unwrap();
            assert_relative_eq!(b.value, s2.powf(-1.5), max_relative = 1e-14);
        }
    }

    #[test]
    fn update_cases() {
        let p = NigParams::new(0.3, 1.2, 2.0, 0.4).unwrap();
        assert_eq!(nig_update(&p, 0, 9.0, 9.0), p);

        let flat = NigParams::new(0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(
            nig_update(&flat, 4, 3.0, 20.0),
            NigParams {
                mu0: 3.0,
                tau: 4.0,
                u: 2.0,
                v: 10.0
            }
        );

        let unit = NigParams::new(0.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(
            nig_update(&unit, 1, 0.0, 0.0),
            NigParams {
                mu0: 0.0,
                tau: 2.0,
                u: 1.5,
                v: 1.0
            }
        );
    }

    #[test]
    fn update_shrink_term_uses_harmonic_form() {
        let p = NigParams::new(1.0, 2.0, 1.0, 1.0).unwrap();
        let q = nig_update(&p, 3, 4.0, 5.0);
        let expected_v = 1.0 + 0.5 * (5.0 + 9.0 / (1.0 / 3.0 + 1.0 / 2.0));
        assert_relative_eq!(q.v, expected_v, max_relative = 1e-14);
        assert_relative_eq!(q.mu0, (2.0 + 12.0) / 5.0, max_relative = 1e-14);
    }

    #[test]
    fn default_hypers() {
        let h = default_hyperparameters(&toy());
        assert_eq!(h.alpha0, 3.0);
        assert_eq!(h.kappa_eps, 0.5);
        assert_eq!(h.tau_alpha, 1.0);
        assert_eq!(
            (h.u_alpha, h.v_alpha, h.u_eps, h.v_eps, h.tau_eps),
            (0.0, 0.0, 0.0, 0.0, 0.0)
        );
        assert!(h.conjugate_mode(2));

        let r = rail();
        let h = default_hyperparameters(&r);
        assert_eq!(h.alpha0, r.summarize().grand_mean);
        assert_eq!(h.kappa_eps, 1.0 / 3.0);
        assert!(h.conjugate_mode(3));
    }

    #[test]
    fn toy_posterior() {
        let post = posterior_update(&default_hyperparameters(&toy()), &toy()).unwrap();
        assert_eq!(post.ig_eps, InvGammaParams { u: 1.0, v: 2.0 });
        assert_eq!(post.ig_alpha_eps, InvGammaParams { u: 1.0, v: 4.0 });
        assert!(post.is_proper());
    }

    #[test]
    fn constant_data_is_degenerate() {
        let d = BalancedOneWayData::from_rows(vec![vec![2.0; 3]; 3]).unwrap();
        let post = posterior_update(&default_hyperparameters(&d), &d).unwrap();
        assert!(!post.is_proper());
        assert!(matches!(post.check_proper(), Err(Error::DegeneratePosterior(_))));
    }

    #[test]
    fn non_conjugate_rejected() {
        let d = toy();
        let mut h = default_hyperparameters(&d);
        h.tau_eps = 0.5;
        assert!(matches!(
            posterior_update(&h, &d),
            Err(Error::NonConjugateConfig { .. })
        ));
        let mut h = default_hyperparameters(&d);
        h.kappa_eps = 0.3;
        assert!(matches!(
            posterior_update(&h, &d),
            Err(Error::NonConjugateConfig { .. })
        ));
    }

    #[test]
    fn hyper_json_field_names() {
        let h = default_hyperparameters(&toy());
        let v: serde_json::Value = serde_json::to_value(h).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(
            keys,
            [
                "alpha0",
                "kappa_eps",
                "tau_alpha",
                "tau_eps",
                "u_alpha",
                "u_eps",
                "v_alpha",
                "v_eps"
            ]
        );
        let back: Hyperparameters = serde_json::from_value(v).unwrap();
        assert_eq!(back, h);

        let o: HyperOverrides = serde_json::from_str(r#"{"u_eps": 2, "v_eps": 1.5}"#).unwrap();
        let h2 = h.with_overrides(&o);
        assert_eq!((h2.u_eps, h2.v_eps, h2.alpha0), (2.0, 1.5, 3.0));
        assert!(serde_json::from_str::<HyperOverrides>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn general_densities_reduce_to_conjugate_kernel() {
        // With τ_ε = 0 the σ²_α conditional is the IG kernel in σ²_αε (τ_α = 1).
        let d = rail();
        let h = default_hyperparameters(&d);
        let post = posterior_update(&h, &d).unwrap();
        let s2e = 17.0;
        let ln_ig = |s2ae: f64| -(post.ig_alpha_eps.u + 1.0) * s2ae.ln() - post.ig_alpha_eps.v / s2ae;
        let base = general::ln_post_sigma2_alpha(&h, &d, 100.0, s2e).unwrap() - ln_ig(100.0 + s2e / 3.0);
        for &s2a in &[-5.0, 1.0, 300.0, 2000.0] {
            let got = general::ln_post_sigma2_alpha(&h, &d, s2a, s2e).unwrap() - ln_ig(s2a + s2e / 3.0);
            assert_relative_eq!(got, base, epsilon = 1e-9);
        }
        // α conditional agrees with the group-location recipe
        let loc = post.alpha_loc_weights[2];
        let (m, v) = loc.conditional(h.alpha0, 500.0, s2e);
        let at_mean = general::ln_post_alpha(&h, &d, 2, m, 500.0, s2e).unwrap();
        assert_relative_eq!(
            at_mean,
            -0.5 * (2.0 * std::f64::consts::PI * v).ln(),
            max_relative = 1e-12
        );
    }
}

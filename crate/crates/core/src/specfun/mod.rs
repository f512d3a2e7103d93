//! Special functions, distribution tails and random samplers.

mod beta;
mod gamma;
mod rng;
mod sampling;

pub use beta::{f_upper_tail, reg_inc_beta};
pub use gamma::{ln_gamma, reg_lower_gamma, reg_upper_gamma};
pub use rng::{derive_seed, RngStream};
pub use sampling::{sample_gamma, sample_inv_gamma, sample_normal};

use crate::error::{domain, Result};

/// `Pr(χ²_df ≤ x)`.
pub fn chi2_cdf(x: f64, df: u32) -> Result<f64> {
    if df == 0 {
        return Err(domain("chi-square degrees of freedom must be positive"));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    reg_lower_gamma(df as f64 / 2.0, x / 2.0)
}

/// The `p` quantile of `χ²_df`, by bisection on the regularized incomplete gamma.
pub fn chi2_quantile(p: f64, df: u32) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("quantile level must lie in (0, 1), got {p}")));
    }
    if df == 0 {
        return Err(domain("chi-square degrees of freedom must be positive"));
    }
    let a = df as f64 / 2.0;
    let cdf = |q: f64| gamma::lower_unchecked(a, q / 2.0);
    let mut lo = 0.0;
    let mut hi = df as f64 + 10.0;
    while cdf(hi) < p {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Inverse-gamma CDF: `Pr(X ≤ x) = Q(u, v/x)`.
pub fn inv_gamma_cdf(x: f64, u: f64, v: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    reg_upper_gamma(u, v / x)
}

/// Log density of `Γ^{-1}(u, v)` at `x > 0`.
pub fn inv_gamma_ln_pdf(x: f64, u: f64, v: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(format!("inverse-gamma density needs x > 0, got {x}")));
    }
    Ok(u * v.ln() - ln_gamma(u)? - (u + 1.0) * x.ln() - v / x)
}

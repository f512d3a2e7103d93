//! Exact samplers for the normal, gamma and inverse-gamma laws.

use rand::distr::Open01;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{domain, Result};

/// Draws from `N(mean, variance)`. Zero variance returns `mean` exactly.
pub fn sample_normal<R: Rng + ?Sized>(rng: &mut R, mean: f64, variance: f64) -> Result<f64> {
    if !(variance >= 0.0) {
        return Err(domain(format!("normal variance must be >= 0, got {variance}")));
    }
    if variance == 0.0 {
        return Ok(mean);
    }
    let z: f64 = StandardNormal.sample(rng);
    Ok(mean + variance.sqrt() * z)
}

/// Draws from `Gamma(shape, rate)` with the Marsaglia–Tsang squeeze.
///
/// For `shape < 1` the draw at `shape + 1` is scaled by `U^(1/shape)`.
pub fn sample_gamma<R: Rng + ?Sized>(rng: &mut R, shape: f64, rate: f64) -> Result<f64> {
    if !(shape > 0.0) || !shape.is_finite() {
        return Err(domain(format!("gamma shape must be > 0, got {shape}")));
    }
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(domain(format!("gamma rate must be > 0, got {rate}")));
    }
    Ok(standard_gamma(rng, shape) / rate)
}

fn standard_gamma<R: Rng + ?Sized>(rng: &mut R, shape: f64) -> f64 {
    if shape < 1.0 {
        let boost: f64 = rng.sample::<f64, _>(Open01).powf(1.0 / shape);
        return standard_gamma(rng, shape + 1.0) * boost;
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let (x, v) = loop {
            let x: f64 = StandardNormal.sample(rng);
            let v = 1.0 + c * x;
            if v > 0.0 {
                break (x, v * v * v);
            }
        };
        let u: f64 = rng.sample(Open01);
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v;
        }
        if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// Draws `X` with density `∝ x^(-u-1) e^(-v/x)`, as `1/G` with `G ~ Gamma(u, rate v)`.
pub fn sample_inv_gamma<R: Rng + ?Sized>(rng: &mut R, u: f64, v: f64) -> Result<f64> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(domain(format!("inverse-gamma shape must be > 0, got {u}")));
    }
    if !(v > 0.0) || !v.is_finite() {
        return Err(domain(format!("inverse-gamma scale must be > 0, got {v}")));
    }
    Ok(v / standard_gamma(rng, u))
}

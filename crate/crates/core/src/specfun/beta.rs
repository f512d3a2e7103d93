use super::gamma::ln_gamma_pos;
use crate::error::{domain, Result};

const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

/// Regularized incomplete beta `I_x(a, b)`.
pub fn reg_inc_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(domain(format!("incomplete beta needs a, b > 0, got a={a}, b={b}")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("incomplete beta needs 0 <= x <= 1, got {x}")));
    }
    Ok(inc_beta_unchecked(a, b, x))
}

pub(crate) fn inc_beta_unchecked(a: f64, b: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma_pos(a + b) - ln_gamma_pos(a) - ln_gamma_pos(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    // The fraction converges quickly only left of the mean; use the
    // symmetry I_x(a, b) = 1 - I_{1-x}(b, a) elsewhere.
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cont_frac(a, b, x) / a
    } else {
        1.0 - front * beta_cont_frac(b, a, 1.0 - x) / b
    }
}

fn beta_cont_frac(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    let max_iter = 1_000 + 10 * (a.max(b).sqrt().ceil() as usize);
    for m in 1..=max_iter {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// `Pr(F_{d1,d2} > f)`.
pub fn f_upper_tail(f: f64, d1: u64, d2: u64) -> Result<f64> {
    if !(f >= 0.0) {
        return Err(domain(format!("F statistic must be >= 0, got {f}")));
    }
    if d1 == 0 || d2 == 0 {
        return Err(domain("F degrees of freedom must be positive"));
    }
    if f == f64::INFINITY {
        return Ok(0.0);
    }
    let (d1, d2) = (d1 as f64, d2 as f64);
    // 1 - I_{d1 f/(d1 f + d2)}(d1/2, d2/2), written on the complementary
    // argument to keep precision in the far tail
    let x = d2 / (d2 + d1 * f);
    Ok(inc_beta_unchecked(d2 / 2.0, d1 / 2.0, x))
}

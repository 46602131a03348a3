//! Log-gamma and the regularized lower incomplete gamma function.

use crate::error::{Error, Result};

/// Stirling series coefficients B_{2k} / (2k (2k−1)).
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
];

const HALF_LN_TWO_PI: f64 = 0.918938533204672741780329736406;

/// ln Γ(x) for x > 0.
///
/// Stirling's series with Bernoulli correction terms for x ≥ 15, upward
/// recursion ln Γ(x) = ln Γ(x+1) − ln x below. Relative error stays under
/// about 1e−14 away from the zeros at x = 1, 2 (absolute ~3e−15 there).
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    let mut shift = 0.0;
    let mut y = x;
    while y < 15.0 {
        shift += y.ln();
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let mut series = 0.0;
    let mut power = 1.0 / y;
    for c in STIRLING {
        series += c * power;
        power *= inv2;
    }
    Ok((y - 0.5) * y.ln() - y + HALF_LN_TWO_PI + series - shift)
}

const INC_GAMMA_MAX_ITER: usize = 600;
const INC_GAMMA_EPS: f64 = 1e-16;

/// Regularized lower incomplete gamma P(a, x) = γ(a, x) / Γ(a).
///
/// Series expansion for x < a + 1, Lentz continued fraction for the upper
/// complement otherwise. Absolute error ≲ 1e−13 over the crate's range.
pub fn reg_lower_inc_gamma(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!(
            "reg_lower_inc_gamma requires a > 0, got a={a}"
        )));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "reg_lower_inc_gamma requires x >= 0, got x={x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    // Common scale factor x^a e^{-x} / Γ(a).
    let log_scale = a * x.ln() - x - log_gamma(a)?;
    let p = if x < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut n = 1.0;
        loop {
            term *= x / (a + n);
            sum += term;
            if term.abs() < sum.abs() * INC_GAMMA_EPS {
                break;
            }
            n += 1.0;
            if n as usize > INC_GAMMA_MAX_ITER {
                return Err(Error::QuadratureResidual {
                    residual: term.abs(),
                    tolerance: sum.abs() * INC_GAMMA_EPS,
                });
            }
        }
        sum * log_scale.exp()
    } else {
        // Continued fraction for Q(a, x), modified Lentz.
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        let mut converged = false;
        for i in 1..=INC_GAMMA_MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < INC_GAMMA_EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::QuadratureResidual {
                residual: f64::NAN,
                tolerance: INC_GAMMA_EPS,
            });
        }
        1.0 - log_scale.exp() * h
    };
    Ok(p.clamp(0.0, 1.0))
}

//! The Jacobi function φ_λ^{(α,β)} by two independent routes: the ₂F₁ series
//! and the Laplace integral representation against m_{α,β}.
//!
//! Tested spectral paths are the real line λ ∈ ℝ and the shifted line
//! λ ∈ iρ + ℝ used by every statistical caller; other complex λ are accepted
//! but carry no accuracy claim here.

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::hypergroup::{integrate_m_with_residual, QuadratureSpec};
use crate::params::JacobiParams;
use crate::specfun::hyp2f1::gauss_2f1;

/// Largest t for which −sh²t is representable; beyond it the operations
/// return an overflow error instead of degrading silently.
pub(crate) fn check_sh2(t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("need t >= 0, got {t}")));
    }
    let sh = t.sinh();
    let sh2 = sh * sh;
    if !sh2.is_finite() {
        return Err(Error::Overflow(format!("sh^2 t overflows at t = {t}")));
    }
    Ok(sh2)
}

/// φ_λ^{(α,β)}(t) = ₂F₁((ρ−iλ)/2, (ρ+iλ)/2; α+1; −sh²t).
pub fn jacobi_phi_series(p: &JacobiParams, lambda: Complex, t: f64) -> Result<Complex> {
    let sh2 = check_sh2(t)?;
    let rho = p.rho();
    // iλ = (−λ_im, λ_re)
    let a = Complex::new(0.5 * (rho + lambda.im), -0.5 * lambda.re);
    let b = Complex::new(0.5 * (rho - lambda.im), 0.5 * lambda.re);
    let value = gauss_2f1(a, b, p.alpha() + 1.0, -sh2)?;
    if !value.is_finite() {
        return Err(Error::NonFinite("jacobi_phi_series"));
    }
    Ok(value)
}

/// φ_λ^{(α,β)}(t) = ∫∫ |ch t + r e^{iφ} sh t|^{iλ−ρ} dm_{α,β}(r,φ).
///
/// Returns the doubled-order evaluation; the |fine − coarse| residual
/// estimate bounds the coarse error, so refusal is set at 1e−7 — an order
/// of magnitude above the fine value's expected error under spectral
/// convergence.
pub fn jacobi_phi_integral(
    p: &JacobiParams,
    lambda: Complex,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<Complex> {
    check_sh2(t)?;
    let rho = p.rho();
    let exponent = Complex::new(-lambda.im - rho, lambda.re); // iλ − ρ
    let ln_ch = stable_ln_cosh(t);
    let th = t.tanh();
    let (value, residual) = integrate_m_with_residual(
        p,
        |r, phi| {
            let c = phi.cos();
            let s = phi.sin();
            let ln_modulus = ln_ch + 0.5 * ((1.0 + r * c * th).powi(2) + (r * s * th).powi(2)).ln();
            exponent.scale(ln_modulus).exp()
        },
        spec,
    )?;
    let tol = 1e-7 * value.abs().max(1.0);
    if residual > tol {
        return Err(Error::QuadratureResidual {
            residual,
            tolerance: tol,
        });
    }
    if !value.is_finite() {
        return Err(Error::NonFinite("jacobi_phi_integral"));
    }
    Ok(value)
}

pub(crate) fn stable_ln_cosh(t: f64) -> f64 {
    if t > 20.0 {
        t + (-2.0 * t).exp().ln_1p() - std::f64::consts::LN_2
    } else {
        t.cosh().ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: f64, b: f64) -> JacobiParams {
        JacobiParams::new(a, b).unwrap()
    }

    #[test]
    fn phi_at_origin_is_one() {
        let p = params(2.5, 0.5);
        for lam in [
            Complex::from_re(1.3),
            Complex::new(0.5, 2.0),
            Complex::i_times(4.0),
        ] {
            assert_eq!(jacobi_phi_series(&p, lam, 0.0).unwrap(), Complex::ONE);
            let intg = jacobi_phi_integral(&p, lam, 0.0, &QuadratureSpec::default()).unwrap();
            assert!((intg - Complex::ONE).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_minus_i_rho_gives_constant_one() {
        // λ = −iρ makes the first series parameter vanish, so φ ≡ 1;
        // in the integral route the exponent iλ−ρ is zero.
        for (a, b) in [(2.5, 0.5), (2.0, -0.5), (1.5, 1.5)] {
            let p = params(a, b);
            let lam = Complex::i_times(-p.rho());
            for &t in &[0.3, 1.0, 4.0] {
                let s = jacobi_phi_series(&p, lam, t).unwrap();
                assert!((s - Complex::ONE).abs() < 1e-14, "series at t={t}: {s}");
                let q = jacobi_phi_integral(&p, lam, t, &QuadratureSpec::default()).unwrap();
                assert!((q - Complex::ONE).abs() < 1e-10, "integral at t={t}: {q}");
            }
        }
    }

    #[test]
    fn series_is_even_in_lambda() {
        let p = params(2.5, 0.5);
        for &t in &[0.2, 1.0, 3.0] {
            for lam in [Complex::from_re(1.7), Complex::new(0.8, 1.1)] {
                let plus = jacobi_phi_series(&p, lam, t).unwrap();
                let minus = jacobi_phi_series(&p, -lam, t).unwrap();
                assert!((plus - minus).abs() < 1e-12, "t={t} lam={lam}");
            }
        }
    }

    #[test]
    fn statistical_line_is_a_characteristic_function() {
        // |φ_{iρ−λ}(t)| ≤ 1 for real λ
        // the documented envelope: |λ| up to 5 for t ≤ 3, up to 2 for t ≤ 5
        for (a, b) in [(2.5, 0.5), (3.0, -0.5), (2.0, 2.0)] {
            let p = params(a, b);
            for &(lam, t_max) in &[(0.3, 5.0), (1.0, 5.0), (2.0, 5.0), (5.0, 3.0)] {
                for &t in &[0.1, 1.0, 3.0, 5.0] {
                    if t > t_max {
                        continue;
                    }
                    let v = jacobi_phi_series(&p, Complex::new(-lam, p.rho()), t).unwrap();
                    assert!(v.abs() <= 1.0 + 1e-12, "|phi|={} at t={t}", v.abs());
                }
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        let p = params(1.0, 0.0);
        match jacobi_phi_series(&p, Complex::from_re(1.0), 400.0) {
            Err(Error::Overflow(_)) => {}
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn routes_agree_at_spot_check() {
        let p = params(2.5, 0.5);
        let lam = Complex::from_re(1.3);
        let s = jacobi_phi_series(&p, lam, 0.7).unwrap();
        let q = jacobi_phi_integral(&p, lam, 0.7, &QuadratureSpec::default()).unwrap();
        assert!((s - q).abs() < 1e-10, "{s} vs {q}");
    }

    #[test]
    fn quadratic_transform_identity() {
        // φ_{2λ}^{(α,α)}(t) = φ_λ^{(α,−1/2)}(2t)
        for &alpha in &[0.5, 1.0, 2.5] {
            let paa = params(alpha, alpha);
            let pad = params(alpha, -0.5);
            for &t in &[0.2, 0.7, 1.4] {
                for &lam in &[0.4, 1.0, 2.3] {
                    let lhs = jacobi_phi_series(&paa, Complex::from_re(2.0 * lam), t).unwrap();
                    let rhs = jacobi_phi_series(&pad, Complex::from_re(lam), 2.0 * t).unwrap();
                    assert!(
                        (lhs - rhs).abs() < 1e-10,
                        "alpha={alpha}, t={t}, lam={lam}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }
}

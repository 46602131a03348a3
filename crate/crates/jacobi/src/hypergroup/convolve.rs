//! Point convolution δ_s ∗ δ_t (quadrature expectation and exact sampling)
//! and the moment functions m_k.

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::hypergroup::measure::{
    integrate_m_with_residual, MeasureKind, MeasureRule, QuadratureSpec,
};
use crate::params::JacobiParams;
use crate::rng::RandomSource;
use crate::specfun::stable_ln_cosh;

/// arcosh|ch s · ch t + r e^{iφ} sh s · sh t|, the support point of
/// δ_s ∗ δ_t selected by (r, φ).
///
/// Computed from q = w²−1 expanded in products of sh/ch so the small-q corner
/// (s=t, r=1, φ=π) cancels analytically rather than catastrophically; for
/// s+t beyond f64 range the log form takes over.
pub(crate) fn hyperbolic_distance(s: f64, t: f64, r: f64, cos_phi: f64, sin_phi: f64) -> f64 {
    if s == 0.0 {
        return t;
    }
    if t == 0.0 {
        return s;
    }
    if s + t <= 300.0 {
        let shs = s.sinh();
        let sht = t.sinh();
        let prod = shs * sht;
        let q = shs * shs
            + sht * sht
            + 2.0 * r * cos_phi * prod * (s - t).cosh()
            + prod * prod * (1.0 + 2.0 * r * cos_phi + r * r);
        q.max(0.0).sqrt().asinh()
    } else {
        let u = r * s.tanh() * t.tanh();
        let g2 = (1.0 + u * cos_phi).powi(2) + (u * sin_phi).powi(2);
        let ln_w = stable_ln_cosh(s) + stable_ln_cosh(t) + 0.5 * g2.ln();
        if ln_w > 30.0 {
            ln_w + std::f64::consts::LN_2
        } else {
            // w moderate despite huge s+t: fall through to the exact form
            let w = ln_w.exp();
            (w * w - 1.0).max(0.0).sqrt().asinh()
        }
    }
}

/// One draw from δ_s ∗ δ_t: sample (r, φ) ~ m_{α,β} and map through the
/// distance kernel. The arcosh argument is clamped at 1 against rounding.
pub fn convolve_sample(p: &JacobiParams, s: f64, t: f64, rng: &mut RandomSource) -> f64 {
    if s == 0.0 {
        return t;
    }
    if t == 0.0 {
        return s;
    }
    let (r, cos_phi, sin_phi) = sample_r_cos(p, rng);
    hyperbolic_distance(s, t, r, cos_phi, sin_phi)
}

/// (r, cos φ, sin φ) under m_{α,β}; shared by `sample_m` and the walk loop.
pub(crate) fn sample_r_cos(p: &JacobiParams, rng: &mut RandomSource) -> (f64, f64, f64) {
    match MeasureKind::classify(p) {
        MeasureKind::Generic => {
            let r = rng.beta(p.beta() + 1.0, p.alpha() - p.beta()).sqrt();
            let cos_phi = 1.0 - 2.0 * rng.beta(p.beta() + 0.5, p.beta() + 0.5);
            let sin_phi = (1.0 - cos_phi * cos_phi).max(0.0).sqrt();
            (r, cos_phi, sin_phi)
        }
        MeasureKind::BetaDegenerate => {
            let r = rng.beta(0.5, p.alpha() + 0.5).sqrt();
            let cos_phi = if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 };
            (r, cos_phi, 0.0)
        }
        MeasureKind::AlphaEqualsBeta => {
            let cos_phi = 1.0 - 2.0 * rng.beta(p.alpha() + 0.5, p.alpha() + 0.5);
            let sin_phi = (1.0 - cos_phi * cos_phi).max(0.0).sqrt();
            (1.0, cos_phi, sin_phi)
        }
    }
}

/// ∫ f d(δ_s ∗ δ_t) by quadrature against m_{α,β}.
pub fn convolve_point_expect<F>(
    p: &JacobiParams,
    s: f64,
    t: f64,
    f: F,
    spec: &QuadratureSpec,
) -> Result<Complex>
where
    F: Fn(f64) -> Complex,
{
    if !(s >= 0.0) || !(t >= 0.0) || !s.is_finite() || !t.is_finite() {
        return Err(Error::Domain(format!(
            "convolution points must be finite and nonnegative, got s={s}, t={t}"
        )));
    }
    let rule = MeasureRule::build(p, spec)?;
    let value = rule.integrate(|r, phi, cos_phi| {
        let sin_phi = phi.sin();
        f(hyperbolic_distance(s, t, r, cos_phi, sin_phi))
    });
    if !value.is_finite() {
        return Err(Error::NonFinite("convolve_point_expect"));
    }
    Ok(value)
}

/// Moment function m_k(t) = ∫∫ (ln|ch t + r e^{iφ} sh t|)^k dm_{α,β}.
///
/// The α=β case reduces through the quadratic transform:
/// m_k^{(α,α)}(t) = 2^{−k} m_k^{(α,−1/2)}(2t).
pub fn moment_fn(p: &JacobiParams, k: u32, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(moment_fn_with_residual(p, k, t, spec)?.0)
}

/// Same as `moment_fn`, also returning the order-doubling residual estimate
/// so callers can warn when the log corner at large t degrades it.
pub fn moment_fn_with_residual(
    p: &JacobiParams,
    k: u32,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    if k == 0 {
        return Err(Error::Domain("moment_fn requires k >= 1".into()));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("moment_fn requires t >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok((0.0, 0.0));
    }
    if MeasureKind::classify(p) == MeasureKind::AlphaEqualsBeta {
        let reduced = JacobiParams::new(p.alpha(), -0.5)?;
        let (v, resid) = moment_fn_with_residual(&reduced, k, 2.0 * t, spec)?;
        let scale = 0.5f64.powi(k as i32);
        return Ok((scale * v, scale * resid));
    }
    let ln_ch = stable_ln_cosh(t);
    let th = t.tanh();
    let (value, residual) = integrate_m_with_residual(
        p,
        |r, phi| {
            let c = phi.cos();
            let s = phi.sin();
            let ln_mod = ln_ch + 0.5 * ((1.0 + r * c * th).powi(2) + (r * s * th).powi(2)).ln();
            Complex::from_re(ln_mod.powi(k as i32))
        },
        spec,
    )?;
    Ok((value.re, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergroup::measure::integrate_m;
    use crate::specfun::{bessel_j, jacobi_phi_series};

    fn params(a: f64, b: f64) -> JacobiParams {
        JacobiParams::new(a, b).unwrap()
    }

    #[test]
    fn delta_zero_is_unit() {
        let p = params(2.5, 0.5);
        let spec = QuadratureSpec::default();
        let f = |x: f64| Complex::from_re(x * x + 1.0);
        let v = convolve_point_expect(&p, 0.0, 1.3, f, &spec).unwrap();
        // the integrand is constant, so the error is the mass defect
        assert!((v.re - (1.3 * 1.3 + 1.0)).abs() < 1e-11);
        let mut rng = RandomSource::new(3);
        assert_eq!(convolve_sample(&p, 0.0, 1.3, &mut rng), 1.3);
        assert_eq!(convolve_sample(&p, 0.7, 0.0, &mut rng), 0.7);
    }

    #[test]
    fn distance_kernel_edges() {
        // r=1, φ=0 gives s+t; r=1, φ=π gives |s−t|
        let d_plus = hyperbolic_distance(0.8, 1.9, 1.0, 1.0, 0.0);
        assert!((d_plus - 2.7).abs() < 1e-12);
        let d_minus = hyperbolic_distance(0.8, 1.9, 1.0, -1.0, 0.0);
        assert!((d_minus - 1.1).abs() < 1e-9);
        // coincident endpoint: exact zero after clamping
        let zero = hyperbolic_distance(1.3, 1.3, 1.0, -1.0, 0.0);
        assert!(zero.abs() < 1e-7, "{zero}");
    }

    #[test]
    fn distance_kernel_log_branch_matches_direct_formula() {
        // the log branch engages for s+t > 300; evaluate the q-formula by
        // hand where it is still representable and compare
        let cases = [
            (170.0f64, 140.0f64, 0.4, 0.2),
            (250.0, 60.0, 0.9, -0.8),
            (155.0, 150.0, 0.1, 0.99),
        ];
        for (s, t, r, cos_phi) in cases {
            let sin_phi = (1.0f64 - cos_phi * cos_phi).sqrt();
            let direct = {
                let shs = s.sinh();
                let sht = t.sinh();
                let prod = shs * sht;
                let q = shs * shs
                    + sht * sht
                    + 2.0 * r * cos_phi * prod * (s - t).cosh()
                    + prod * prod * (1.0 + 2.0 * r * cos_phi + r * r);
                q.sqrt().asinh()
            };
            let via_log = hyperbolic_distance(s, t, r, cos_phi, sin_phi);
            assert!(
                (direct - via_log).abs() < 1e-9 * direct,
                "s={s}, t={t}: {direct} vs {via_log}"
            );
        }
    }

    #[test]
    fn multiplicativity_of_phi() {
        // ∫ φ_λ d(δ_s ∗ δ_t) = φ_λ(s) φ_λ(t); the integrand is analytic so
        // order 48 is already beyond the 1e-8 budget
        let spec = QuadratureSpec::new(48, 48).unwrap();
        for (a, b) in [(2.5, 0.5), (1.5, 0.0), (2.0, -0.5), (1.0, 1.0)] {
            let p = params(a, b);
            for &lam in &[0.0, 1.0, 5.0] {
                let lambda = Complex::from_re(lam);
                for &(s, t) in &[(0.3, 0.8), (1.5, 0.4)] {
                    let lhs = convolve_point_expect(
                        &p,
                        s,
                        t,
                        |x| jacobi_phi_series(&p, lambda, x).unwrap(),
                        &spec,
                    )
                    .unwrap();
                    let rhs = jacobi_phi_series(&p, lambda, s).unwrap()
                        * jacobi_phi_series(&p, lambda, t).unwrap();
                    assert!(
                        (lhs - rhs).abs() < 1e-8,
                        "({a},{b}) lam={lam} s={s} t={t}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn bessel_representation_under_the_measure() {
        // ∫∫ e^{i t r cos φ} dm_{α,β} = j_α(t) for α > β
        let spec = QuadratureSpec::default();
        for (a, b) in [(2.5, 0.5), (1.5, -0.5), (0.5, 0.0)] {
            let p = params(a, b);
            for &t in &[0.5, 2.0, 8.0] {
                let got = integrate_m(
                    &p,
                    |r, phi| Complex::i_times(t * r * phi.cos()).exp(),
                    &spec,
                )
                .unwrap();
                let expect = bessel_j(a, t).unwrap();
                assert!(
                    (got.re - expect).abs() < 1e-10 && got.im.abs() < 1e-10,
                    "({a},{b}) t={t}: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn moment_fn_basics() {
        let p = params(2.5, 0.5);
        let spec = QuadratureSpec::default();
        assert_eq!(moment_fn(&p, 1, 0.0, &spec).unwrap(), 0.0);
        assert!(moment_fn(&p, 0, 1.0, &spec).is_err());
        // m₁(t) ≤ t, and m₁ ≥ t − C for a fixed C
        for &t in &[0.5, 2.0, 10.0, 50.0] {
            let m1 = moment_fn(&p, 1, t, &spec).unwrap();
            assert!(m1 <= t + 1e-9, "t={t}: m1={m1}");
            assert!(m1 >= t - 2.0, "t={t}: m1={m1}");
        }
    }

    #[test]
    fn m1_is_nondecreasing_and_m2_below_t_squared() {
        let spec = QuadratureSpec::default();
        for (a, b) in [(2.5, 0.5), (2.0, -0.5), (1.0, 1.0)] {
            let p = params(a, b);
            let mut prev = 0.0;
            for i in 1..=160 {
                let t = 0.05 * i as f64;
                let m1 = moment_fn(&p, 1, t, &spec).unwrap();
                assert!(m1 + 1e-11 >= prev, "({a},{b}) t={t}: m1 decreased");
                prev = m1;
                let m2 = moment_fn(&p, 2, t, &spec).unwrap();
                assert!(m2 <= t * t + 1e-9, "({a},{b}) t={t}: m2={m2}");
                assert!(m2 + 1e-11 >= m1 * m1, "({a},{b}) t={t}: m2 < m1^2");
            }
        }
    }

    #[test]
    fn moment_reduction_alpha_equals_beta() {
        // m_k^{(α,α)}(t) = 2^{−k} m_k^{(α,−1/2)}(2t); the reduction path must
        // match the direct quadrature of the (α,α) measure itself.
        let spec = QuadratureSpec::default();
        let p = params(1.5, 1.5);
        for k in [1u32, 2, 3] {
            for &t in &[0.4, 1.1] {
                let reduced = moment_fn(&p, k, t, &spec).unwrap();
                let ln_ch = stable_ln_cosh(t);
                let th = t.tanh();
                let direct = integrate_m(
                    &p,
                    |r, phi| {
                        let ln_mod = ln_ch
                            + 0.5
                                * ((1.0 + r * phi.cos() * th).powi(2)
                                    + (r * phi.sin() * th).powi(2))
                                .ln();
                        Complex::from_re(ln_mod.powi(k as i32))
                    },
                    &spec,
                )
                .unwrap();
                assert!(
                    (reduced - direct.re).abs() < 1e-11,
                    "k={k} t={t}: {reduced} vs {}",
                    direct.re
                );
            }
        }
    }

    #[test]
    fn m1_additivity_over_finitely_supported_measures() {
        // ∫ m₁ d(μ∗ν) = ∫ m₁ dμ + ∫ m₁ dν for atomic μ, ν. The inner m₁
        // runs under every outer node, so keep the orders small.
        let p = params(2.0, 0.0);
        let spec = QuadratureSpec::new(24, 24).unwrap();
        let mu = [(0.4, 0.3), (1.2, 0.7)];
        let nu = [(0.9, 0.5), (0.2, 0.5)];
        let m1 = |x: f64| Complex::from_re(moment_fn(&p, 1, x, &spec).unwrap());
        let mut lhs = 0.0;
        for &(x, wx) in &mu {
            for &(y, wy) in &nu {
                lhs += wx * wy * convolve_point_expect(&p, x, y, m1, &spec).unwrap().re;
            }
        }
        let rhs: f64 = mu.iter().map(|&(x, w)| w * m1(x).re).sum::<f64>()
            + nu.iter().map(|&(y, w)| w * m1(y).re).sum::<f64>();
        assert!((lhs - rhs).abs() < 1e-6, "{lhs} vs {rhs}");
    }

    #[test]
    fn sampler_matches_quadrature_for_bounded_function() {
        // Monte Carlo mean within 4 standard errors of the quadrature value
        let p = params(2.5, 0.5);
        let spec = QuadratureSpec::default();
        let f = |x: f64| (x * 1.3).cos();
        let expect = convolve_point_expect(&p, 1.0, 1.0, |x| Complex::from_re(f(x)), &spec)
            .unwrap()
            .re;
        let mut rng = RandomSource::new(99);
        let n = 400_000;
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let v = f(convolve_sample(&p, 1.0, 1.0, &mut rng));
            s1 += v;
            s2 += v * v;
        }
        let mean = s1 / n as f64;
        let se = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
        assert!(
            (mean - expect).abs() < 4.0 * se,
            "{mean} vs {expect} (se {se})"
        );
    }

    #[test]
    fn identity_expectation_matches_ten_million_draw_oracle() {
        // E[Z] under delta_1 * delta_1 at (2.5, 0.5): quadrature vs 1e7 draws
        let p = params(2.5, 0.5);
        let expect =
            convolve_point_expect(&p, 1.0, 1.0, Complex::from_re, &QuadratureSpec::default())
                .unwrap()
                .re;
        let mut rng = RandomSource::new(314159);
        let n = 10_000_000;
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let z = convolve_sample(&p, 1.0, 1.0, &mut rng);
            s1 += z;
            s2 += z * z;
        }
        let mean = s1 / n as f64;
        let se = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
        assert!(
            (mean - expect).abs() < 4.0 * se,
            "{mean} vs {expect} (se {se})"
        );
    }

    #[test]
    fn second_moment_function_matches_monte_carlo_oracle() {
        // m_2(1) at (2.5, 0.5): quadrature vs 1e7 draws of (ln|ch t + r e^{i phi} sh t|)^2
        let p = params(2.5, 0.5);
        let t: f64 = 1.0;
        let expect = moment_fn(&p, 2, t, &QuadratureSpec::default()).unwrap();
        let ln_ch = t.cosh().ln();
        let th = t.tanh();
        let mut rng = RandomSource::new(271828);
        let n = 10_000_000;
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let (r, c, s) = sample_r_cos(&p, &mut rng);
            let v =
                (ln_ch + 0.5 * ((1.0 + r * c * th).powi(2) + (r * s * th).powi(2)).ln()).powi(2);
            s1 += v;
            s2 += v * v;
        }
        let mean = s1 / n as f64;
        let se = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
        assert!(
            (mean - expect).abs() < 4.0 * se,
            "{mean} vs {expect} (se {se})"
        );
    }

    #[test]
    fn m1_over_t_squared_is_bounded_near_zero() {
        // m1 is analytic with m1(t) ~ rho t^2/(2(alpha+1)) near 0; the ratio
        // m1(t)/t^2 stays inside a fixed band on (0, 0.1]. Bounds frozen
        // from the build-time run for (2.5, 0.5), where rho/(2(alpha+1)) = 4/7.
        let p = params(2.5, 0.5);
        let spec = QuadratureSpec::default();
        for i in 1..=20 {
            let t = 0.005 * i as f64;
            let ratio = moment_fn(&p, 1, t, &spec).unwrap() / (t * t);
            assert!((0.52..=0.58).contains(&ratio), "t={t}: m1/t^2 = {ratio}");
        }
    }
}

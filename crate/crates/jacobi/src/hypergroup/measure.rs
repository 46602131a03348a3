//! The convolution measure m_{α,β} on [0,1]×[0,π]: density, classification,
//! and quadrature rules against it.
//!
//! Accuracy note: the tensor rules are spectrally accurate whenever 2β and
//! 2(α−β) are nonnegative integers, which covers every committed grid. For
//! fractional parameters the endpoint exponents of the weight leave only
//! algebraic convergence (worst for β near −1/2); raise the orders there.

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::params::JacobiParams;
use crate::quad::GaussLegendre;
use crate::specfun::log_gamma;
use serde::{Deserialize, Serialize};

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Integration point (r, φ) ∈ [0,1]×[0,π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularRadialPoint {
    r: f64,
    phi: f64,
}

impl AngularRadialPoint {
    /// Clamps values within 1e−15 of the bounds; rejects anything further out.
    pub fn new(r: f64, phi: f64) -> Result<Self> {
        let clamp = |x: f64, lo: f64, hi: f64| -> Option<f64> {
            if x >= lo && x <= hi {
                Some(x)
            } else if x > lo - 1e-15 && x < hi + 1e-15 {
                Some(x.clamp(lo, hi))
            } else {
                None
            }
        };
        match (clamp(r, 0.0, 1.0), clamp(phi, 0.0, std::f64::consts::PI)) {
            (Some(r), Some(phi)) => Ok(AngularRadialPoint { r, phi }),
            _ => Err(Error::Domain(format!(
                "point (r={r}, phi={phi}) outside [0,1]x[0,pi]"
            ))),
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Which of the three forms the measure takes at the given parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureKind {
    /// α > β > −1/2: absolutely continuous on the rectangle.
    Generic,
    /// β = −1/2 < α: one-dimensional in r, φ an even coin flip on {0, π}.
    BetaDegenerate,
    /// α = β > −1/2: one-dimensional in φ, r pinned at 1.
    AlphaEqualsBeta,
}

impl MeasureKind {
    pub fn classify(p: &JacobiParams) -> MeasureKind {
        if p.alpha() == p.beta() {
            MeasureKind::AlphaEqualsBeta
        } else if p.beta() == -0.5 {
            MeasureKind::BetaDegenerate
        } else {
            MeasureKind::Generic
        }
    }
}

/// Tensor Gauss-Legendre orders for the two directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    order_r: usize,
    order_phi: usize,
}

impl QuadratureSpec {
    pub fn new(order_r: usize, order_phi: usize) -> Result<Self> {
        if order_r < 8 || order_phi < 8 {
            return Err(Error::Config(format!(
                "quadrature orders must be >= 8, got ({order_r}, {order_phi})"
            )));
        }
        if order_r > 4096 || order_phi > 4096 {
            return Err(Error::Config("quadrature order above 4096".into()));
        }
        Ok(QuadratureSpec { order_r, order_phi })
    }

    pub fn order_r(&self) -> usize {
        self.order_r
    }

    pub fn order_phi(&self) -> usize {
        self.order_phi
    }

    pub fn doubled(&self) -> QuadratureSpec {
        QuadratureSpec {
            order_r: (self.order_r * 2).min(4096),
            order_phi: (self.order_phi * 2).min(4096),
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            order_r: 96,
            order_phi: 96,
        }
    }
}

/// Density of m_{α,β} with respect to dr dφ, generic case only.
///
/// The two degenerate kinds have no rectangle density; callers get an error
/// pointing them at the atomic forms handled by `integrate_m` / `sample_m`.
pub fn measure_density(p: &JacobiParams, x: &AngularRadialPoint) -> Result<f64> {
    match MeasureKind::classify(p) {
        MeasureKind::Generic => {}
        kind => {
            return Err(Error::Domain(format!(
                "measure is degenerate ({kind:?}); use integrate_m/sample_m, not the density"
            )))
        }
    }
    let (alpha, beta) = (p.alpha(), p.beta());
    let delta = alpha - beta;
    let norm = (log_gamma(alpha + 1.0)? + (2.0f64).ln()
        - 0.5 * std::f64::consts::PI.ln()
        - log_gamma(delta)?
        - log_gamma(beta + 0.5)?)
    .exp();
    let r = x.r();
    let one_minus_r2 = (1.0 - r * r).max(0.0);
    Ok(norm
        * one_minus_r2.powf(delta - 1.0)
        * r.powf(2.0 * beta + 1.0)
        * x.phi().sin().powf(2.0 * beta))
}

/// Precomputed nodes/weights for one (params, spec) pair. Radial and angular
/// parts are normalized separately so each weight column sums to one.
pub(crate) struct MeasureRule {
    /// (r, weight)
    pub radial: Vec<(f64, f64)>,
    /// (φ, cos φ, weight)
    pub angular: Vec<(f64, f64, f64)>,
}

impl MeasureRule {
    pub fn build(p: &JacobiParams, spec: &QuadratureSpec) -> Result<MeasureRule> {
        let kind = MeasureKind::classify(p);
        let radial = match kind {
            MeasureKind::AlphaEqualsBeta => vec![(1.0, 1.0)],
            MeasureKind::Generic => radial_rule(p.alpha() - p.beta(), p.beta(), spec.order_r)?,
            MeasureKind::BetaDegenerate => radial_rule(p.alpha() + 0.5, -0.5, spec.order_r)?,
        };
        let angular = match kind {
            MeasureKind::BetaDegenerate => vec![(0.0, 1.0, 0.5), (std::f64::consts::PI, -1.0, 0.5)],
            MeasureKind::Generic => angular_rule(p.beta(), spec.order_phi)?,
            MeasureKind::AlphaEqualsBeta => angular_rule(p.alpha(), spec.order_phi)?,
        };
        Ok(MeasureRule { radial, angular })
    }

    pub fn integrate<F>(&self, mut f: F) -> Complex
    where
        F: FnMut(f64, f64, f64) -> Complex,
    {
        let mut acc = Complex::ZERO;
        for &(r, wr) in &self.radial {
            for &(phi, cos_phi, wp) in &self.angular {
                acc += f(r, phi, cos_phi).scale(wr * wp);
            }
        }
        acc
    }
}

/// Normalized rule for c·(1−r²)^{δ−1} r^{2b+1} dr on [0,1], split at 1/√2
/// with the substitution y = √(1−r²) on the outer panel so the endpoint
/// factor becomes y^{2δ−1}, a polynomial whenever 2δ ∈ ℕ.
fn radial_rule(delta: f64, b: f64, order: usize) -> Result<Vec<(f64, f64)>> {
    // 1/mass of the unnormalized measure: Γ(b+1)Γ(δ)/(2Γ(b+1+δ))
    let log_norm =
        log_gamma(b + 1.0 + delta)? + (2.0f64).ln() - log_gamma(b + 1.0)? - log_gamma(delta)?;
    let norm = log_norm.exp();
    let gl = GaussLegendre::new(order);
    let mut out = Vec::with_capacity(2 * order);
    for (r, w) in gl.mapped(0.0, SQRT_HALF) {
        let weight = w * (1.0 - r * r).powf(delta - 1.0) * r.powf(2.0 * b + 1.0) * norm;
        out.push((r, weight));
    }
    for (y, w) in gl.mapped(0.0, SQRT_HALF) {
        let r = (1.0 - y * y).sqrt();
        let weight = w * y.powf(2.0 * delta - 1.0) * (1.0 - y * y).powf(b) * norm;
        out.push((r, weight));
    }
    Ok(out)
}

/// Normalized rule for c·sin^{2b}φ dφ on [0,π].
fn angular_rule(b: f64, order: usize) -> Result<Vec<(f64, f64, f64)>> {
    let log_norm = log_gamma(b + 1.0)? - 0.5 * std::f64::consts::PI.ln() - log_gamma(b + 0.5)?;
    let norm = log_norm.exp();
    let gl = GaussLegendre::new(order);
    Ok(gl
        .mapped(0.0, std::f64::consts::PI)
        .map(|(phi, w)| (phi, phi.cos(), w * phi.sin().powf(2.0 * b) * norm))
        .collect())
}

/// ∫∫ f dm_{α,β}, honoring the measure kind.
pub fn integrate_m<F>(p: &JacobiParams, f: F, spec: &QuadratureSpec) -> Result<Complex>
where
    F: FnMut(f64, f64) -> Complex,
{
    let rule = MeasureRule::build(p, spec)?;
    let mut f = f;
    Ok(rule.integrate(|r, phi, _| f(r, phi)))
}

/// Same integral evaluated at the requested order and at doubled order;
/// returns the refined value and |difference| as the residual estimate.
pub fn integrate_m_with_residual<F>(
    p: &JacobiParams,
    mut f: F,
    spec: &QuadratureSpec,
) -> Result<(Complex, f64)>
where
    F: FnMut(f64, f64) -> Complex,
{
    let coarse = integrate_m(p, &mut f, spec)?;
    let fine = integrate_m(p, &mut f, &spec.doubled())?;
    Ok((fine, (fine - coarse).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: f64, b: f64) -> JacobiParams {
        JacobiParams::new(a, b).unwrap()
    }

    #[test]
    fn classification() {
        assert_eq!(
            MeasureKind::classify(&params(2.5, 0.5)),
            MeasureKind::Generic
        );
        assert_eq!(
            MeasureKind::classify(&params(2.5, -0.5)),
            MeasureKind::BetaDegenerate
        );
        assert_eq!(
            MeasureKind::classify(&params(1.5, 1.5)),
            MeasureKind::AlphaEqualsBeta
        );
    }

    #[test]
    fn point_clamping() {
        let p = AngularRadialPoint::new(1.0 + 5e-16, -4e-16).unwrap();
        assert_eq!(p.r(), 1.0);
        assert_eq!(p.phi(), 0.0);
        assert!(AngularRadialPoint::new(1.1, 0.0).is_err());
        assert!(AngularRadialPoint::new(0.5, 4.0).is_err());
    }

    #[test]
    fn quadrature_spec_bounds() {
        assert!(QuadratureSpec::new(4, 16).is_err());
        assert!(QuadratureSpec::new(16, 16).is_ok());
    }

    #[test]
    fn density_vanishes_on_stated_edges() {
        let p = params(1.5, 0.5);
        let at = |r, phi| measure_density(&p, &AngularRadialPoint::new(r, phi).unwrap()).unwrap();
        assert_eq!(at(0.0, std::f64::consts::FRAC_PI_2), 0.0);
        assert_eq!(at(0.5, 0.0), 0.0);
        assert!(at(0.5, 1.0) > 0.0);
    }

    #[test]
    fn density_rejects_degenerate_kinds() {
        let x = AngularRadialPoint::new(0.5, 1.0).unwrap();
        assert!(measure_density(&params(2.0, -0.5), &x).is_err());
        assert!(measure_density(&params(2.0, 2.0), &x).is_err());
    }

    #[test]
    fn total_mass_is_one_for_all_kinds() {
        let spec = QuadratureSpec::default();
        for &alpha in &[0.5, 1.0, 2.5, 7.5] {
            for beta in [-0.5, 0.0, alpha] {
                let p = params(alpha, beta);
                let mass = integrate_m(&p, |_, _| Complex::ONE, &spec).unwrap();
                assert!(
                    (mass.re - 1.0).abs() < 1e-12 && mass.im == 0.0,
                    "alpha={alpha}, beta={beta}: mass {}",
                    mass.re
                );
            }
        }
    }

    #[test]
    fn quadrature_matches_beta_moments() {
        // E[r^2] under the generic measure is (β+1)/(α+1); change of
        // variables u = r² turns the radial factor into Beta(β+1, α−β).
        for &(alpha, beta) in &[(2.5, 0.5), (1.5, 0.0), (4.0, 1.0)] {
            let p = params(alpha, beta);
            let got = integrate_m(
                &p,
                |r, _| Complex::from_re(r * r),
                &QuadratureSpec::default(),
            )
            .unwrap();
            let expect = (beta + 1.0) / (alpha + 1.0);
            assert!(
                (got.re - expect).abs() < 1e-12,
                "alpha={alpha}, beta={beta}: {} vs {expect}",
                got.re
            );
        }
    }

    #[test]
    fn residual_estimate_is_small_on_smooth_integrand() {
        let p = params(2.5, 0.5);
        let (v, resid) = integrate_m_with_residual(
            &p,
            |r, phi| Complex::from_re((r * phi.cos()).cos()),
            &QuadratureSpec::new(24, 24).unwrap(),
        )
        .unwrap();
        assert!(v.re.is_finite());
        assert!(resid < 1e-12);
    }
}

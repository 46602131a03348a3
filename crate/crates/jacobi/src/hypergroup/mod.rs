//! The Jacobi hypergroup convolution structure: the measure m_{α,β}, the
//! point convolution δ_s ∗ δ_t, and the moment functions m_k.

mod convolve;
mod measure;

pub use convolve::{convolve_point_expect, convolve_sample, moment_fn, moment_fn_with_residual};
pub use measure::{
    integrate_m, integrate_m_with_residual, measure_density, AngularRadialPoint, MeasureKind,
    QuadratureSpec,
};

pub(crate) use convolve::sample_r_cos;

use crate::params::JacobiParams;
use crate::rng::RandomSource;

/// Exact draw from m_{α,β}.
///
/// Generic case: r = √U with U ~ Beta(β+1, α−β), cos φ = 1−2V with
/// V ~ Beta(β+1/2, β+1/2), independent. The degenerate kinds emit their
/// forced coordinate as an atom (φ ∈ {0,π} for β = −1/2, r = 1 for α = β).
pub fn sample_m(p: &JacobiParams, rng: &mut RandomSource) -> AngularRadialPoint {
    let (r, cos_phi, _) = sample_r_cos(p, rng);
    let phi = cos_phi.clamp(-1.0, 1.0).acos();
    AngularRadialPoint::new(r, phi).expect("sampler output in range")
}

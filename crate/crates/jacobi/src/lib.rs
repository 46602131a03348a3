//! Jacobi hypergroup convolutions on [0,∞), Jacobi random walks, and the
//! numerical certification harness for their limit theorems.
//!
//! The crate is organized around five subsystems:
//!
//! - [`specfun`]: Gauss ₂F₁, normalized Bessel j_α, log-gamma, regularized
//!   incomplete gamma, and the Jacobi functions φ_λ^{(α,β)} by two
//!   independent routes (hypergeometric series and the Laplace integral
//!   representation).
//! - [`hypergroup`]: the convolution measure m_{α,β} (density, quadrature,
//!   exact sampler), the point convolution δ_s ∗ δ_t, and the moment
//!   functions m_k.
//! - [`walk`]: step distributions, compression x ↦ cx, the hyperbolic-space
//!   parameter map, and reproducible simulation of Jacobi random walks.
//! - [`limits`]: residual grids and fitted decay exponents for the Jacobi
//!   function limit propositions.
//! - [`clt`]: empirical distributions, KS distances, limit laws, and the
//!   central-limit experiments (fixed parameters, Rayleigh regime, the three
//!   sub-½ compression regimes, and growing-parameter schedules).
//!
//! Spectral variables λ are complex throughout; the tested paths are the
//! real line and the shifted line λ ∈ iρ + ℝ, which is the one every
//! statistical computation uses.
//!
//! All functions are pure except for explicit `RandomSource` arguments; each
//! simulation replica owns a stream derived from (seed, replica index), so
//! results are reproducible and independent of worker count.

// Validation deliberately uses `!(x > 0.0)`-style comparisons: they reject
// NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod clt;
mod complex;
mod error;
pub mod hypergroup;
pub mod limits;
mod params;
pub mod quad;
pub mod rng;
pub mod specfun;
pub mod walk;

pub use complex::Complex;
pub use error::{Error, Result};
pub use params::JacobiParams;

//! Special functions: log-gamma, regularized incomplete gamma, Gauss ₂F₁,
//! normalized Bessel j_α, and the Jacobi functions φ_λ^{(α,β)}.
//!
//! Everything here is a pure function of its arguments.

mod bessel;
pub(crate) mod dd;
mod gamma;
mod hyp2f1;
mod jacobi_fn;

pub use bessel::bessel_j;
pub use gamma::{log_gamma, reg_lower_inc_gamma};
pub use hyp2f1::gauss_2f1;
pub use jacobi_fn::{jacobi_phi_integral, jacobi_phi_series};

pub(crate) use jacobi_fn::stable_ln_cosh;

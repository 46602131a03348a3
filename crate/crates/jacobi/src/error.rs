use crate::complex::Complex;

/// Errors shared across the crate.
///
/// `Domain` and `Config` mean the caller asked for something outside the
/// contract; the remaining variants are numeric failures of an otherwise
/// valid request.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("2F1 series did not converge after {terms} terms (a={a}, b={b}, c={c}, z={z})")]
    HypNonConvergence {
        a: Complex,
        b: Complex,
        c: f64,
        z: f64,
        terms: usize,
    },

    #[error("quadrature did not converge: estimated residual {residual:e} exceeds {tolerance:e}")]
    QuadratureResidual { residual: f64, tolerance: f64 },

    #[error("hyperbolic argument overflow: {0}")]
    Overflow(String),

    #[error("non-finite value produced in {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by invalid inputs rather than numeric failure.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Config(_))
    }
}

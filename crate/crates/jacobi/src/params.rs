use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// The parameter pair (α, β) indexing a Jacobi hypergroup on [0,∞), with
/// ρ = α + β + 1 always recomputed from the pair.
///
/// Construction enforces α ≥ β ≥ −1/2 and α > −1/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawParams> for JacobiParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        JacobiParams::new(raw.alpha, raw.beta)
    }
}

impl From<JacobiParams> for RawParams {
    fn from(p: JacobiParams) -> Self {
        RawParams {
            alpha: p.alpha,
            beta: p.beta,
        }
    }
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::Domain("Jacobi parameters must be finite".into()));
        }
        if !(alpha >= beta && beta >= -0.5 && alpha > -0.5) {
            return Err(Error::Domain(format!(
                "need alpha >= beta >= -1/2 and alpha > -1/2, got alpha={alpha}, beta={beta}"
            )));
        }
        Ok(JacobiParams { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// ρ = α + β + 1.
    pub fn rho(&self) -> f64 {
        self.alpha + self.beta + 1.0
    }
}

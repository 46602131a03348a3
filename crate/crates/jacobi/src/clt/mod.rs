//! Statistical harness for the central limit theorems: empirical
//! distributions, limit laws, KS distances, modified moments, and the
//! experiment drivers.

mod experiments;

pub use experiments::{
    clt_fixed_params, clt_growing_alpha, clt_growing_coupled, clt_rayleigh, clt_regimes,
    tail_bound_check, CltPoint, CltReport, CltSetup, GrowthSchedule, RegimeCase, TailBoundPoint,
    TailBoundReport,
};

use crate::error::{Error, Result};
use crate::hypergroup::{moment_fn, QuadratureSpec};
use crate::params::JacobiParams;
use crate::specfun::reg_lower_inc_gamma;
use crate::walk::StepDistribution;
use serde::{Deserialize, Serialize};

/// Sorted sample set with CDF evaluation.
#[derive(Debug, Clone)]
pub struct EmpiricalDistribution {
    samples: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn from_samples(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Domain("empirical distribution needs samples".into()));
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("samples must be finite".into()));
        }
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(EmpiricalDistribution { samples })
    }

    pub fn count(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Fraction of samples ≤ x.
    pub fn cdf(&self, x: f64) -> f64 {
        let k = self.samples.partition_point(|&s| s <= x);
        k as f64 / self.samples.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.samples.iter().map(|x| (x - m) * (x - m)).sum::<f64>()
            / (self.samples.len() as f64 - 1.0).max(1.0)
    }

    /// Order-statistic quantile, q ∈ [0,1].
    pub fn quantile(&self, q: f64) -> f64 {
        let idx = ((self.samples.len() as f64 - 1.0) * q.clamp(0.0, 1.0)).round() as usize;
        self.samples[idx]
    }

    pub fn interquartile_range(&self) -> f64 {
        self.quantile(0.75) - self.quantile(0.25)
    }
}

/// Target laws of the limit theorems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitLaw {
    Normal { mean: f64, variance: f64 },
    Rayleigh { alpha: f64 },
    Constant { value: f64 },
}

impl LimitLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            LimitLaw::Normal { mean, variance } => {
                if !mean.is_finite() || !(variance > 0.0) || !variance.is_finite() {
                    return Err(Error::Config(format!(
                        "normal law needs finite mean and positive variance, got ({mean}, {variance})"
                    )));
                }
            }
            LimitLaw::Rayleigh { alpha } => {
                if !(alpha > -0.5) || !alpha.is_finite() {
                    return Err(Error::Config(format!(
                        "rayleigh law needs alpha > -1/2, got {alpha}"
                    )));
                }
            }
            LimitLaw::Constant { value } => {
                if !value.is_finite() {
                    return Err(Error::Config("constant law needs a finite value".into()));
                }
            }
        }
        Ok(())
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            LimitLaw::Normal { mean, variance } => normal_cdf(mean, variance, x),
            LimitLaw::Rayleigh { alpha } => {
                rayleigh_cdf(alpha, x.max(0.0)).expect("validated rayleigh parameters")
            }
            LimitLaw::Constant { value } => {
                if x >= value {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Left limit of the CDF; differs from `cdf` only at atoms of the law.
    fn cdf_left(&self, x: f64) -> f64 {
        match *self {
            LimitLaw::Constant { value } => {
                if x > value {
                    1.0
                } else {
                    0.0
                }
            }
            _ => self.cdf(x),
        }
    }
}

/// CDF of the Rayleigh distribution ρ_α with density
/// x^{2α+1} e^{−x²/2} / (2^α Γ(α+1)): P(X ≤ x) = P(α+1, x²/2).
pub fn rayleigh_cdf(alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > -0.5) {
        return Err(Error::Domain(format!(
            "rayleigh_cdf needs alpha > -1/2, got {alpha}"
        )));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    reg_lower_inc_gamma(alpha + 1.0, 0.5 * x * x)
}

/// Normal CDF through the incomplete gamma: Φ = (1 ± P(1/2, z²/2)) / 2.
pub fn normal_cdf(mean: f64, variance: f64, x: f64) -> f64 {
    let z = (x - mean) / variance.sqrt();
    if z == 0.0 {
        return 0.5;
    }
    let p = reg_lower_inc_gamma(0.5, 0.5 * z * z).expect("inc gamma on valid input");
    if z > 0.0 {
        0.5 * (1.0 + p)
    } else {
        0.5 * (1.0 - p)
    }
}

/// Two-sided Kolmogorov-Smirnov distance between a sample and a law,
/// evaluated at the jump points.
pub fn ks_distance(e: &EmpiricalDistribution, law: &LimitLaw) -> f64 {
    let n = e.count() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in e.samples().iter().enumerate() {
        d = d.max(law.cdf_left(x) - i as f64 / n);
        d = d.max((i + 1) as f64 / n - law.cdf(x));
    }
    d.clamp(0.0, 1.0)
}

/// Finite-sample DKW band: with probability ≥ 1−δ the empirical CDF of n
/// i.i.d. draws stays within this distance of its law.
pub fn dkw_bound(n: usize, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * n as f64)).sqrt()
}

/// Modified moment M_k = ∫ m_k dν: weighted sum over atoms, 1-D quadrature
/// against the parametric kinds.
pub fn modified_moments(
    p: &JacobiParams,
    nu: &StepDistribution,
    k: u32,
    spec: &QuadratureSpec,
) -> Result<f64> {
    nu.validate()?;
    if k == 0 {
        return Err(Error::Domain("modified_moments requires k >= 1".into()));
    }
    let value = nu.expect(
        |x| moment_fn(p, k, x, spec).expect("moment function on the step support"),
        96,
    );
    if !value.is_finite() {
        return Err(Error::NonFinite("modified_moments"));
    }
    Ok(value)
}

//! Step distributions, the compression map, the hyperbolic parameter map,
//! and simulation of Jacobi random walks.

use crate::error::{Error, Result};
use crate::hypergroup::convolve_sample;
use crate::params::JacobiParams;
use crate::quad::GaussLegendre;
use crate::rng::RandomSource;
use serde::{Deserialize, Serialize};

/// The step law ν on [0,∞). Every kind has an exact sampler and computable
/// moments; general densities are out of scope by design so the CLT
/// experiments carry no approximation error in the step law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StepDistribution {
    /// Finitely many atoms (point, weight); weights sum to 1.
    Atoms { points: Vec<(f64, f64)> },
    /// Uniform on [a, b] with 0 ≤ a < b.
    Uniform { a: f64, b: f64 },
    /// Exponential(rate) conditioned on [0, cap].
    TruncatedExponential { rate: f64, cap: f64 },
}

impl StepDistribution {
    /// δ_a as a single atom.
    pub fn delta(a: f64) -> StepDistribution {
        StepDistribution::Atoms {
            points: vec![(a, 1.0)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            StepDistribution::Atoms { points } => {
                if points.is_empty() {
                    return Err(Error::Config("atom list is empty".into()));
                }
                let mut total = 0.0;
                for &(x, w) in points {
                    if !x.is_finite() || x < 0.0 {
                        return Err(Error::Config(format!("atom at {x} outside [0,inf)")));
                    }
                    if !w.is_finite() || w <= 0.0 {
                        return Err(Error::Config(format!("atom weight {w} must be positive")));
                    }
                    total += w;
                }
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::Config(format!(
                        "atom weights sum to {total}, expected 1"
                    )));
                }
            }
            StepDistribution::Uniform { a, b } => {
                if !(a.is_finite() && b.is_finite() && *a >= 0.0 && b > a) {
                    return Err(Error::Config(format!("bad uniform range [{a}, {b}]")));
                }
            }
            StepDistribution::TruncatedExponential { rate, cap } => {
                if !(rate.is_finite() && *rate > 0.0 && cap.is_finite() && *cap > 0.0) {
                    return Err(Error::Config(format!(
                        "bad truncated exponential (rate={rate}, cap={cap})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// True when the law is exactly δ_0 (disallowed in CLT experiments).
    pub fn is_delta_zero(&self) -> bool {
        match self {
            StepDistribution::Atoms { points } => points.iter().all(|&(x, _)| x == 0.0),
            _ => false,
        }
    }

    pub fn sample(&self, rng: &mut RandomSource) -> f64 {
        match self {
            StepDistribution::Atoms { points } => {
                if points.len() == 1 {
                    return points[0].0;
                }
                let u = rng.uniform();
                let mut acc = 0.0;
                for &(x, w) in points {
                    acc += w;
                    if u <= acc {
                        return x;
                    }
                }
                points[points.len() - 1].0
            }
            StepDistribution::Uniform { a, b } => a + (b - a) * rng.uniform(),
            StepDistribution::TruncatedExponential { rate, cap } => {
                let scale = 1.0 - (-rate * cap).exp();
                -(1.0 - rng.uniform() * scale).ln() / rate
            }
        }
    }

    /// l-th raw moment ∫ x^l dν.
    pub fn moment(&self, l: u32) -> f64 {
        match self {
            StepDistribution::Atoms { points } => {
                points.iter().map(|&(x, w)| w * x.powi(l as i32)).sum()
            }
            StepDistribution::Uniform { a, b } => {
                let p = l as i32 + 1;
                (b.powi(p) - a.powi(p)) / (p as f64 * (b - a))
            }
            StepDistribution::TruncatedExponential { .. } => self.expect(|x| x.powi(l as i32), 96),
        }
    }

    /// ∫ f dν: exact sum over atoms, Gauss-Legendre for the parametric kinds.
    pub fn expect<F: Fn(f64) -> f64>(&self, f: F, order: usize) -> f64 {
        match self {
            StepDistribution::Atoms { points } => points.iter().map(|&(x, w)| w * f(x)).sum(),
            StepDistribution::Uniform { a, b } => {
                let gl = GaussLegendre::new(order);
                gl.mapped(*a, *b).map(|(x, w)| w * f(x)).sum::<f64>() / (b - a)
            }
            StepDistribution::TruncatedExponential { rate, cap } => {
                let gl = GaussLegendre::new(order);
                let norm = 1.0 - (-rate * cap).exp();
                gl.mapped(0.0, *cap)
                    .map(|(x, w)| w * f(x) * rate * (-rate * x).exp())
                    .sum::<f64>()
                    / norm
            }
        }
    }

    /// Supremum of the support.
    pub fn max_support(&self) -> f64 {
        match self {
            StepDistribution::Atoms { points } => {
                points.iter().map(|&(x, _)| x).fold(0.0, f64::max)
            }
            StepDistribution::Uniform { b, .. } => *b,
            StepDistribution::TruncatedExponential { cap, .. } => *cap,
        }
    }

    /// Closed-form CDF (used by the sampling tests).
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            StepDistribution::Atoms { points } => points
                .iter()
                .filter(|&&(p, _)| p <= x)
                .map(|&(_, w)| w)
                .sum(),
            StepDistribution::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            StepDistribution::TruncatedExponential { rate, cap } => {
                if x <= 0.0 {
                    0.0
                } else if x >= *cap {
                    1.0
                } else {
                    (1.0 - (-rate * x).exp()) / (1.0 - (-rate * cap).exp())
                }
            }
        }
    }
}

/// Image measure of ν under x ↦ cx for c ∈ (0, 1].
pub fn compress(nu: &StepDistribution, c: f64) -> Result<StepDistribution> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::Config(format!(
            "compression factor must lie in (0,1], got {c}"
        )));
    }
    Ok(match nu {
        StepDistribution::Atoms { points } => StepDistribution::Atoms {
            points: points.iter().map(|&(x, w)| (c * x, w)).collect(),
        },
        StepDistribution::Uniform { a, b } => StepDistribution::Uniform { a: c * a, b: c * b },
        StepDistribution::TruncatedExponential { rate, cap } => {
            StepDistribution::TruncatedExponential {
                rate: rate / c,
                cap: c * cap,
            }
        }
    })
}

/// Draw one step from ν.
pub fn sample_step(nu: &StepDistribution, rng: &mut RandomSource) -> f64 {
    nu.sample(rng)
}

/// Hyperbolic space H_k(F) with dim_R F = d ∈ {1,2,4} and k ≥ 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperbolicSpaceSpec {
    pub field_dim: u32,
    pub k: u32,
}

impl HyperbolicSpaceSpec {
    pub fn new(field_dim: u32, k: u32) -> Result<Self> {
        if ![1, 2, 4].contains(&field_dim) {
            return Err(Error::Config(format!(
                "field dimension must be 1, 2, or 4, got {field_dim}"
            )));
        }
        if k < 2 {
            return Err(Error::Config(format!("need k >= 2, got {k}")));
        }
        Ok(HyperbolicSpaceSpec { field_dim, k })
    }
}

/// α = dk/2 − 1, β = d/2 − 1.
pub fn hyperbolic_params(h: &HyperbolicSpaceSpec) -> JacobiParams {
    let d = h.field_dim as f64;
    let k = h.k as f64;
    JacobiParams::new(d * k / 2.0 - 1.0, d / 2.0 - 1.0)
        .expect("hyperbolic parameters are always admissible")
}

/// Full experiment description for one walk.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkConfig {
    pub params: JacobiParams,
    pub nu: StepDistribution,
    /// Steps are drawn from ν compressed by n^{−r}.
    pub compression_exponent: f64,
    pub steps: usize,
    pub replicas: usize,
    pub seed: u64,
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        self.nu.validate()?;
        if self.steps == 0 {
            return Err(Error::Config("steps must be >= 1".into()));
        }
        if self.replicas == 0 {
            return Err(Error::Config("replicas must be >= 1".into()));
        }
        if !(self.compression_exponent >= 0.0) || !self.compression_exponent.is_finite() {
            return Err(Error::Config(format!(
                "compression exponent must be >= 0, got {}",
                self.compression_exponent
            )));
        }
        Ok(())
    }

    /// ν compressed by n^{−r} for this configuration.
    pub fn compressed_nu(&self) -> Result<StepDistribution> {
        let c = (self.steps as f64).powf(-self.compression_exponent);
        compress(&self.nu, c)
    }
}

pub fn default_threads() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Runs the walk S_{m+1} = δ_{S_m} ∗ (step ~ ν_{n^{−r}}) for each replica and
/// returns the final positions in replica order.
///
/// Replica i uses the stream derived from (seed, i), so the output is a pure
/// function of the configuration, whatever `threads` is.
pub fn simulate_walk(cfg: &WalkConfig, threads: usize) -> Result<Vec<f64>> {
    cfg.validate()?;
    let nu_c = cfg.compressed_nu()?;
    run_replicas(cfg, threads, move |p, steps, rng| {
        let mut s = 0.0;
        for _ in 0..steps {
            let step = nu_c.sample(rng);
            s = convolve_sample(p, s, step, rng);
        }
        s
    })
}

/// Diagnostic variant retaining whole trajectories (positions after each
/// step). Memory is replicas × steps; keep replica counts small.
pub fn simulate_walk_paths(cfg: &WalkConfig, threads: usize) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    let nu_c = cfg.compressed_nu()?;
    run_replicas(cfg, threads, move |p, steps, rng| {
        let mut path = Vec::with_capacity(steps);
        let mut s = 0.0;
        for _ in 0..steps {
            let step = nu_c.sample(rng);
            s = convolve_sample(p, s, step, rng);
            path.push(s);
        }
        path
    })
}

trait FiniteCheck {
    fn check(&self) -> bool;
}

impl FiniteCheck for f64 {
    fn check(&self) -> bool {
        self.is_finite()
    }
}

impl FiniteCheck for Vec<f64> {
    fn check(&self) -> bool {
        self.iter().all(|x| x.is_finite())
    }
}

fn run_replicas<T, F>(cfg: &WalkConfig, threads: usize, body: F) -> Result<Vec<T>>
where
    T: Send + Default + Clone + FiniteCheck,
    F: Fn(&JacobiParams, usize, &mut RandomSource) -> T + Sync,
{
    let replicas = cfg.replicas;
    let workers = threads.max(1).min(replicas);
    let mut out = vec![T::default(); replicas];
    let bad = std::sync::Mutex::new(None::<usize>);
    std::thread::scope(|scope| {
        let chunk = replicas.div_ceil(workers);
        for (w, slice) in out.chunks_mut(chunk).enumerate() {
            let body = &body;
            let bad = &bad;
            let start = w * chunk;
            scope.spawn(move || {
                for (offset, slot) in slice.iter_mut().enumerate() {
                    let replica = start + offset;
                    let mut rng = RandomSource::for_replica(cfg.seed, replica as u64);
                    let value = body(&cfg.params, cfg.steps, &mut rng);
                    if !value.check() {
                        let mut guard = bad.lock().unwrap();
                        let worst = guard.get_or_insert(replica);
                        *worst = (*worst).min(replica);
                        return;
                    }
                    *slot = value;
                }
            });
        }
    });
    if let Some(replica) = bad.into_inner().unwrap() {
        return Err(Error::Overflow(format!(
            "walk position left the representable range at replica {replica}"
        )));
    }
    Ok(out)
}

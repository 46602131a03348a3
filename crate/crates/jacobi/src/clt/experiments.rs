//! The CLT experiment drivers: fixed-parameter normal limit, Rayleigh limit,
//! the three sub-½ compression regimes, growing-parameter limits, and the
//! tail bound check.
//!
//! Normalizing constants are always computed from hypergroup/walk quantities
//! at run time, never hard-coded. Each grid point runs its own walk with a
//! sub-seed derived from (seed, n), so reports are pure functions of the
//! configuration.

use super::{ks_distance, modified_moments, EmpiricalDistribution, LimitLaw};
use crate::error::{Error, Result};
use crate::hypergroup::{moment_fn, QuadratureSpec};
use crate::limits::{coupled_phase, log_log_fit};
use crate::params::JacobiParams;
use crate::specfun::stable_ln_cosh;
use crate::walk::{simulate_walk, StepDistribution, WalkConfig};
use serde::{Deserialize, Serialize};

/// Shared experiment inputs.
#[derive(Debug, Clone)]
pub struct CltSetup {
    pub params: JacobiParams,
    pub nu: StepDistribution,
    pub replicas: usize,
    pub seed: u64,
    pub threads: usize,
    pub quad: QuadratureSpec,
    /// KS pass threshold applied at the largest n.
    pub ks_threshold: f64,
    /// Retain the normalized samples of the largest n in the report
    /// (for CSV export; they are never serialized to JSON).
    pub keep_samples: bool,
}

impl CltSetup {
    fn validate(&self) -> Result<()> {
        self.nu.validate()?;
        if self.nu.is_delta_zero() {
            return Err(Error::Config(
                "step law must not be the point mass at zero".into(),
            ));
        }
        if self.replicas == 0 {
            return Err(Error::Config("replicas must be >= 1".into()));
        }
        Ok(())
    }
}

fn sub_seed(seed: u64, n: usize) -> u64 {
    seed ^ (n as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// One grid point of an experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CltPoint {
    pub n: usize,
    pub ks: Option<f64>,
    pub sample_mean: f64,
    pub sample_std: f64,
    pub standard_error: f64,
    pub interquartile_range: f64,
    pub pass: bool,
}

/// Result of one CLT experiment over an n-grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CltReport {
    pub experiment: String,
    pub alpha: f64,
    pub beta: f64,
    pub nu: StepDistribution,
    pub compression_exponent: f64,
    pub replicas: usize,
    pub seed: u64,
    pub law: LimitLaw,
    pub ks_threshold: f64,
    pub regime_case: Option<u8>,
    pub drift_constant: Option<f64>,
    pub points: Vec<CltPoint>,
    pub ks_slope: Option<f64>,
    pub fit_quality: Option<f64>,
    pub pass: bool,
    /// Normalized samples at the largest n, kept only on request.
    #[serde(skip)]
    pub final_samples: Option<Vec<f64>>,
}

fn measure_point(
    n: usize,
    stats: Vec<f64>,
    law: &LimitLaw,
    threshold: f64,
    with_ks: bool,
) -> Result<CltPoint> {
    let emp = EmpiricalDistribution::from_samples(stats)?;
    let ks = with_ks.then(|| ks_distance(&emp, law));
    let std = emp.variance().sqrt();
    Ok(CltPoint {
        n,
        ks,
        sample_mean: emp.mean(),
        sample_std: std,
        standard_error: std / (emp.count() as f64).sqrt(),
        interquartile_range: emp.interquartile_range(),
        pass: ks.map(|d| d <= threshold).unwrap_or(true),
    })
}

fn finish_report(
    mut report: CltReport,
    points: Vec<CltPoint>,
    pass_from_points: impl Fn(&[CltPoint]) -> bool,
) -> CltReport {
    let ns: Vec<f64> = points.iter().map(|p| p.n as f64).collect();
    let ks: Vec<f64> = points.iter().map(|p| p.ks.unwrap_or(f64::NAN)).collect();
    if points.iter().all(|p| p.ks.is_some()) {
        if let Some((slope, r2)) = log_log_fit(&ns, &ks) {
            report.ks_slope = Some(slope);
            report.fit_quality = Some(r2);
        }
    }
    report.pass = pass_from_points(&points);
    report.points = points;
    report
}

fn blank_report(experiment: &str, setup: &CltSetup, r: f64, law: LimitLaw) -> CltReport {
    CltReport {
        experiment: experiment.to_string(),
        alpha: setup.params.alpha(),
        beta: setup.params.beta(),
        nu: setup.nu.clone(),
        compression_exponent: r,
        replicas: setup.replicas,
        seed: setup.seed,
        law,
        ks_threshold: setup.ks_threshold,
        regime_case: None,
        drift_constant: None,
        points: Vec::new(),
        ks_slope: None,
        fit_quality: None,
        pass: false,
        final_samples: None,
    }
}

/// Clone of the stats destined for the report when this is the largest n
/// and the caller asked to keep samples.
fn retain(setup: &CltSetup, n_grid: &[usize], n: usize, stats: &[f64]) -> Option<Vec<f64>> {
    (setup.keep_samples && n_grid.last() == Some(&n)).then(|| stats.to_vec())
}

fn run_walk(setup: &CltSetup, params: JacobiParams, r: f64, n: usize) -> Result<Vec<f64>> {
    let cfg = WalkConfig {
        params,
        nu: setup.nu.clone(),
        compression_exponent: r,
        steps: n,
        replicas: setup.replicas,
        seed: sub_seed(setup.seed, n),
    };
    simulate_walk(&cfg, setup.threads)
}

/// Uncompressed walk (r = 0): (S_n − n M₁)/√n against N(0, M₂ − M₁²) with
/// the modified moments M_k = ∫ m_k dν.
pub fn clt_fixed_params(setup: &CltSetup, n_grid: &[usize]) -> Result<CltReport> {
    setup.validate()?;
    let m1 = modified_moments(&setup.params, &setup.nu, 1, &setup.quad)?;
    let m2 = modified_moments(&setup.params, &setup.nu, 2, &setup.quad)?;
    let variance = m2 - m1 * m1;
    if !(variance > 1e-12) {
        return Err(Error::Config(format!(
            "modified-moment variance M2 - M1^2 = {variance} is not positive"
        )));
    }
    let law = LimitLaw::Normal {
        mean: 0.0,
        variance,
    };
    let mut points = Vec::with_capacity(n_grid.len());
    let mut final_samples = None;
    for &n in n_grid {
        let finals = run_walk(setup, setup.params, 0.0, n)?;
        let nf = n as f64;
        let stats: Vec<f64> = finals
            .into_iter()
            .map(|s| (s - nf * m1) / nf.sqrt())
            .collect();
        final_samples = retain(setup, n_grid, n, &stats).or(final_samples);
        points.push(measure_point(n, stats, &law, setup.ks_threshold, true)?);
    }
    let report = blank_report("clt_fixed_params", setup, 0.0, law);
    let mut report = finish_report(report, points, |pts| {
        pts.last().map(|p| p.pass).unwrap_or(false)
    });
    report.final_samples = final_samples;
    Ok(report)
}

/// Compression r > 1/2: √(2(α+1)/m₂) n^{r−1/2} S_n against the Rayleigh
/// law ρ_α, with m₂ the plain second moment of ν.
pub fn clt_rayleigh(setup: &CltSetup, r: f64, n_grid: &[usize]) -> Result<CltReport> {
    setup.validate()?;
    if !(r > 0.5) {
        return Err(Error::Config(format!(
            "the Rayleigh regime needs r > 1/2, got {r}"
        )));
    }
    let m2 = setup.nu.moment(2);
    if !(m2 > 0.0) || !m2.is_finite() {
        return Err(Error::Config(format!("second moment of nu is {m2}")));
    }
    let alpha = setup.params.alpha();
    let law = LimitLaw::Rayleigh { alpha };
    let mut points = Vec::with_capacity(n_grid.len());
    let mut final_samples = None;
    for &n in n_grid {
        let finals = run_walk(setup, setup.params, r, n)?;
        let nf = n as f64;
        let scale = (2.0 * (alpha + 1.0) / m2).sqrt() * nf.powf(r - 0.5);
        let stats: Vec<f64> = finals.into_iter().map(|s| scale * s).collect();
        final_samples = retain(setup, n_grid, n, &stats).or(final_samples);
        points.push(measure_point(n, stats, &law, setup.ks_threshold, true)?);
    }
    let report = blank_report("clt_rayleigh", setup, r, law);
    let mut report = finish_report(report, points, |pts| {
        pts.last().map(|p| p.pass).unwrap_or(false)
    });
    report.final_samples = final_samples;
    Ok(report)
}

/// The three regimes of compression exponent r ∈ (0, 1/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegimeCase {
    /// r ∈ (1/6, 1/2): centered Gaussian.
    Gaussian,
    /// r = 1/6: Gaussian with a drift mean.
    Critical,
    /// r ∈ (0, 1/6): constant limit in probability.
    Drift,
}

impl RegimeCase {
    pub fn from_exponent(r: f64) -> Result<RegimeCase> {
        if !(r > 0.0 && r < 0.5) {
            return Err(Error::Config(format!(
                "regime experiments need r in (0, 1/2), got {r}"
            )));
        }
        let sixth = 1.0 / 6.0;
        if (r - sixth).abs() < 1e-12 {
            Ok(RegimeCase::Critical)
        } else if r > sixth {
            Ok(RegimeCase::Gaussian)
        } else {
            Ok(RegimeCase::Drift)
        }
    }

    pub fn index(&self) -> u8 {
        match self {
            RegimeCase::Gaussian => 1,
            RegimeCase::Critical => 2,
            RegimeCase::Drift => 3,
        }
    }
}

/// Shared normalization of the sub-½ regimes: the centering
/// ρ m₂ n^{1−2r}/(2(α+1)) and the Gaussian-case scale n^{1/2−r}. The three
/// cases differ only in the scale exponent (1−4r for the drift case) and in
/// the limit law's mean.
pub(crate) fn regime_center(p: &JacobiParams, m2: f64, r: f64, n: f64) -> f64 {
    p.rho() * m2 * n.powf(1.0 - 2.0 * r) / (2.0 * (p.alpha() + 1.0))
}

/// The drift constant −ρ(α+3β+2) m₄ / (12(α+1)(α+2)) of the critical and
/// sub-critical regimes.
pub fn regime_drift_constant(p: &JacobiParams, m4: f64) -> f64 {
    let (alpha, beta, rho) = (p.alpha(), p.beta(), p.rho());
    -rho * (alpha + 3.0 * beta + 2.0) * m4 / (12.0 * (alpha + 1.0) * (alpha + 2.0))
}

/// Experiment for the compression regimes r ∈ (0, 1/2); the case is
/// selected from the exponent. Pass criteria: KS for the Gaussian cases; for the drift
/// case, sample mean within 3 standard errors + 0.01 of the constant and a
/// non-increasing IQR across the grid.
pub fn clt_regimes(setup: &CltSetup, r: f64, n_grid: &[usize]) -> Result<CltReport> {
    setup.validate()?;
    let case = RegimeCase::from_exponent(r)?;
    let p = setup.params;
    let m2 = setup.nu.moment(2);
    let m4 = setup.nu.moment(4);
    if !(m2 > 0.0) {
        return Err(Error::Config(format!("second moment of nu is {m2}")));
    }
    let variance = m2 / (2.0 * (p.alpha() + 1.0));
    let drift = regime_drift_constant(&p, m4);
    let law = match case {
        RegimeCase::Gaussian => LimitLaw::Normal {
            mean: 0.0,
            variance,
        },
        RegimeCase::Critical => LimitLaw::Normal {
            mean: drift,
            variance,
        },
        RegimeCase::Drift => LimitLaw::Constant { value: drift },
    };
    let with_ks = case != RegimeCase::Drift;
    let scale_exp = match case {
        RegimeCase::Drift => 1.0 - 4.0 * r,
        _ => 0.5 - r,
    };
    let mut points = Vec::with_capacity(n_grid.len());
    let mut final_samples = None;
    for &n in n_grid {
        let finals = run_walk(setup, p, r, n)?;
        let nf = n as f64;
        let center = regime_center(&p, m2, r, nf);
        let scale = nf.powf(scale_exp);
        let stats: Vec<f64> = finals.into_iter().map(|s| (s - center) / scale).collect();
        final_samples = retain(setup, n_grid, n, &stats).or(final_samples);
        let mut point = measure_point(n, stats, &law, setup.ks_threshold, with_ks)?;
        if case != RegimeCase::Gaussian {
            let tol = 3.0 * point.standard_error + 0.01;
            point.pass = point.pass && (point.sample_mean - drift).abs() <= tol;
        }
        points.push(point);
    }
    let mut report = blank_report("clt_regimes", setup, r, law);
    report.regime_case = Some(case.index());
    report.drift_constant = match case {
        RegimeCase::Gaussian => None,
        _ => Some(drift),
    };
    report.final_samples = final_samples;
    Ok(finish_report(report, points, |pts| {
        let last_ok = pts.last().map(|p| p.pass).unwrap_or(false);
        if case == RegimeCase::Drift {
            let iqr_shrinks = pts
                .windows(2)
                .all(|w| w[1].interquartile_range <= w[0].interquartile_range + 1e-9);
            last_ok && iqr_shrinks
        } else {
            last_ok
        }
    }))
}

/// Growth schedule value(n) = coefficient · n^exponent; exponent > 1 keeps
/// n / value(n) → 0 as the growing-parameter limits require.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthSchedule {
    pub coefficient: f64,
    pub exponent: f64,
}

impl GrowthSchedule {
    pub fn validate(&self) -> Result<()> {
        if !(self.coefficient > 0.0) || !(self.exponent > 1.0) {
            return Err(Error::Config(format!(
                "growth schedule needs coefficient > 0 and exponent > 1, got {self:?}"
            )));
        }
        Ok(())
    }

    pub fn value(&self, n: usize) -> f64 {
        self.coefficient * (n as f64).powf(self.exponent)
    }
}

/// Growing α at fixed β: each n runs a fresh uncompressed walk at (α_n, β);
/// the statistic (S_n − n m₁)/√n is compared against N(0, m₂ − m₁²) with
/// m_j = ∫ (ln ch x)^j dν.
pub fn clt_growing_alpha(
    beta: f64,
    schedule: &GrowthSchedule,
    setup: &CltSetup,
    n_grid: &[usize],
) -> Result<CltReport> {
    growing_experiment(
        "clt_growing_alpha",
        setup,
        n_grid,
        stable_ln_cosh,
        |n| JacobiParams::new(schedule.value(n), beta),
        schedule,
    )
}

/// Coupled growth α_n = c β_n + d_shift with β_n from the schedule; the
/// phase becomes ln √(ch²x − (1/c) sh²x).
pub fn clt_growing_coupled(
    c: f64,
    d_shift: f64,
    schedule: &GrowthSchedule,
    setup: &CltSetup,
    n_grid: &[usize],
) -> Result<CltReport> {
    if !(c > 1.0) || !(d_shift > 0.0) {
        return Err(Error::Config(format!(
            "need c > 1 and d_shift > 0, got c={c}, d_shift={d_shift}"
        )));
    }
    growing_experiment(
        "clt_growing_coupled",
        setup,
        n_grid,
        move |x| coupled_phase(x, c),
        |n| {
            let beta_n = schedule.value(n);
            JacobiParams::new(c * beta_n + d_shift, beta_n)
        },
        schedule,
    )
}

fn growing_experiment(
    name: &str,
    setup: &CltSetup,
    n_grid: &[usize],
    phase: impl Fn(f64) -> f64,
    params_for: impl Fn(usize) -> Result<JacobiParams>,
    schedule: &GrowthSchedule,
) -> Result<CltReport> {
    setup.validate()?;
    schedule.validate()?;
    let m1 = setup.nu.expect(&phase, 96);
    let m2 = setup.nu.expect(|x| phase(x) * phase(x), 96);
    let variance = m2 - m1 * m1;
    if !(variance > 1e-12) {
        return Err(Error::Config(format!(
            "phase variance m2 - m1^2 = {variance} is not positive (is nu a single atom?)"
        )));
    }
    let law = LimitLaw::Normal {
        mean: 0.0,
        variance,
    };
    let mut points = Vec::with_capacity(n_grid.len());
    let mut final_samples = None;
    for &n in n_grid {
        let params_n = params_for(n)?;
        let finals = run_walk(setup, params_n, 0.0, n)?;
        let nf = n as f64;
        let stats: Vec<f64> = finals
            .into_iter()
            .map(|s| (s - nf * m1) / nf.sqrt())
            .collect();
        final_samples = retain(setup, n_grid, n, &stats).or(final_samples);
        points.push(measure_point(n, stats, &law, setup.ks_threshold, true)?);
    }
    let report = blank_report(name, setup, 0.0, law);
    let mut report = finish_report(report, points, |pts| {
        pts.last().map(|p| p.pass).unwrap_or(false)
    });
    report.final_samples = final_samples;
    Ok(report)
}

/// One (c, n) cell of the tail bound check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailBoundPoint {
    pub c: f64,
    pub n: usize,
    pub tail_probability: f64,
    /// P(S_n ≥ c) · m₁(c) · n^{2r−1}, the quantity the tail bound controls.
    pub product: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailBoundReport {
    pub compression_exponent: f64,
    pub points: Vec<TailBoundPoint>,
    /// Max of the products over the whole grid: the fitted constant M.
    pub fitted_m: f64,
    pub pass: bool,
}

/// Checks that P(S_n ≥ c) · m₁(c) · n^{2r−1} is bounded by a single constant
/// over the grid: the products at the largest n must not exceed the maximum
/// over smaller n beyond Monte Carlo slack.
pub fn tail_bound_check(
    setup: &CltSetup,
    r: f64,
    c_grid: &[f64],
    n_grid: &[usize],
) -> Result<TailBoundReport> {
    setup.validate()?;
    if !(r > 0.5) {
        return Err(Error::Config(format!(
            "the tail bound applies for r > 1/2, got {r}"
        )));
    }
    if c_grid.is_empty() || n_grid.len() < 2 {
        return Err(Error::Config(
            "need a c grid and at least two n values".into(),
        ));
    }
    let mut m1_of_c = Vec::with_capacity(c_grid.len());
    for &c in c_grid {
        if !(c > 0.0) {
            return Err(Error::Config(format!(
                "tail points must be positive, got {c}"
            )));
        }
        m1_of_c.push(moment_fn(&setup.params, 1, c, &setup.quad)?);
    }
    let mut points = Vec::with_capacity(c_grid.len() * n_grid.len());
    for &n in n_grid {
        let finals = run_walk(setup, setup.params, r, n)?;
        let nf = n as f64;
        let rate = nf.powf(2.0 * r - 1.0);
        for (&c, &m1c) in c_grid.iter().zip(&m1_of_c) {
            let tail = finals.iter().filter(|&&s| s >= c).count() as f64 / finals.len() as f64;
            points.push(TailBoundPoint {
                c,
                n,
                tail_probability: tail,
                product: tail * m1c * rate,
            });
        }
    }
    let fitted_m = points.iter().map(|p| p.product).fold(0.0, f64::max);
    let n_max = *n_grid.last().unwrap();
    let se = 0.5 / (setup.replicas as f64).sqrt();
    let mut pass = true;
    for (&c, &m1c) in c_grid.iter().zip(&m1_of_c) {
        let at_max = points
            .iter()
            .find(|p| p.n == n_max && p.c == c)
            .map(|p| p.product)
            .unwrap();
        let before = points
            .iter()
            .filter(|p| p.n != n_max && p.c == c)
            .map(|p| p.product)
            .fold(0.0, f64::max);
        let slack = 4.0 * se * m1c * (n_max as f64).powf(2.0 * r - 1.0);
        if at_max > before + slack {
            pass = false;
        }
    }
    Ok(TailBoundReport {
        compression_exponent: r,
        points,
        fitted_m,
        pass,
    })
}

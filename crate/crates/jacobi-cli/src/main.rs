//! `jacobi` — command-line frontend for Jacobi hypergroup computations:
//! special function evaluation, point convolutions, moment functions, random
//! walk simulation, limit certification, and CLT experiments.
//!
//! Exit codes: 0 success, 2 configuration/domain error, 3 numeric failure.
//! Standard output carries machine-readable results only; progress and
//! warnings go to standard error.

mod config;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use jacobi::clt::{
    clt_fixed_params, clt_growing_alpha, clt_growing_coupled, clt_rayleigh, clt_regimes,
    tail_bound_check, CltSetup, RegimeCase,
};
use jacobi::hypergroup::{convolve_point_expect, moment_fn_with_residual, QuadratureSpec};
use jacobi::limits::{
    cor_exp_phase, m1_bounds, prop_alpha_limit, prop_bessel_limit, prop_coupled_limit,
    prop_moment_phase, taylor_residual, LimitReport,
};
use jacobi::specfun::{jacobi_phi_integral, jacobi_phi_series};
use jacobi::walk::{
    default_threads, hyperbolic_params, simulate_walk, simulate_walk_paths, HyperbolicSpaceSpec,
    WalkConfig,
};
use jacobi::{Complex, JacobiParams};

#[derive(Debug)]
pub struct CliError {
    message: String,
    usage: bool,
}

impl CliError {
    pub fn usage(message: &str) -> Self {
        CliError {
            message: message.to_string(),
            usage: true,
        }
    }

    pub fn numeric(message: &str) -> Self {
        CliError {
            message: message.to_string(),
            usage: false,
        }
    }
}

impl From<jacobi::Error> for CliError {
    fn from(e: jacobi::Error) -> Self {
        CliError {
            usage: e.is_usage(),
            message: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "jacobi",
    version,
    about = "Jacobi hypergroup convolutions, random walks, and CLT experiments"
)]
struct Cli {
    /// Worker threads (default: JACOBI_THREADS env var, then available cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Jacobi function phi_lambda^(alpha,beta)(t)
    Eval(EvalArgs),
    /// Expectation of a test function under delta_s * delta_t
    Convolve(ConvolveArgs),
    /// Moment function m_k(t)
    Moments(MomentsArgs),
    /// Simulate a Jacobi random walk described by a config file
    Walk(RunArgs),
    /// Certify a limit proposition described by a config file
    Limits(RunArgs),
    /// Run a CLT experiment described by a config file
    Clt(CltArgs),
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Hyperbolic space field dimension (1, 2, or 4); use with --k
    #[arg(long)]
    field_dim: Option<u32>,
    /// Hyperbolic space dimension parameter k >= 2; use with --field-dim
    #[arg(long)]
    k: Option<u32>,
}

impl ParamArgs {
    fn resolve(&self) -> Result<JacobiParams, CliError> {
        match (self.alpha, self.beta, self.field_dim, self.k) {
            (Some(a), Some(b), None, None) => Ok(JacobiParams::new(a, b)?),
            (None, None, Some(d), Some(k)) => {
                Ok(hyperbolic_params(&HyperbolicSpaceSpec::new(d, k)?))
            }
            _ => Err(CliError::usage(
                "give either --alpha and --beta, or --field-dim and --k",
            )),
        }
    }
}

#[derive(Clone, Default, ValueEnum)]
enum Route {
    #[default]
    Series,
    Integral,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Real part of the spectral variable lambda
    #[arg(long)]
    lambda: f64,
    /// Imaginary part of lambda
    #[arg(long, default_value_t = 0.0)]
    lambda_im: f64,
    #[arg(long)]
    t: f64,
    #[arg(long, value_enum, default_value_t)]
    route: Route,
    #[arg(long, default_value_t = 96)]
    order_r: usize,
    #[arg(long, default_value_t = 96)]
    order_phi: usize,
}

#[derive(Args)]
struct ConvolveArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    s: f64,
    #[arg(long)]
    t: f64,
    /// Integrate phi_lambda instead of the identity function
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, default_value_t = 96)]
    order_r: usize,
    #[arg(long, default_value_t = 96)]
    order_phi: usize,
}

#[derive(Args)]
struct MomentsArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Moment order k >= 1
    #[arg(long = "moment")]
    moment_order: u32,
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = 96)]
    order_r: usize,
    #[arg(long, default_value_t = 96)]
    order_phi: usize,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment configuration file (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Override the config's replica count
    #[arg(long)]
    replicas: Option<usize>,
    /// Override the config's seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's output directory
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Write whole trajectories as well (walk only)
    #[arg(long)]
    paths: bool,
}

#[derive(Clone, Default, ValueEnum)]
enum RegimeFlag {
    #[default]
    Auto,
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
}

#[derive(Args)]
struct CltArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Which regime case to expect (clt_regimes only); auto selects from r
    #[arg(long, value_enum, default_value_t)]
    regime: RegimeFlag,
    /// Also dump the normalized samples of the largest n as CSV
    #[arg(long)]
    samples_csv: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("JACOBI_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or_else(default_threads)
        .max(1);
    let result = match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Convolve(args) => cmd_convolve(args),
        Command::Moments(args) => cmd_moments(args),
        Command::Walk(args) => cmd_walk(args, threads),
        Command::Limits(args) => cmd_limits(args),
        Command::Clt(args) => cmd_clt(args, threads),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(if e.usage { 2 } else { 3 })
        }
    }
}

/// 15 significant digits, machine readable: "re im".
fn print_complex(v: Complex) {
    println!("{:.14e} {:.14e}", v.re, v.im);
}

fn cmd_eval(args: EvalArgs) -> Result<(), CliError> {
    let p = args.params.resolve()?;
    let lambda = Complex::new(args.lambda, args.lambda_im);
    let value = match args.route {
        Route::Series => jacobi_phi_series(&p, lambda, args.t)?,
        Route::Integral => {
            let spec = QuadratureSpec::new(args.order_r, args.order_phi)?;
            jacobi_phi_integral(&p, lambda, args.t, &spec)?
        }
    };
    print_complex(value);
    Ok(())
}

fn cmd_convolve(args: ConvolveArgs) -> Result<(), CliError> {
    let p = args.params.resolve()?;
    let spec = QuadratureSpec::new(args.order_r, args.order_phi)?;
    let value = match args.lambda {
        None => convolve_point_expect(&p, args.s, args.t, Complex::from_re, &spec)?,
        Some(lam) => {
            let lambda = Complex::from_re(lam);
            convolve_point_expect(
                &p,
                args.s,
                args.t,
                |x| jacobi_phi_series(&p, lambda, x).expect("phi on convolution support"),
                &spec,
            )?
        }
    };
    print_complex(value);
    Ok(())
}

fn cmd_moments(args: MomentsArgs) -> Result<(), CliError> {
    let p = args.params.resolve()?;
    let spec = QuadratureSpec::new(args.order_r, args.order_phi)?;
    let (value, residual) = moment_fn_with_residual(&p, args.moment_order, args.t, &spec)?;
    if residual > 1e-9 {
        eprintln!(
            "warning: quadrature residual estimate {residual:.2e} at t = {} \
             (the log corner degrades accuracy at large t; raise the orders)",
            args.t
        );
    }
    println!("{value:.14e}");
    Ok(())
}

#[derive(serde::Serialize)]
struct WalkSummary<'a> {
    alpha: f64,
    beta: f64,
    nu: &'a jacobi::walk::StepDistribution,
    compression_exponent: f64,
    steps: usize,
    replicas: usize,
    seed: u64,
    mean: f64,
    std_dev: f64,
    min: f64,
    max: f64,
}

fn cmd_walk(args: RunArgs, threads: usize) -> Result<(), CliError> {
    let cfg = config::load(&args.config)?;
    let params = cfg.params.resolve()?;
    let nu = config::required_nu(&cfg)?;
    let walk = WalkConfig {
        params,
        nu: nu.clone(),
        compression_exponent: cfg.experiment.compression_exponent.unwrap_or(0.0),
        steps: cfg.experiment.steps()?,
        replicas: args.replicas.unwrap_or(cfg.experiment.replicas()?),
        seed: args.seed.unwrap_or(cfg.seed),
    };
    let out_dir = resolve_out_dir(&args, &cfg);
    eprintln!(
        "walk: n={} replicas={} threads={threads}",
        walk.steps, walk.replicas
    );
    let finals = simulate_walk(&walk, threads)?;
    output::write_column_csv(&out_dir.join("finals.csv"), "final_position", &finals)?;
    let (mut mean, mut min, mut max) = (0.0, f64::INFINITY, f64::NEG_INFINITY);
    for &x in &finals {
        mean += x;
        min = min.min(x);
        max = max.max(x);
    }
    mean /= finals.len() as f64;
    let var = finals.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
        / (finals.len() as f64 - 1.0).max(1.0);
    let summary = WalkSummary {
        alpha: params.alpha(),
        beta: params.beta(),
        nu: &nu,
        compression_exponent: walk.compression_exponent,
        steps: walk.steps,
        replicas: walk.replicas,
        seed: walk.seed,
        mean,
        std_dev: var.sqrt(),
        min,
        max,
    };
    output::write_json(&out_dir.join("summary.json"), &summary)?;
    if args.paths || cfg.output.paths_csv {
        let paths = simulate_walk_paths(&walk, threads)?;
        let mut text = String::from("replica,step,position\n");
        for (replica, path) in paths.iter().enumerate() {
            for (step, pos) in path.iter().enumerate() {
                use std::fmt::Write as _;
                let _ = writeln!(text, "{replica},{},{pos}", step + 1);
            }
        }
        output::write_text(&out_dir.join("paths.csv"), &text)?;
    }
    Ok(())
}

fn resolve_out_dir(args: &RunArgs, cfg: &config::ExperimentConfigFile) -> PathBuf {
    args.out_dir
        .clone()
        .or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

#[derive(serde::Serialize)]
struct LimitSummary<'a> {
    #[serde(flatten)]
    report: &'a LimitReport,
    slope_threshold: Option<f64>,
    pass: Option<bool>,
}

fn limit_pass(report: &LimitReport, slope_threshold: Option<f64>) -> Option<bool> {
    let mut pass: Option<bool> = None;
    if let Some(th) = slope_threshold {
        pass = Some(report.fitted_exponent.map(|s| s <= th).unwrap_or(false));
    }
    if let Some(bound) = report.reference_bound {
        let ok = report.sup_normalized.map(|s| s <= bound).unwrap_or(true);
        pass = Some(pass.unwrap_or(true) && ok);
    }
    pass
}

fn cmd_limits(args: RunArgs) -> Result<(), CliError> {
    let cfg = config::load(&args.config)?;
    let exp = &cfg.experiment;
    let quad = cfg.quadrature.spec()?;
    let out_dir = resolve_out_dir(&args, &cfg);
    let op = exp.operation.as_str();
    eprintln!("limits: {op}");
    if op == "m1_bounds" {
        let p = cfg.params.resolve()?;
        let report = m1_bounds(&p, &exp.t_grid()?, &quad)?;
        let rows: Vec<(f64, f64)> = report
            .grid
            .iter()
            .cloned()
            .zip(report.gaps.clone())
            .collect();
        output::write_pairs_csv(&out_dir.join("m1_bounds.csv"), "grid_value,residual", &rows)?;
        output::write_json(&out_dir.join("m1_bounds.json"), &report)?;
        return Ok(());
    }
    let report = match op {
        "prop_alpha_limit" => {
            let beta = cfg
                .params
                .beta
                .ok_or_else(|| CliError::usage("prop_alpha_limit needs params.beta"))?;
            prop_alpha_limit(beta, exp.lambda()?, &exp.t_grid()?, &exp.alpha_grid()?)?
        }
        "prop_coupled_limit" => prop_coupled_limit(
            exp.c()?,
            exp.d_shift()?,
            exp.lambda()?,
            &exp.t_grid()?,
            &exp.beta_grid()?,
        )?,
        "prop_bessel_limit" => {
            let p = cfg.params.resolve()?;
            let n_grid: Vec<u32> = exp.n_grid()?.iter().map(|&n| n as u32).collect();
            prop_bessel_limit(&p, exp.lambda()?, exp.t_max()?, &n_grid)?
        }
        "prop_moment_phase" => {
            let p = cfg.params.resolve()?;
            prop_moment_phase(&p, &exp.lambda_grid()?, &exp.t_grid()?, &quad)?
        }
        "cor_exp_phase" => {
            let p = cfg.params.resolve()?;
            cor_exp_phase(&p, &exp.lambda_grid()?, &exp.t_grid()?)?
        }
        "taylor_residual" => {
            let p = cfg.params.resolve()?;
            let n_grid: Vec<u32> = exp.n_grid()?.iter().map(|&n| n as u32).collect();
            taylor_residual(
                &p,
                exp.lambda()?,
                exp.t()?,
                exp.a_exponent()?,
                exp.r_exponent()?,
                &n_grid,
            )?
        }
        other => {
            return Err(CliError::usage(&format!(
                "unknown limits operation '{other}'"
            )))
        }
    };
    output::write_limit_csv(&out_dir.join(format!("{op}.csv")), &report)?;
    let summary = LimitSummary {
        report: &report,
        slope_threshold: exp.slope_threshold,
        pass: limit_pass(&report, exp.slope_threshold),
    };
    output::write_json(&out_dir.join(format!("{op}.json")), &summary)?;
    Ok(())
}

fn cmd_clt(args: CltArgs, threads: usize) -> Result<(), CliError> {
    let cfg = config::load(&args.run.config)?;
    let exp = &cfg.experiment;
    let out_dir = resolve_out_dir(&args.run, &cfg);
    let op = exp.operation.as_str();
    eprintln!("clt: {op}");
    let keep_samples = args.samples_csv || cfg.output.samples_csv;
    let setup = CltSetup {
        params: cfg.params.resolve()?,
        nu: config::required_nu(&cfg)?,
        replicas: args.run.replicas.unwrap_or(exp.replicas()?),
        seed: args.run.seed.unwrap_or(cfg.seed),
        threads,
        quad: cfg.quadrature.spec()?,
        ks_threshold: exp.ks_threshold_or(0.05),
        keep_samples,
    };
    let n_grid = exp.n_grid()?;
    if op == "tail_bound" {
        let report =
            tail_bound_check(&setup, exp.compression_exponent()?, &exp.c_grid()?, &n_grid)?;
        let mut text = String::from("c,n,tail_probability,product\n");
        for p in &report.points {
            use std::fmt::Write as _;
            let _ = writeln!(text, "{},{},{},{}", p.c, p.n, p.tail_probability, p.product);
        }
        output::write_text(&out_dir.join("tail_bound.csv"), &text)?;
        output::write_json(&out_dir.join("tail_bound.json"), &report)?;
        return Ok(());
    }
    let report = match op {
        "clt_fixed_params" => clt_fixed_params(&setup, &n_grid)?,
        "clt_rayleigh" => clt_rayleigh(&setup, exp.compression_exponent()?, &n_grid)?,
        "clt_regimes" => {
            let r = exp.compression_exponent()?;
            let case = RegimeCase::from_exponent(r)?;
            let wanted = match args.regime {
                RegimeFlag::Auto => None,
                RegimeFlag::One => Some(1),
                RegimeFlag::Two => Some(2),
                RegimeFlag::Three => Some(3),
            };
            if let Some(w) = wanted {
                if w != case.index() {
                    return Err(CliError::usage(&format!(
                        "--regime {w} does not match r = {r} (case {})",
                        case.index()
                    )));
                }
            }
            clt_regimes(&setup, r, &n_grid)?
        }
        "clt_growing_alpha" => {
            let beta = setup.params.beta();
            clt_growing_alpha(beta, &exp.schedule()?, &setup, &n_grid)?
        }
        "clt_growing_coupled" => {
            clt_growing_coupled(exp.c()?, exp.d_shift()?, &exp.schedule()?, &setup, &n_grid)?
        }
        other => return Err(CliError::usage(&format!("unknown clt operation '{other}'"))),
    };
    output::write_json(&out_dir.join("report.json"), &report)?;
    if keep_samples {
        if let Some(samples) = &report.final_samples {
            output::write_column_csv(&out_dir.join("samples.csv"), "normalized_sample", samples)?;
        }
    }
    Ok(())
}

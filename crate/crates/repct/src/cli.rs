//! Command-line interface.
//!
//! Five subcommands: `classify` (region verdict as JSON), `simulate` (one
//! trajectory, summary line plus optional CSV), `sweep` (empirical
//! threshold measurements over a grid, CSV), `portrait` (phase-plane
//! geometry as JSON) and `verify` (built-in check suite).
//!
//! Numeric parameters resolve in three layers: command-line flags override
//! a `key = value` config file (`--config`), which overrides built-in
//! defaults. Exit codes: 0 for any successfully computed verdict, 1 for a
//! failed verification run, 2 for invalid flags or config, 3 when the
//! integrator cannot make progress, 4 for a strict sweep with failed cells.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dynamics::{
    full_trajectory_csv, integrate_full, integrate_reduced, reduced_trajectory_csv,
    IntegratorConfig, SimOutcome,
};
use crate::error::{Error, Result};
use crate::experiments::{
    preset_portrait, preset_sweep, render_portrait, sweep_csv, sweep_threshold_surface,
    PortraitSpec, SweepRow, SweepSpec, ThresholdBranch,
};
use crate::spectral::{GradientTensor, InitialConfig};
use crate::thresholds::{classify_nonzero_background_with, classify_zero_background, BranchRule};
use crate::verify;

/// Keys accepted in a config file. The same names as the command-line
/// flags, with underscores instead of hyphens.
const CONFIG_KEYS: &[&str] = &[
    "rho0", "d0", "gamma0", "k", "c", "beta", "m11", "m12", "m21", "m22", "t_end", "rel_tol",
    "abs_tol", "blowup_threshold", "max_steps", "sample_interval", "horizon", "tol_d",
    "resolution", "rho_min", "rho_max", "d_min", "d_max", "rho0_min", "rho0_max", "rho0_steps",
    "gamma0_min", "gamma0_max", "gamma0_steps",
];

#[derive(Parser)]
#[command(
    name = "repct",
    version,
    about = "Critical-threshold classification and simulation for the two-dimensional restricted Euler-Poisson system"
)]
struct Cli {
    /// Flat key = value file supplying defaults for numeric parameters
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify initial data against the critical-threshold surfaces
    Classify(ClassifyArgs),
    /// Integrate one trajectory and report global existence or breakdown
    Simulate(SimulateArgs),
    /// Measure empirical thresholds by bisection over a parameter grid
    Sweep(SweepArgs),
    /// Render nullclines, separatrices, rest points and sample trajectories
    Portrait(PortraitArgs),
    /// Run the built-in verification checks
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ScalarData {
    /// Initial density
    #[arg(long, allow_negative_numbers = true)]
    rho0: Option<f64>,
    /// Initial divergence (trace of the gradient tensor)
    #[arg(long, allow_negative_numbers = true)]
    d0: Option<f64>,
    /// Initial spectral gap Gamma0
    #[arg(long, allow_negative_numbers = true)]
    gamma0: Option<f64>,
    /// Gradient tensor entry (all four replace --d0/--gamma0)
    #[arg(long, allow_negative_numbers = true)]
    m11: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    m12: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    m21: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    m22: Option<f64>,
    /// Forcing strength
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    /// Background density
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
}

#[derive(Args)]
struct IntegratorArgs {
    /// Relative tolerance of the adaptive integrator
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Absolute tolerance of the adaptive integrator
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Magnitude at which a state component counts as blown up
    #[arg(long)]
    blowup_threshold: Option<f64>,
    /// Step budget per trajectory
    #[arg(long)]
    max_steps: Option<u64>,
    /// Spacing of output samples
    #[arg(long)]
    sample_interval: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    /// Branch selection switches on the sign of Gamma0 - 2k(rho0 - c)
    GammaGate,
    /// Branch selection switches at the saddle density
    SaddleGate,
}

impl From<RuleArg> for BranchRule {
    fn from(rule: RuleArg) -> Self {
        match rule {
            RuleArg::GammaGate => BranchRule::GammaGate,
            RuleArg::SaddleGate => BranchRule::SaddleGate,
        }
    }
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    data: ScalarData,
    /// Which branch-gate convention to apply for c > 0
    #[arg(long, value_enum, default_value_t = RuleArg::GammaGate)]
    rule: RuleArg,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    data: ScalarData,
    /// Integrate the full tensor system instead of the reduced one
    #[arg(long)]
    full: bool,
    /// Integration horizon
    #[arg(long)]
    t_end: Option<f64>,
    #[command(flatten)]
    integrator: IntegratorArgs,
    /// Write the sampled trajectory as CSV to this file
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    Lower,
    Upper,
    Both,
}

#[derive(Args)]
struct SweepArgs {
    /// Named grid (thm11, thm12); conflicts with explicit grid flags
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    rho0_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    rho0_max: Option<f64>,
    #[arg(long)]
    rho0_steps: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    gamma0_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma0_max: Option<f64>,
    #[arg(long)]
    gamma0_steps: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Which threshold branch to measure (default: upper at c = 0, both otherwise)
    #[arg(long, value_enum)]
    branch: Option<BranchArg>,
    /// Survival horizon for the bisection oracle
    #[arg(long)]
    horizon: Option<f64>,
    /// Bisection stops at this bracket width in d0
    #[arg(long)]
    tol_d: Option<f64>,
    #[command(flatten)]
    integrator: IntegratorArgs,
    /// Write the CSV here instead of stdout
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Exit with code 4 when any cell fails to produce a measurement
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct PortraitArgs {
    /// Named setup (fig21, fig22, fig23, fig31, fig32); conflicts with
    /// explicit geometry flags
    #[arg(long)]
    preset: Option<String>,
    /// Gap ratio Gamma0 / rho0^2 shared by all curves and seeds
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    rho_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    rho_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    d_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    d_max: Option<f64>,
    /// Number of density samples along the curves
    #[arg(long)]
    resolution: Option<usize>,
    /// Trajectory seeds as rho:d pairs, e.g. "1:0,2:-1"
    #[arg(long, allow_hyphen_values = true)]
    seeds: Option<String>,
    /// Integration horizon for the seeded trajectories
    #[arg(long)]
    t_end: Option<f64>,
    #[command(flatten)]
    integrator: IntegratorArgs,
    /// Write the JSON here instead of stdout
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only the fast closed-form checks
    #[arg(long)]
    quick: bool,
}

/// Parse a flat `key = value` config file. Blank lines and `#` comments are
/// ignored; unknown keys are rejected.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidConfig(format!("config line {}: expected key = value, got {raw:?}", lineno + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(Error::InvalidConfig(format!("config line {}: unknown key {key:?}", lineno + 1)));
        }
        if value.is_empty() {
            return Err(Error::InvalidConfig(format!("config line {}: empty value for {key}", lineno + 1)));
        }
        map.insert(key.to_string(), value.to_string());
    }
    Ok(map)
}

struct ConfigMap(BTreeMap<String, String>);

impl ConfigMap {
    fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        self.0
            .get(key)
            .map(|v| {
                v.parse::<f64>().map_err(|_| {
                    Error::InvalidConfig(format!("config key {key}: {v:?} is not a number"))
                })
            })
            .transpose()
    }

    fn get_u64(&self, key: &str) -> Result<Option<u64>> {
        self.0
            .get(key)
            .map(|v| {
                v.parse::<u64>().map_err(|_| {
                    Error::InvalidConfig(format!("config key {key}: {v:?} is not a count"))
                })
            })
            .transpose()
    }

    fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        Ok(self.get_u64(key)?.map(|v| v as usize))
    }
}

fn resolve_f64(flag: Option<f64>, cfg: &ConfigMap, key: &str, default: f64) -> Result<f64> {
    Ok(flag.or(cfg.get_f64(key)?).unwrap_or(default))
}

fn require_f64(flag: Option<f64>, cfg: &ConfigMap, key: &str) -> Result<f64> {
    flag.or(cfg.get_f64(key)?).ok_or_else(|| {
        Error::InvalidConfig(format!("missing parameter {key}: pass --{} or set it in the config file", key.replace('_', "-")))
    })
}

fn build_integrator(
    args: &IntegratorArgs,
    cfg: &ConfigMap,
    t_end_flag: Option<f64>,
    default_t_end: f64,
) -> Result<IntegratorConfig> {
    let defaults = IntegratorConfig::default();
    let ic = IntegratorConfig {
        rel_tol: resolve_f64(args.rel_tol, cfg, "rel_tol", defaults.rel_tol)?,
        abs_tol: resolve_f64(args.abs_tol, cfg, "abs_tol", defaults.abs_tol)?,
        t_end: resolve_f64(t_end_flag, cfg, "t_end", default_t_end)?,
        blowup_threshold: resolve_f64(
            args.blowup_threshold,
            cfg,
            "blowup_threshold",
            defaults.blowup_threshold,
        )?,
        max_steps: args.max_steps.or(cfg.get_u64("max_steps")?).unwrap_or(defaults.max_steps),
        sample_interval: resolve_f64(
            args.sample_interval,
            cfg,
            "sample_interval",
            defaults.sample_interval,
        )?,
    };
    ic.validate()?;
    Ok(ic)
}

/// Resolve initial data from scalar flags or tensor entries.
fn build_initial_config(data: &ScalarData, cfg: &ConfigMap) -> Result<(InitialConfig, Option<GradientTensor>)> {
    let k = resolve_f64(data.k, cfg, "k", 1.0)?;
    let c = resolve_f64(data.c, cfg, "c", 0.0)?;
    let rho0 = require_f64(data.rho0, cfg, "rho0")?;
    let entries = [
        data.m11.or(cfg.get_f64("m11")?),
        data.m12.or(cfg.get_f64("m12")?),
        data.m21.or(cfg.get_f64("m21")?),
        data.m22.or(cfg.get_f64("m22")?),
    ];
    if entries.iter().any(Option::is_some) {
        if entries.iter().any(Option::is_none) {
            return Err(Error::InvalidConfig(
                "tensor input needs all four entries --m11 --m12 --m21 --m22".into(),
            ));
        }
        if data.d0.is_some() || data.gamma0.is_some() {
            return Err(Error::InvalidConfig(
                "pass either tensor entries or --d0/--gamma0, not both".into(),
            ));
        }
        let m = GradientTensor::new(
            entries[0].unwrap(),
            entries[1].unwrap(),
            entries[2].unwrap(),
            entries[3].unwrap(),
        )?;
        return Ok((InitialConfig::from_tensor(&m, rho0, k, c)?, Some(m)));
    }
    let d0 = require_f64(data.d0, cfg, "d0")?;
    let gamma0 = require_f64(data.gamma0, cfg, "gamma0")?;
    Ok((InitialConfig::new(rho0, d0, gamma0, k, c)?, None))
}

fn write_or_print(output: Option<&Path>, content: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, content)
            .map_err(|e| Error::InvalidConfig(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_classify(args: &ClassifyArgs, cfg: &ConfigMap) -> Result<i32> {
    let (config, _) = build_initial_config(&args.data, cfg)?;
    let (verdict, theorem) = if config.c == 0.0 {
        (classify_zero_background(&config)?, "zero-background")
    } else {
        (classify_nonzero_background_with(&config, args.rule.into())?, "nonzero-background")
    };
    let report = serde_json::json!({
        "region": verdict.region,
        "margin": verdict.margin,
        "surface_value": verdict.surface_value,
        "theorem": theorem,
    });
    println!("{report}");
    Ok(0)
}

fn print_diagnostics<S>(sim: &SimOutcome<S>) {
    let drift = match sim.diagnostics.invariant_drift {
        Some(d) => format!("{d:.3e}"),
        None => "n/a".into(),
    };
    eprintln!(
        "steps {} | max |d| {:.6e} | max rho {:.6e} | invariant drift {}{}",
        sim.diagnostics.steps,
        sim.diagnostics.max_abs_d,
        sim.diagnostics.max_rho,
        drift,
        if sim.diagnostics.hit_max_steps { " | step budget exhausted" } else { "" },
    );
}

fn cmd_simulate(args: &SimulateArgs, cfg: &ConfigMap) -> Result<i32> {
    let ic = build_integrator(&args.integrator, cfg, args.t_end, IntegratorConfig::default().t_end)?;
    let (config, tensor) = build_initial_config(&args.data, cfg)?;
    if args.full {
        let m = tensor.ok_or_else(|| {
            Error::InvalidConfig("--full integrates the tensor system and needs --m11 --m12 --m21 --m22".into())
        })?;
        let sim = integrate_full(&m, config.rho0, config.k, config.c, &ic)?;
        println!("{}", sim.outcome.summary());
        print_diagnostics(&sim);
        if let Some(path) = &args.output {
            write_or_print(Some(path), &full_trajectory_csv(&sim.samples))?;
        }
    } else {
        let sim = integrate_reduced(&config, &ic)?;
        println!("{}", sim.outcome.summary());
        print_diagnostics(&sim);
        if let Some(path) = &args.output {
            write_or_print(Some(path), &reduced_trajectory_csv(&sim.samples))?;
        }
    }
    Ok(0)
}

fn linspace(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::InvalidConfig("grid needs at least one step".into()));
    }
    if !(min <= max) {
        return Err(Error::InvalidConfig(format!("grid range [{min}, {max}] is empty")));
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    Ok((0..steps).map(|i| min + (max - min) * i as f64 / (steps - 1) as f64).collect())
}

fn build_sweep_spec(args: &SweepArgs, cfg: &ConfigMap) -> Result<SweepSpec> {
    if let Some(name) = &args.preset {
        let grid_flags = args.rho0_min.is_some()
            || args.rho0_max.is_some()
            || args.rho0_steps.is_some()
            || args.gamma0_min.is_some()
            || args.gamma0_max.is_some()
            || args.gamma0_steps.is_some()
            || args.k.is_some()
            || args.c.is_some()
            || args.branch.is_some();
        if grid_flags {
            return Err(Error::InvalidConfig(
                "--preset conflicts with explicit grid flags (--rho0-*, --gamma0-*, --k, --c, --branch)".into(),
            ));
        }
        let mut spec = preset_sweep(name)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown sweep preset {name:?}")))?;
        spec.horizon = resolve_f64(args.horizon, cfg, "horizon", spec.horizon)?;
        spec.tol_d = resolve_f64(args.tol_d, cfg, "tol_d", spec.tol_d)?;
        spec.integrator =
            build_integrator(&args.integrator, cfg, Some(spec.integrator.t_end), spec.integrator.t_end)?;
        return Ok(spec);
    }

    let k = resolve_f64(args.k, cfg, "k", 1.0)?;
    let c = resolve_f64(args.c, cfg, "c", 0.0)?;
    let rho_grid = linspace(
        require_f64(args.rho0_min, cfg, "rho0_min")?,
        require_f64(args.rho0_max, cfg, "rho0_max")?,
        args.rho0_steps.or(cfg.get_usize("rho0_steps")?).unwrap_or(5),
    )?;
    let gamma_grid = linspace(
        require_f64(args.gamma0_min, cfg, "gamma0_min")?,
        require_f64(args.gamma0_max, cfg, "gamma0_max")?,
        args.gamma0_steps.or(cfg.get_usize("gamma0_steps")?).unwrap_or(5),
    )?;
    let cells: Vec<(f64, f64)> = rho_grid
        .iter()
        .flat_map(|&rho0| gamma_grid.iter().map(move |&gamma0| (rho0, gamma0)))
        .collect();
    let branches = match args.branch {
        Some(BranchArg::Lower) => vec![ThresholdBranch::Lower],
        Some(BranchArg::Upper) => vec![ThresholdBranch::Upper],
        Some(BranchArg::Both) => vec![ThresholdBranch::Lower, ThresholdBranch::Upper],
        None if c == 0.0 => vec![ThresholdBranch::Upper],
        None => vec![ThresholdBranch::Lower, ThresholdBranch::Upper],
    };
    Ok(SweepSpec {
        cells,
        k,
        c,
        branches,
        horizon: resolve_f64(args.horizon, cfg, "horizon", 50.0)?,
        tol_d: resolve_f64(args.tol_d, cfg, "tol_d", 1e-3)?,
        integrator: build_integrator(&args.integrator, cfg, None, IntegratorConfig::default().t_end)?,
    })
}

/// Run the sweep, honoring the REPCT_THREADS cap on the worker pool.
fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    match std::env::var("REPCT_THREADS") {
        Ok(raw) => {
            let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "REPCT_THREADS must be a positive integer, got {raw:?}"
                ))
            })?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(|| sweep_threshold_surface(spec)))
        }
        Err(_) => Ok(sweep_threshold_surface(spec)),
    }
}

fn cmd_sweep(args: &SweepArgs, cfg: &ConfigMap) -> Result<i32> {
    let spec = build_sweep_spec(args, cfg)?;
    let rows = run_sweep(&spec)?;
    write_or_print(args.output.as_deref(), &sweep_csv(&rows))?;

    let ok = rows.iter().filter(|r| r.status.starts_with("ok_")).count();
    let excluded = rows.iter().filter(|r| r.status == "excluded_near_boundary").count();
    let no_bracket = rows.iter().filter(|r| r.status.starts_with("no_bracket")).count();
    let errors = rows.iter().filter(|r| r.status.starts_with("error")).count();
    eprintln!(
        "sweep: {} rows ({} ok, {} excluded, {} no bracket, {} error)",
        rows.len(),
        ok,
        excluded,
        no_bracket,
        errors
    );
    if args.strict && no_bracket + errors > 0 {
        return Ok(4);
    }
    Ok(0)
}

fn parse_seeds(raw: &str) -> Result<Vec<(f64, f64)>> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(Vec::new());
    }
    raw.split(',')
        .map(|pair| {
            let (a, b) = pair.split_once(':').ok_or_else(|| {
                Error::InvalidConfig(format!("seed {pair:?} is not a rho:d pair"))
            })?;
            let rho: f64 = a.trim().parse().map_err(|_| {
                Error::InvalidConfig(format!("seed density {a:?} is not a number"))
            })?;
            let d: f64 = b.trim().parse().map_err(|_| {
                Error::InvalidConfig(format!("seed divergence {b:?} is not a number"))
            })?;
            Ok((rho, d))
        })
        .collect()
}

fn build_portrait_spec(args: &PortraitArgs, cfg: &ConfigMap) -> Result<PortraitSpec> {
    if let Some(name) = &args.preset {
        let geometry_flags = args.beta.is_some()
            || args.k.is_some()
            || args.c.is_some()
            || args.rho_min.is_some()
            || args.rho_max.is_some()
            || args.d_min.is_some()
            || args.d_max.is_some()
            || args.seeds.is_some();
        if geometry_flags {
            return Err(Error::InvalidConfig(
                "--preset conflicts with explicit geometry flags (--beta, --k, --c, ranges, --seeds)".into(),
            ));
        }
        let mut spec = preset_portrait(name)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown portrait preset {name:?}")))?;
        if let Some(res) = args.resolution.or(cfg.get_usize("resolution")?) {
            spec.resolution = res;
        }
        spec.integrator =
            build_integrator(&args.integrator, cfg, args.t_end, spec.integrator.t_end)?;
        return Ok(spec);
    }

    let seeds = match &args.seeds {
        Some(raw) => parse_seeds(raw)?,
        None => Vec::new(),
    };
    Ok(PortraitSpec {
        beta: require_f64(args.beta, cfg, "beta")?,
        k: resolve_f64(args.k, cfg, "k", 1.0)?,
        c: resolve_f64(args.c, cfg, "c", 0.0)?,
        rho_range: (
            resolve_f64(args.rho_min, cfg, "rho_min", 0.0)?,
            resolve_f64(args.rho_max, cfg, "rho_max", 4.0)?,
        ),
        d_range: (
            resolve_f64(args.d_min, cfg, "d_min", -3.0)?,
            resolve_f64(args.d_max, cfg, "d_max", 3.0)?,
        ),
        resolution: args.resolution.or(cfg.get_usize("resolution")?).unwrap_or(200),
        seeds,
        integrator: build_integrator(&args.integrator, cfg, args.t_end, 20.0)?,
    })
}

fn cmd_portrait(args: &PortraitArgs, cfg: &ConfigMap) -> Result<i32> {
    let spec = build_portrait_spec(args, cfg)?;
    let data = render_portrait(&spec)?;
    let mut json = serde_json::to_string_pretty(&data)
        .map_err(|e| Error::InvalidConfig(format!("cannot serialize portrait: {e}")))?;
    json.push('\n');
    write_or_print(args.output.as_deref(), &json)?;
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> i32 {
    let results = if args.quick {
        vec![
            verify::check_surface_closed_forms(),
            verify::check_level_function_positivity(),
            verify::check_saddle_linearization(),
            verify::check_riccati_slope_bound(),
        ]
    } else {
        verify::run_all()
    };
    let mut failed = 0;
    for result in &results {
        let tag = if result.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {}: {}", result.name, result.detail);
        if !result.passed {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("all {} checks passed", results.len());
        0
    } else {
        println!("{failed} of {} checks failed", results.len());
        1
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::StepFailure { .. } => 3,
        _ => 2,
    }
}

/// Entry point used by the binary: parse, dispatch, map errors to exit codes.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match &cli.config {
        Some(path) => match fs::read_to_string(path) {
            Ok(text) => match parse_config(&text) {
                Ok(map) => ConfigMap(map),
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            },
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return 2;
            }
        },
        None => ConfigMap(BTreeMap::new()),
    };
    let result = match &cli.command {
        Command::Classify(args) => cmd_classify(args, &cfg),
        Command::Simulate(args) => cmd_simulate(args, &cfg),
        Command::Sweep(args) => cmd_sweep(args, &cfg),
        Command::Portrait(args) => cmd_portrait(args, &cfg),
        Command::Verify(args) => Ok(cmd_verify(args)),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parser_accepts_known_keys_and_comments() {
        let map = parse_config("# comment\nrho0 = 1.5\n\nk=2 # trailing\n").unwrap();
        assert_eq!(map.get("rho0").unwrap(), "1.5");
        assert_eq!(map.get("k").unwrap(), "2");
    }

    #[test]
    fn config_parser_rejects_unknown_keys_and_malformed_lines() {
        assert!(matches!(parse_config("speed = 9"), Err(Error::InvalidConfig(_))));
        assert!(matches!(parse_config("rho0 1.5"), Err(Error::InvalidConfig(_))));
        assert!(matches!(parse_config("rho0 ="), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn seed_parser_handles_pairs_and_rejects_garbage() {
        assert_eq!(parse_seeds("1:0, 2:-1.5").unwrap(), vec![(1.0, 0.0), (2.0, -1.5)]);
        assert_eq!(parse_seeds("").unwrap(), vec![]);
        assert!(parse_seeds("1;0").is_err());
        assert!(parse_seeds("a:b").is_err());
    }

    #[test]
    fn flag_beats_config_beats_default() {
        let cfg = ConfigMap(parse_config("k = 3").unwrap());
        assert_eq!(resolve_f64(Some(5.0), &cfg, "k", 1.0).unwrap(), 5.0);
        assert_eq!(resolve_f64(None, &cfg, "k", 1.0).unwrap(), 3.0);
        let empty = ConfigMap(BTreeMap::new());
        assert_eq!(resolve_f64(None, &empty, "k", 1.0).unwrap(), 1.0);
        assert!(require_f64(None, &empty, "rho0").is_err());
    }
}

//! Empirical validation harnesses.
//!
//! The centerpiece is a bisection oracle that measures the critical
//! divergence empirically: fix (rho0, Gamma0, k, c), vary only d0, and
//! bisect on the observed outcome (global existence over a long horizon
//! versus finite-time breakdown). The measured threshold is then compared
//! against the analytic surfaces, which keeps the comparison honest in the
//! regimes where the two branch-gate conventions disagree; see
//! `thresholds::BranchRule`.
//!
//! On top of the oracle sit a parallel parameter sweep with CSV output and
//! a phase-portrait renderer that collects nullclines, separatrices, rest
//! points and sample trajectories into one serializable bundle.

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{integrate_reduced, integrate_reduced_sparse, IntegratorConfig, Outcome};
use crate::error::{Error, Result};
use crate::spectral::InitialConfig;
use crate::thresholds::{
    critical_points, g1_nonzero_background, g2_nonzero_background, g_zero_background,
    level_offset_g, CriticalPoints,
};

/// Sweep cells closer than this to a regime boundary are skipped: the
/// bisection oracle is ill-conditioned where the threshold surfaces meet.
pub const BOUNDARY_EXCLUSION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdBranch {
    Lower,
    Upper,
}

impl std::fmt::Display for ThresholdBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ThresholdBranch::Lower => "lower",
            ThresholdBranch::Upper => "upper",
        })
    }
}

/// One empirical threshold measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectionResult {
    pub d_critical_empirical: f64,
    pub bracket_width: f64,
    pub n_simulations: u32,
    pub analytic_value: f64,
    /// |empirical - analytic|
    pub discrepancy: f64,
    /// True when any verdict in the bisection ran out of step budget, which
    /// makes its survival call unreliable.
    pub flagged_max_steps: bool,
    /// True when the survivors sit on the high-d0 side of the threshold.
    pub survive_above: bool,
}

/// Query for `empirical_threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdQuery {
    pub rho0: f64,
    pub gamma0: f64,
    pub k: f64,
    pub c: f64,
    pub branch: ThresholdBranch,
    /// Survival horizon: an outcome counts as global when it reaches this time.
    pub horizon: f64,
    /// Bisection stops when the d0 bracket is narrower than this.
    pub tol_d: f64,
    /// Override the probe pair; None picks regime-appropriate defaults.
    pub probes: Option<(f64, f64)>,
}

impl ThresholdQuery {
    pub fn new(rho0: f64, gamma0: f64, k: f64, c: f64) -> Self {
        ThresholdQuery {
            rho0,
            gamma0,
            k,
            c,
            branch: ThresholdBranch::Upper,
            horizon: 50.0,
            tol_d: 1e-3,
            probes: None,
        }
    }
}

fn analytic_threshold(q: &ThresholdQuery) -> Result<f64> {
    if q.c == 0.0 {
        if q.branch == ThresholdBranch::Lower {
            return Err(Error::InvalidConfig(
                "the zero-background threshold has a single branch; use Upper".into(),
            ));
        }
        return g_zero_background(q.rho0, q.gamma0, q.k);
    }
    let g1 = g1_nonzero_background(q.rho0, q.gamma0, q.k, q.c)?;
    Ok(match q.branch {
        ThresholdBranch::Upper => g1,
        ThresholdBranch::Lower => -g1,
    })
}

fn default_probes(q: &ThresholdQuery, analytic: f64) -> (f64, f64) {
    let pad = analytic.abs().max(1.0);
    if q.c > 0.0 && q.gamma0 < 2.0 * q.k * (q.rho0 - q.c) {
        // interval regime: the admissible set is a band around d0 = 0, so
        // probe from its center outward; the symmetric rule below can land
        // both probes outside a narrow band
        return match q.branch {
            ThresholdBranch::Upper => (0.0, analytic + pad),
            ThresholdBranch::Lower => (analytic - pad, 0.0),
        };
    }
    (analytic - pad, analytic + pad)
}

enum Probe {
    Bracketed { lo: f64, hi: f64, survive_above: bool, flagged: bool },
    BothSurvived { lo: f64, hi: f64 },
    BothBrokeDown { lo: f64, hi: f64 },
}

fn survives(q: &ThresholdQuery, d0: f64, ic: &IntegratorConfig) -> Result<(bool, bool)> {
    let config = InitialConfig::new(q.rho0, d0, q.gamma0, q.k, q.c)?;
    let sim = integrate_reduced_sparse(&config, ic)?;
    let survived = matches!(sim.outcome, Outcome::GlobalUpTo(_));
    Ok((survived, sim.diagnostics.hit_max_steps))
}

fn probe_bracket(q: &ThresholdQuery, analytic: f64, ic: &IntegratorConfig) -> Result<Probe> {
    let (a, b) = q.probes.unwrap_or_else(|| default_probes(q, analytic));
    let (lo, hi) = (a.min(b), a.max(b));
    if !(lo < hi) {
        return Err(Error::InvalidConfig(format!("probes must be distinct, got {a} and {b}")));
    }
    let (s_lo, f_lo) = survives(q, lo, ic)?;
    let (s_hi, f_hi) = survives(q, hi, ic)?;
    Ok(match (s_lo, s_hi) {
        (true, true) => Probe::BothSurvived { lo, hi },
        (false, false) => Probe::BothBrokeDown { lo, hi },
        _ => Probe::Bracketed { lo, hi, survive_above: s_hi, flagged: f_lo || f_hi },
    })
}

/// Measure the critical divergence by bisection on the simulated outcome.
///
/// The two probes must straddle the threshold: exactly one of them has to
/// survive the horizon. When both agree the measurement is impossible and a
/// `NoBracket` error reports what the probes did, which is itself a useful
/// observation (a region where both sides break down has no threshold to
/// measure). The bisection is orientation-agnostic, so it handles both the
/// lower and the upper edge of a two-sided admissible band.
pub fn empirical_threshold(q: &ThresholdQuery, ic: &IntegratorConfig) -> Result<BisectionResult> {
    if !(q.horizon > 0.0) || !q.horizon.is_finite() {
        return Err(Error::InvalidConfig(format!("horizon must be positive, got {}", q.horizon)));
    }
    if !(q.tol_d > 0.0) || !q.tol_d.is_finite() {
        return Err(Error::InvalidConfig(format!("tol_d must be positive, got {}", q.tol_d)));
    }
    let run_ic = IntegratorConfig { t_end: q.horizon, ..*ic };
    run_ic.validate()?;
    let analytic = analytic_threshold(q)?;

    let (mut lo, mut hi, survive_above, mut flagged) =
        match probe_bracket(q, analytic, &run_ic)? {
            Probe::Bracketed { lo, hi, survive_above, flagged } => (lo, hi, survive_above, flagged),
            Probe::BothSurvived { lo, hi } => {
                return Err(Error::NoBracket(format!(
                    "both probes survived to t = {}: d0 = {lo} and d0 = {hi}",
                    q.horizon
                )));
            }
            Probe::BothBrokeDown { lo, hi } => {
                return Err(Error::NoBracket(format!(
                    "both probes broke down: d0 = {lo} and d0 = {hi}"
                )));
            }
        };

    let mut n_simulations: u32 = 2;
    while hi - lo > q.tol_d {
        let mid = 0.5 * (lo + hi);
        if !(lo < mid && mid < hi) {
            break;
        }
        let (s_mid, f_mid) = survives(q, mid, &run_ic)?;
        flagged |= f_mid;
        n_simulations += 1;
        if s_mid == survive_above {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let d_critical_empirical = 0.5 * (lo + hi);
    Ok(BisectionResult {
        d_critical_empirical,
        bracket_width: hi - lo,
        n_simulations,
        analytic_value: analytic,
        discrepancy: (d_critical_empirical - analytic).abs(),
        flagged_max_steps: flagged,
        survive_above,
    })
}

/// Grid specification for a threshold sweep.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// (rho0, Gamma0) cells.
    pub cells: Vec<(f64, f64)>,
    pub k: f64,
    pub c: f64,
    pub branches: Vec<ThresholdBranch>,
    pub horizon: f64,
    pub tol_d: f64,
    pub integrator: IntegratorConfig,
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub rho0: f64,
    pub gamma0: f64,
    pub k: f64,
    pub c: f64,
    pub branch: ThresholdBranch,
    pub analytic: Option<f64>,
    pub empirical: Option<f64>,
    pub discrepancy: Option<f64>,
    pub bracket_width: Option<f64>,
    pub n_sims: Option<u32>,
    pub status: String,
}

fn near_regime_boundary(rho0: f64, gamma0: f64, k: f64, c: f64) -> bool {
    if gamma0.abs() <= BOUNDARY_EXCLUSION {
        return true;
    }
    if c == 0.0 {
        (gamma0 - 2.0 * k * rho0).abs() <= BOUNDARY_EXCLUSION
    } else {
        let beta = gamma0 / (rho0 * rho0);
        (gamma0 - 2.0 * k * (rho0 - c)).abs() <= BOUNDARY_EXCLUSION
            || (beta - 0.5 * k / c).abs() <= BOUNDARY_EXCLUSION
    }
}

fn error_status(e: &Error) -> String {
    match e {
        Error::Domain(_) => "error_domain".into(),
        Error::InvalidConfig(_) => "error_invalid_config".into(),
        Error::StepFailure { .. } => "error_step_failure".into(),
        Error::NoBracket(_) => "error_no_bracket".into(),
    }
}

fn sweep_cell(spec: &SweepSpec, rho0: f64, gamma0: f64, branch: ThresholdBranch) -> SweepRow {
    let empty = SweepRow {
        rho0,
        gamma0,
        k: spec.k,
        c: spec.c,
        branch,
        analytic: None,
        empirical: None,
        discrepancy: None,
        bracket_width: None,
        n_sims: None,
        status: String::new(),
    };
    if rho0 > 0.0 && near_regime_boundary(rho0, gamma0, spec.k, spec.c) {
        return SweepRow { status: "excluded_near_boundary".into(), ..empty };
    }
    let query = ThresholdQuery {
        branch,
        horizon: spec.horizon,
        tol_d: spec.tol_d,
        ..ThresholdQuery::new(rho0, gamma0, spec.k, spec.c)
    };
    let analytic = match analytic_threshold(&query) {
        Ok(v) => v,
        Err(e) => return SweepRow { status: error_status(&e), ..empty },
    };
    let run_ic = IntegratorConfig { t_end: spec.horizon, ..spec.integrator };
    match probe_bracket(&query, analytic, &run_ic) {
        Ok(Probe::BothSurvived { .. }) => SweepRow {
            analytic: Some(analytic),
            n_sims: Some(2),
            status: "no_bracket_both_survived".into(),
            ..empty
        },
        Ok(Probe::BothBrokeDown { .. }) => SweepRow {
            analytic: Some(analytic),
            n_sims: Some(2),
            status: "no_bracket_both_broke_down".into(),
            ..empty
        },
        Err(e) => SweepRow { status: error_status(&e), ..empty },
        Ok(Probe::Bracketed { .. }) => match empirical_threshold(&query, &spec.integrator) {
            Ok(result) => {
                let side = if result.survive_above { "above" } else { "below" };
                let flag = if result.flagged_max_steps { "_flagged_max_steps" } else { "" };
                SweepRow {
                    analytic: Some(result.analytic_value),
                    empirical: Some(result.d_critical_empirical),
                    discrepancy: Some(result.discrepancy),
                    bracket_width: Some(result.bracket_width),
                    n_sims: Some(result.n_simulations),
                    status: format!("ok_survive_{side}{flag}"),
                    ..empty
                }
            }
            Err(e) => SweepRow { status: error_status(&e), ..empty },
        },
    }
}

/// Run the bisection oracle over a grid. Rows come back in deterministic
/// order (cells in input order, branches inner); the work is parallelized
/// across cells with whatever thread pool is current.
pub fn sweep_threshold_surface(spec: &SweepSpec) -> Vec<SweepRow> {
    let jobs: Vec<(f64, f64, ThresholdBranch)> = spec
        .cells
        .iter()
        .flat_map(|&(rho0, gamma0)| spec.branches.iter().map(move |&b| (rho0, gamma0, b)))
        .collect();
    jobs.par_iter().map(|&(rho0, gamma0, branch)| sweep_cell(spec, rho0, gamma0, branch)).collect()
}

fn csv_opt(value: Option<f64>) -> String {
    value.map_or(String::new(), |v| format!("{v:.16e}"))
}

/// CSV rendering of sweep rows; empty fields mean not applicable.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out =
        String::from("rho0,Gamma0,k,c,branch,analytic,empirical,discrepancy,bracket_width,n_sims,status\n");
    for row in rows {
        let n_sims = row.n_sims.map_or(String::new(), |n| n.to_string());
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            row.rho0,
            row.gamma0,
            row.k,
            row.c,
            row.branch,
            csv_opt(row.analytic),
            csv_opt(row.empirical),
            csv_opt(row.discrepancy),
            csv_opt(row.bracket_width),
            n_sims,
            row.status,
        ));
    }
    out
}

/// Point on the divergence nullcline d^2 = 2k(rho - c) - beta rho^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NullclinePoint {
    pub rho: f64,
    pub d_plus: Option<f64>,
    pub d_minus: Option<f64>,
}

pub fn nullcline(beta: f64, k: f64, c: f64, rho_values: &[f64]) -> Vec<NullclinePoint> {
    rho_values
        .iter()
        .map(|&rho| {
            let radicand = 2.0 * k * (rho - c) - beta * rho * rho;
            if radicand >= 0.0 {
                let root = radicand.sqrt();
                NullclinePoint { rho, d_plus: Some(root), d_minus: Some(-root) }
            } else {
                NullclinePoint { rho, d_plus: None, d_minus: None }
            }
        })
        .collect()
}

/// Point on the separatrix; None where the curve has no real value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparatrixPoint {
    pub rho: f64,
    pub d: Option<f64>,
}

/// The critical curve separating global existence from breakdown, sampled
/// on the given densities.
///
/// Zero background with beta > 0: the signed curve d = g(rho, beta rho^2).
/// Positive background with 0 < beta < k/(2c): the stable branch
/// d = +sqrt(rho G(rho, rho2*, beta)) through the saddle (its mirror image
/// is the unstable branch). At beta = k/(2c) it is the degenerate curve g2.
/// Other regimes have no separatrix and report a domain error.
pub fn separatrix(beta: f64, k: f64, c: f64, rho_values: &[f64]) -> Result<Vec<SeparatrixPoint>> {
    if !(k > 0.0) || c < 0.0 {
        return Err(Error::Domain(format!("separatrix requires k > 0, c >= 0, got k = {k}, c = {c}")));
    }
    if c == 0.0 {
        if beta <= 0.0 {
            return Err(Error::Domain(
                "no separatrix at zero background with nonpositive gap ratio".into(),
            ));
        }
        return Ok(rho_values
            .iter()
            .map(|&rho| SeparatrixPoint {
                rho,
                d: (rho > 0.0)
                    .then(|| g_zero_background(rho, beta * rho * rho, k).ok())
                    .flatten(),
            })
            .collect());
    }
    let pts = critical_points(beta, k, c);
    match pts.kind {
        crate::thresholds::CriticalPointKind::Degenerate => Ok(rho_values
            .iter()
            .map(|&rho| SeparatrixPoint {
                rho,
                d: (rho > 0.0).then(|| g2_nonzero_background(rho, k, c).ok()).flatten(),
            })
            .collect()),
        crate::thresholds::CriticalPointKind::TwoPoints if beta > 0.0 => {
            let saddle = pts.rho2_star.expect("two-point regime has a saddle");
            Ok(rho_values
                .iter()
                .map(|&rho| {
                    let d = if rho > 0.0 {
                        level_offset_g(rho, saddle, beta, k, c)
                            .ok()
                            .map(|g| rho * g)
                            .filter(|&v| v >= 0.0)
                            .map(f64::sqrt)
                    } else {
                        None
                    };
                    SeparatrixPoint { rho, d }
                })
                .collect())
        }
        _ => Err(Error::Domain(format!(
            "no separatrix for beta = {beta} with background {c}: every bounded orbit is global"
        ))),
    }
}

/// Named sweep grids exposed by the command-line interface and reused by
/// the verification suite. The zero-background grid scales Gamma0 as a
/// multiple of the sign-change locus 2 k rho0; the positive-background grid
/// stays strictly inside the two-sided band regime.
pub fn preset_sweep(name: &str) -> Option<SweepSpec> {
    let k = 1.0;
    match name {
        "thm11" => {
            let mut cells = Vec::new();
            for i in 0..5 {
                let rho0 = 0.5 + 3.5 * i as f64 / 4.0;
                for m in [0.5, 1.5, 2.0, 3.0] {
                    cells.push((rho0, 2.0 * k * rho0 * m));
                }
            }
            Some(SweepSpec {
                cells,
                k,
                c: 0.0,
                branches: vec![ThresholdBranch::Upper],
                horizon: 50.0,
                tol_d: 1e-3,
                integrator: IntegratorConfig::default(),
            })
        }
        "thm12" => {
            let c = 1.0;
            let mut cells = Vec::new();
            for rho0 in [1.5, 2.5, 3.5, 4.5] {
                for m in [0.3, 0.6, 0.9] {
                    let cap = (0.5 * k / c * rho0 * rho0).min(2.0 * k * (rho0 - c));
                    cells.push((rho0, m * cap));
                }
            }
            Some(SweepSpec {
                cells,
                k,
                c,
                branches: vec![ThresholdBranch::Lower, ThresholdBranch::Upper],
                horizon: 50.0,
                tol_d: 1e-3,
                integrator: IntegratorConfig::default(),
            })
        }
        _ => None,
    }
}

/// Named phase-portrait setups exposed by the command-line interface, one
/// per qualitative regime of the reduced system.
pub fn preset_portrait(name: &str) -> Option<PortraitSpec> {
    let base = PortraitSpec {
        beta: 0.0,
        k: 1.0,
        c: 0.0,
        rho_range: (0.0, 4.0),
        d_range: (-3.0, 3.0),
        resolution: 200,
        seeds: Vec::new(),
        integrator: IntegratorConfig { t_end: 20.0, ..IntegratorConfig::default() },
    };
    match name {
        "fig21" => Some(PortraitSpec {
            beta: -1.0,
            rho_range: (0.0, 3.5),
            seeds: vec![(1.0, 0.0), (2.0, 1.0), (3.0, -1.0), (0.5, -2.0)],
            ..base
        }),
        "fig22" => Some(PortraitSpec {
            beta: 0.0,
            seeds: vec![(1.0, 0.0), (2.0, -1.0), (0.5, 1.0), (1.5, -2.0)],
            ..base
        }),
        "fig23" => Some(PortraitSpec {
            beta: 1.0,
            seeds: vec![(1.0, 0.0), (3.0, 2.2), (3.0, 0.0), (1.5, -0.8)],
            ..base
        }),
        "fig31" => Some(PortraitSpec {
            beta: -1.0,
            c: 1.0,
            rho_range: (0.0, 3.0),
            d_range: (-2.0, 2.0),
            seeds: vec![(0.9, 0.0), (1.5, 0.5), (0.3, -0.3), (2.5, 0.0)],
            ..base
        }),
        "fig32" => Some(PortraitSpec {
            beta: 0.25,
            c: 1.0,
            rho_range: (0.0, 8.0),
            seeds: vec![(2.0, 0.0), (4.0, 0.4), (1.0, 0.5), (3.0, -1.5), (0.3, 0.0)],
            integrator: IntegratorConfig { t_end: 30.0, ..IntegratorConfig::default() },
            ..base
        }),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PortraitParams {
    pub beta: f64,
    pub k: f64,
    pub c: f64,
    pub rho_range: [f64; 2],
    pub d_range: [f64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryRecord {
    pub seed: [f64; 2],
    /// Rows of [t, rho, d].
    pub samples: Vec<[f64; 3]>,
    pub outcome: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PortraitData {
    pub params: PortraitParams,
    pub nullcline: Vec<NullclinePoint>,
    /// None in regimes without a separatrix.
    pub separatrix: Option<Vec<SeparatrixPoint>>,
    pub critical_points: CriticalPoints,
    pub trajectories: Vec<TrajectoryRecord>,
}

#[derive(Debug, Clone)]
pub struct PortraitSpec {
    pub beta: f64,
    pub k: f64,
    pub c: f64,
    pub rho_range: (f64, f64),
    pub d_range: (f64, f64),
    /// Number of density samples along the curves.
    pub resolution: usize,
    /// (rho0, d0) seeds for sample trajectories.
    pub seeds: Vec<(f64, f64)>,
    pub integrator: IntegratorConfig,
}

/// Assemble the full phase-plane picture for one parameter set.
pub fn render_portrait(spec: &PortraitSpec) -> Result<PortraitData> {
    if spec.resolution < 2 {
        return Err(Error::InvalidConfig(format!(
            "portrait resolution must be at least 2, got {}",
            spec.resolution
        )));
    }
    let (rho_lo, rho_hi) = spec.rho_range;
    if !(rho_lo < rho_hi) || !(spec.d_range.0 < spec.d_range.1) {
        return Err(Error::InvalidConfig("portrait ranges must be nonempty".into()));
    }
    let n = spec.resolution;
    let rho_grid: Vec<f64> =
        (0..n).map(|i| rho_lo + (rho_hi - rho_lo) * i as f64 / (n - 1) as f64).collect();

    let mut trajectories = Vec::with_capacity(spec.seeds.len());
    for &(rho0, d0) in &spec.seeds {
        let gamma0 = spec.beta * rho0 * rho0;
        let config = InitialConfig::new(rho0, d0, gamma0, spec.k, spec.c)?;
        let sim = integrate_reduced(&config, &spec.integrator)?;
        trajectories.push(TrajectoryRecord {
            seed: [rho0, d0],
            samples: sim.samples.iter().map(|&(t, s)| [t, s.rho, s.d]).collect(),
            outcome: sim.outcome.summary(),
        });
    }

    Ok(PortraitData {
        params: PortraitParams {
            beta: spec.beta,
            k: spec.k,
            c: spec.c,
            rho_range: [rho_lo, rho_hi],
            d_range: [spec.d_range.0, spec.d_range.1],
        },
        nullcline: nullcline(spec.beta, spec.k, spec.c, &rho_grid),
        separatrix: separatrix(spec.beta, spec.k, spec.c, &rho_grid).ok(),
        critical_points: critical_points(spec.beta, spec.k, spec.c),
        trajectories,
    })
}

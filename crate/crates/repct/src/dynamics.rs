//! Time integration of the velocity-gradient dynamics along particle paths.
//!
//! Two formulations are provided. The full system evolves the 2x2 gradient
//! tensor M and the density together,
//!
//!   M' = -M^2 + (k/2)(rho - c) I,    rho' = -rho tr M,
//!
//! and the reduced system evolves only (rho, d) with d = tr M,
//!
//!   rho' = -rho d,    d' = k(rho - c) - (d^2 + beta rho^2)/2,
//!
//! where beta = Gamma0 / rho0^2 is fixed by the initial data. The reduction
//! is exact because the spectral gap scales as rho^2 along the flow, which
//! is also what the cross-check tests in `verify` exercise.
//!
//! Breakdown is detected as a threshold crossing in magnitude and reported
//! as a bracketed time. On the vacuum set with zero background the solution
//! is explicit and is used directly instead of the integrator.

use crate::error::{Error, Result};
use crate::rk45::{self, DriveEnd, StepControl};
use crate::spectral::{beta_of, Beta, GradientTensor, InitialConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangianState {
    pub rho: f64,
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullState {
    pub m: GradientTensor,
    pub rho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub t_end: f64,
    /// Magnitude at which a component counts as blown up.
    pub blowup_threshold: f64,
    pub max_steps: u64,
    /// Spacing of output samples.
    pub sample_interval: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-6,
            abs_tol: 1e-9,
            t_end: 50.0,
            blowup_threshold: 1e8,
            max_steps: 1_000_000,
            sample_interval: 0.1,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            (self.rel_tol, "rel_tol"),
            (self.abs_tol, "abs_tol"),
            (self.t_end, "t_end"),
            (self.blowup_threshold, "blowup_threshold"),
            (self.sample_interval, "sample_interval"),
        ];
        for (value, name) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidConfig("max_steps must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    /// No breakdown was observed up to the given time. This is the requested
    /// horizon unless the step budget ran out first; see
    /// `Diagnostics::hit_max_steps`.
    GlobalUpTo(f64),
    /// Breakdown bracketed at t_star with the given half-width.
    Breakdown { t_star: f64, half_width: f64 },
}

impl Outcome {
    pub fn is_breakdown(&self) -> bool {
        matches!(self, Outcome::Breakdown { .. })
    }

    pub fn breakdown_time(&self) -> Option<f64> {
        match self {
            Outcome::Breakdown { t_star, .. } => Some(*t_star),
            Outcome::GlobalUpTo(_) => None,
        }
    }

    pub fn summary(&self) -> String {
        match self {
            Outcome::GlobalUpTo(t) => format!("GLOBAL T={t}"),
            Outcome::Breakdown { t_star, half_width } => {
                format!("BREAKDOWN t*={t_star:.9} ±{half_width:.1e}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub max_abs_d: f64,
    pub max_rho: f64,
    /// Largest deviation of the conserved quantity across output samples,
    /// when it is defined (positive initial density) and samples exist.
    pub invariant_drift: Option<f64>,
    pub steps: u64,
    pub hit_max_steps: bool,
}

#[derive(Debug, Clone)]
pub struct SimOutcome<S> {
    pub outcome: Outcome,
    pub samples: Vec<(f64, S)>,
    pub diagnostics: Diagnostics,
}

/// Right-hand side of the reduced system.
pub fn rhs_reduced(rho: f64, d: f64, beta: f64, k: f64, c: f64) -> (f64, f64) {
    (-rho * d, k * (rho - c) - 0.5 * (d * d + beta * rho * rho))
}

/// Right-hand side of the full system; returns (M', rho').
pub fn rhs_full(m: &GradientTensor, rho: f64, k: f64, c: f64) -> (GradientTensor, f64) {
    let forcing = 0.5 * k * (rho - c);
    let tr = m.m11 + m.m22;
    (
        GradientTensor {
            m11: -(m.m11 * m.m11 + m.m12 * m.m21) + forcing,
            m12: -m.m12 * tr,
            m21: -m.m21 * tr,
            m22: -(m.m21 * m.m12 + m.m22 * m.m22) + forcing,
        },
        -rho * tr,
    )
}

/// Conserved quantity of the reduced flow at positive density:
///
///   I(rho, d) = (d^2 + 2ck)/rho - beta rho + 2k ln rho.
pub fn invariant_value(rho: f64, d: f64, beta: f64, k: f64, c: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("invariant requires rho > 0, got {rho}")));
    }
    Ok((d * d + 2.0 * c * k) / rho - beta * rho + 2.0 * k * rho.ln())
}

/// The conserved quantity shifted to the reference level 2k ln(2c). For
/// nonpositive spectral gap (beta <= 0) this is nonnegative on the whole
/// half plane rho > 0, which is what confines those trajectories.
pub fn v_lyapunov(rho: f64, d: f64, beta: f64, k: f64, c: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!("the shifted level requires c > 0, got {c}")));
    }
    Ok(invariant_value(rho, d, beta, k, c)? - 2.0 * k * (2.0 * c).ln())
}

/// Divergence along a vacuum particle path (rho identically zero), where
/// d' = -ck - d^2/2 in closed form. Errors past the pole.
pub fn vacuum_solution(d0: f64, k: f64, c: f64, t: f64) -> Result<f64> {
    if !(k > 0.0) || c < 0.0 {
        return Err(Error::Domain(format!("vacuum solution requires k > 0, c >= 0, got k = {k}, c = {c}")));
    }
    if c == 0.0 {
        let denom = 1.0 + 0.5 * d0 * t;
        if denom <= 0.0 {
            return Err(Error::Domain(format!("vacuum solution past the pole at t = {}", -2.0 / d0)));
        }
        return Ok(d0 / denom);
    }
    let a = (2.0 * c * k).sqrt();
    let phase = (d0 / a).atan() - 0.5 * a * t;
    if phase <= -std::f64::consts::FRAC_PI_2 {
        return Err(Error::Domain(format!(
            "vacuum solution past the pole at t = {}",
            vacuum_breakdown_time(d0, k, c).unwrap()
        )));
    }
    Ok(a * phase.tan())
}

/// Pole time of the vacuum divergence, None when it stays finite forever
/// (zero background with nonnegative initial divergence).
pub fn vacuum_breakdown_time(d0: f64, k: f64, c: f64) -> Option<f64> {
    if c == 0.0 {
        return (d0 < 0.0).then(|| -2.0 / d0);
    }
    let a = (2.0 * c * k).sqrt();
    Some(2.0 / a * ((d0 / a).atan() + std::f64::consts::FRAC_PI_2))
}

fn step_control(ic: &IntegratorConfig) -> StepControl {
    StepControl {
        rel_tol: ic.rel_tol,
        abs_tol: ic.abs_tol,
        blowup_threshold: ic.blowup_threshold,
        max_steps: ic.max_steps,
    }
}

fn map_end(end: DriveEnd, t_end: f64) -> (Outcome, bool) {
    match end {
        DriveEnd::ReachedEnd => (Outcome::GlobalUpTo(t_end), false),
        DriveEnd::Blowup { t_lo, t_hi } => (
            Outcome::Breakdown { t_star: 0.5 * (t_lo + t_hi), half_width: 0.5 * (t_hi - t_lo) },
            false,
        ),
        DriveEnd::MaxSteps { t } => (Outcome::GlobalUpTo(t), true),
    }
}

/// Integrate the reduced system from the given initial data.
pub fn integrate_reduced(
    config: &InitialConfig,
    ic: &IntegratorConfig,
) -> Result<SimOutcome<LagrangianState>> {
    integrate_reduced_impl(config, ic, Some(ic.sample_interval))
}

/// Same drive without output samples, for callers that only need the
/// outcome. Skipping dense output keeps threshold bisection cheap.
pub(crate) fn integrate_reduced_sparse(
    config: &InitialConfig,
    ic: &IntegratorConfig,
) -> Result<SimOutcome<LagrangianState>> {
    integrate_reduced_impl(config, ic, None)
}

fn integrate_reduced_impl(
    config: &InitialConfig,
    ic: &IntegratorConfig,
    cadence: Option<f64>,
) -> Result<SimOutcome<LagrangianState>> {
    ic.validate()?;
    let beta = beta_of(config);
    if matches!(beta, Beta::Vacuum) && config.c == 0.0 {
        return Ok(vacuum_zero_background(config, ic, cadence));
    }
    // on the vacuum set beta never enters the right-hand side, so any
    // placeholder works for c > 0 vacuum data
    let beta_val = beta.value().unwrap_or(0.0);
    let (k, c) = (config.k, config.c);
    let drive = rk45::drive(
        move |_t, y: &[f64; 2]| {
            let (drho, dd) = rhs_reduced(y[0], y[1], beta_val, k, c);
            [drho, dd]
        },
        [config.rho0, config.d0],
        ic.t_end,
        cadence,
        &step_control(ic),
        Some(0),
    )?;
    let (outcome, hit_max_steps) = map_end(drive.end, ic.t_end);
    let samples: Vec<(f64, LagrangianState)> = drive
        .samples
        .iter()
        .map(|&(t, y)| (t, LagrangianState { rho: y[0], d: y[1] }))
        .collect();
    let invariant_drift = match beta {
        Beta::Real(b) => drift_over(samples.iter().map(|&(_, s)| (s.rho, s.d)), config, b),
        Beta::Vacuum => None,
    };
    Ok(SimOutcome {
        outcome,
        samples,
        diagnostics: Diagnostics {
            max_abs_d: drive.max_abs[1],
            max_rho: drive.max_abs[0],
            invariant_drift,
            steps: drive.steps,
            hit_max_steps,
        },
    })
}

/// Integrate the full tensor system from a gradient tensor and density.
pub fn integrate_full(
    m0: &GradientTensor,
    rho0: f64,
    k: f64,
    c: f64,
    ic: &IntegratorConfig,
) -> Result<SimOutcome<FullState>> {
    ic.validate()?;
    let config = InitialConfig::from_tensor(m0, rho0, k, c)?;
    let drive = rk45::drive(
        move |_t, y: &[f64; 5]| {
            let m = GradientTensor { m11: y[0], m12: y[1], m21: y[2], m22: y[3] };
            let (dm, drho) = rhs_full(&m, y[4], k, c);
            [dm.m11, dm.m12, dm.m21, dm.m22, drho]
        },
        [m0.m11, m0.m12, m0.m21, m0.m22, rho0],
        ic.t_end,
        Some(ic.sample_interval),
        &step_control(ic),
        Some(4),
    )?;
    let (outcome, hit_max_steps) = map_end(drive.end, ic.t_end);
    let samples: Vec<(f64, FullState)> = drive
        .samples
        .iter()
        .map(|&(t, y)| {
            (t, FullState { m: GradientTensor { m11: y[0], m12: y[1], m21: y[2], m22: y[3] }, rho: y[4] })
        })
        .collect();
    let invariant_drift = match beta_of(&config) {
        Beta::Real(b) => {
            drift_over(samples.iter().map(|&(_, s)| (s.rho, s.m.trace())), &config, b)
        }
        Beta::Vacuum => None,
    };
    // the trace is not a raw component of the drive, so its peak is taken
    // over the output samples
    let max_abs_d = samples
        .iter()
        .map(|&(_, s)| s.m.trace().abs())
        .fold(config.d0.abs(), f64::max);
    Ok(SimOutcome {
        outcome,
        samples,
        diagnostics: Diagnostics {
            max_abs_d,
            max_rho: drive.max_abs[4],
            invariant_drift,
            steps: drive.steps,
            hit_max_steps,
        },
    })
}

fn drift_over(
    states: impl Iterator<Item = (f64, f64)>,
    config: &InitialConfig,
    beta: f64,
) -> Option<f64> {
    let reference = invariant_value(config.rho0, config.d0, beta, config.k, config.c).ok()?;
    let mut drift: Option<f64> = None;
    for (rho, d) in states {
        if let Ok(value) = invariant_value(rho, d, beta, config.k, config.c) {
            if value.is_finite() {
                let dev = (value - reference).abs();
                drift = Some(drift.map_or(dev, |m| m.max(dev)));
            }
        }
    }
    drift
}

fn vacuum_zero_background(
    config: &InitialConfig,
    ic: &IntegratorConfig,
    cadence: Option<f64>,
) -> SimOutcome<LagrangianState> {
    let d0 = config.d0;
    // |d(t)| reaches the blow-up threshold shortly before the pole
    let t_threshold = if d0 < 0.0 && d0.abs() < ic.blowup_threshold {
        Some(-2.0 / d0 - 2.0 / ic.blowup_threshold)
    } else if d0.abs() >= ic.blowup_threshold {
        Some(0.0)
    } else {
        None
    };
    let (outcome, t_final) = match t_threshold {
        Some(t) if t <= ic.t_end => {
            let half_width = 1.0 / ic.blowup_threshold;
            (Outcome::Breakdown { t_star: t + half_width, half_width }, t)
        }
        _ => (Outcome::GlobalUpTo(ic.t_end), ic.t_end),
    };
    let at = |t: f64| d0 / (1.0 + 0.5 * d0 * t);
    let mut samples = Vec::new();
    if let Some(dt) = cadence {
        let mut i = 0u64;
        loop {
            let t = i as f64 * dt;
            if t > t_final {
                break;
            }
            samples.push((t, LagrangianState { rho: 0.0, d: at(t) }));
            i += 1;
        }
        if samples.last().is_none_or(|s| s.0 < t_final) {
            samples.push((t_final, LagrangianState { rho: 0.0, d: at(t_final) }));
        }
    }
    let max_abs_d = d0.abs().max(at(t_final).abs());
    SimOutcome {
        outcome,
        samples,
        diagnostics: Diagnostics {
            max_abs_d,
            max_rho: 0.0,
            invariant_drift: None,
            steps: 0,
            hit_max_steps: false,
        },
    }
}

fn push_csv_value(out: &mut String, value: f64) {
    use std::fmt::Write;
    write!(out, ",{value:.16e}").unwrap();
}

/// CSV rendering of a reduced trajectory: `t,rho,d` with full-precision
/// scientific notation.
pub fn reduced_trajectory_csv(samples: &[(f64, LagrangianState)]) -> String {
    let mut out = String::from("t,rho,d\n");
    for &(t, s) in samples {
        let mut row = format!("{t:.16e}");
        push_csv_value(&mut row, s.rho);
        push_csv_value(&mut row, s.d);
        row.push('\n');
        out.push_str(&row);
    }
    out
}

/// CSV rendering of a full trajectory: `t,rho,d,m11,m12,m21,m22`.
pub fn full_trajectory_csv(samples: &[(f64, FullState)]) -> String {
    let mut out = String::from("t,rho,d,m11,m12,m21,m22\n");
    for &(t, s) in samples {
        let mut row = format!("{t:.16e}");
        push_csv_value(&mut row, s.rho);
        push_csv_value(&mut row, s.m.trace());
        push_csv_value(&mut row, s.m.m11);
        push_csv_value(&mut row, s.m.m12);
        push_csv_value(&mut row, s.m.m21);
        push_csv_value(&mut row, s.m.m22);
        row.push('\n');
        out.push_str(&row);
    }
    out
}

//! Adaptive Dormand-Prince 4(5) driver.
//!
//! This is the one place the crate integrates ODEs. The driver is generic
//! over the state dimension, detects finite-time blow-up by magnitude
//! threshold, and localizes the blow-up time to a tight bracket by bisecting
//! with single trial steps inside the last accepted interval. Output samples
//! on a fixed cadence are produced by cubic Hermite interpolation from the
//! step endpoints, so no extra right-hand-side evaluations are spent on
//! dense output.

use crate::error::{Error, Result};

const A21: f64 = 0.2;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const C2: f64 = 0.2;
const C3: f64 = 0.3;
const C4: f64 = 0.8;
const C5: f64 = 8.0 / 9.0;
// fifth-order weights; the first same-as-last stage makes these also the
// seventh stage position
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// difference between the fifth- and fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Width below which the blow-up bracket is not refined further.
const BLOWUP_BRACKET_WIDTH: f64 = 1e-9;

/// The minimum step is this fraction of the requested horizon; dropping
/// below it aborts the drive as a step failure.
const MIN_STEP_FRACTION: f64 = 1e-14;

#[derive(Debug, Clone, Copy)]
pub(crate) struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub blowup_threshold: f64,
    pub max_steps: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum DriveEnd {
    /// Integrated to the requested horizon.
    ReachedEnd,
    /// Some component crossed the blow-up threshold inside (t_lo, t_hi].
    Blowup { t_lo: f64, t_hi: f64 },
    /// Step budget exhausted at time t with the solution still finite.
    MaxSteps { t: f64 },
}

#[derive(Debug, Clone)]
pub(crate) struct Drive<const N: usize> {
    pub end: DriveEnd,
    /// Cadence samples (t, y), present when a cadence was requested. The
    /// final row is the last computed state: the horizon, the stopping time,
    /// or the lower edge of the blow-up bracket.
    pub samples: Vec<(f64, [f64; N])>,
    /// Componentwise maximum magnitude over all accepted states.
    pub max_abs: [f64; N],
    /// Accepted steps.
    pub steps: u64,
}

struct DpStep<const N: usize> {
    y_new: [f64; N],
    f_new: [f64; N],
    /// Weighted rms error estimate; <= 1 means the step passes the tolerance.
    err: f64,
}

fn dp_step<const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]>(
    rhs: &F,
    t: f64,
    y: &[f64; N],
    f1: &[f64; N],
    h: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> DpStep<N> {
    let mut stage = [0.0; N];

    for i in 0..N {
        stage[i] = y[i] + h * A21 * f1[i];
    }
    let k2 = rhs(t + C2 * h, &stage);
    for i in 0..N {
        stage[i] = y[i] + h * (A31 * f1[i] + A32 * k2[i]);
    }
    let k3 = rhs(t + C3 * h, &stage);
    for i in 0..N {
        stage[i] = y[i] + h * (A41 * f1[i] + A42 * k2[i] + A43 * k3[i]);
    }
    let k4 = rhs(t + C4 * h, &stage);
    for i in 0..N {
        stage[i] = y[i] + h * (A51 * f1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
    }
    let k5 = rhs(t + C5 * h, &stage);
    for i in 0..N {
        stage[i] =
            y[i] + h * (A61 * f1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
    }
    let k6 = rhs(t + h, &stage);

    let mut y_new = [0.0; N];
    for i in 0..N {
        y_new[i] =
            y[i] + h * (B1 * f1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
    }
    let f_new = rhs(t + h, &y_new);

    let mut acc = 0.0;
    for i in 0..N {
        let e = h
            * (E1 * f1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                + E7 * f_new[i]);
        let sc = abs_tol + rel_tol * y[i].abs().max(y_new[i].abs());
        acc += (e / sc) * (e / sc);
    }
    DpStep { y_new, f_new, err: (acc / N as f64).sqrt() }
}

fn cubic_hermite<const N: usize>(
    theta: f64,
    h: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    y1: &[f64; N],
    f1: &[f64; N],
) -> [f64; N] {
    let t2 = theta * theta;
    let t3 = t2 * theta;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + theta;
    let h01 = 3.0 * t2 - 2.0 * t3;
    let h11 = t3 - t2;
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
    }
    out
}

fn exceeds<const N: usize>(y: &[f64; N], threshold: f64) -> bool {
    y.iter().any(|v| !v.is_finite() || v.abs() > threshold)
}

/// Integrate y' = rhs(t, y) from y(0) = y0 up to t_end.
///
/// `cadence` requests evenly spaced output samples. `nonneg_index` marks a
/// component that must stay nonnegative; a step that would take it below
/// zero is rejected and retried at half the size, so a trajectory whose
/// marked component genuinely crosses zero ends in a step failure rather
/// than a sign flip.
pub(crate) fn drive<const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]>(
    rhs: F,
    y0: [f64; N],
    t_end: f64,
    cadence: Option<f64>,
    ctrl: &StepControl,
    nonneg_index: Option<usize>,
) -> Result<Drive<N>> {
    debug_assert!(t_end > 0.0 && ctrl.rel_tol > 0.0 && ctrl.abs_tol > 0.0);
    let h_min = MIN_STEP_FRACTION * t_end;

    let mut samples = Vec::new();
    let mut next_idx: u64 = 0;
    if let Some(dt) = cadence {
        debug_assert!(dt > 0.0);
        samples.push((0.0, y0));
        next_idx = 1;
    }

    let mut max_abs = y0.map(f64::abs);
    if exceeds(&y0, ctrl.blowup_threshold) {
        return Ok(Drive {
            end: DriveEnd::Blowup { t_lo: 0.0, t_hi: 0.0 },
            samples,
            max_abs,
            steps: 0,
        });
    }

    let mut t = 0.0;
    let mut y = y0;
    let mut f = rhs(0.0, &y);
    let mut steps: u64 = 0;

    // conservative first step from the magnitudes of the state and its slope
    let mut h = {
        let mut d0: f64 = 0.0;
        let mut d1: f64 = 0.0;
        for i in 0..N {
            let sc = ctrl.abs_tol + ctrl.rel_tol * y[i].abs();
            d0 = d0.max((y[i] / sc).abs());
            d1 = d1.max((f[i] / sc).abs());
        }
        let guess = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        guess.min(t_end)
    };

    loop {
        let remaining = t_end - t;
        if remaining <= 1e-12 * t_end {
            if samples.last().map_or(cadence.is_some(), |s| s.0 < t_end * (1.0 - 1e-12)) {
                samples.push((t_end, y));
            }
            return Ok(Drive { end: DriveEnd::ReachedEnd, samples, max_abs, steps });
        }
        if steps >= ctrl.max_steps {
            if samples.last().map_or(cadence.is_some(), |s| s.0 < t) {
                samples.push((t, y));
            }
            return Ok(Drive { end: DriveEnd::MaxSteps { t }, samples, max_abs, steps });
        }
        if h < h_min {
            return Err(Error::StepFailure { t, h });
        }
        h = h.min(remaining);

        let attempt = dp_step(&rhs, t, &y, &f, h, ctrl.rel_tol, ctrl.abs_tol);

        if !attempt.err.is_finite() {
            h *= 0.2;
            continue;
        }
        if attempt.err > 1.0 {
            h *= (0.9 * attempt.err.powf(-0.2)).max(0.2);
            continue;
        }
        if let Some(idx) = nonneg_index {
            if attempt.y_new[idx] < 0.0 {
                h *= 0.5;
                continue;
            }
        }

        if exceeds(&attempt.y_new, ctrl.blowup_threshold) {
            // bracket the first threshold crossing inside [t, t + h] with
            // single trial steps from the accepted left state
            let mut lo = 0.0;
            let mut hi = h;
            let mut lo_state = y;
            while hi - lo > BLOWUP_BRACKET_WIDTH {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let trial = dp_step(&rhs, t, &y, &f, mid, ctrl.rel_tol, ctrl.abs_tol);
                if exceeds(&trial.y_new, ctrl.blowup_threshold) {
                    hi = mid;
                } else {
                    lo = mid;
                    lo_state = trial.y_new;
                }
            }
            for i in 0..N {
                max_abs[i] = max_abs[i].max(lo_state[i].abs());
            }
            if cadence.is_some() && samples.last().is_none_or(|s| s.0 < t + lo) {
                samples.push((t + lo, lo_state));
            }
            return Ok(Drive {
                end: DriveEnd::Blowup { t_lo: t + lo, t_hi: t + hi },
                samples,
                max_abs,
                steps,
            });
        }

        if let Some(dt) = cadence {
            let t_new = t + h;
            loop {
                let ts = next_idx as f64 * dt;
                if ts > t_new + 1e-12 * t_new.max(1.0) {
                    break;
                }
                let theta = ((ts - t) / h).clamp(0.0, 1.0);
                samples.push((ts, cubic_hermite(theta, h, &y, &f, &attempt.y_new, &attempt.f_new)));
                next_idx += 1;
            }
        }

        t += h;
        y = attempt.y_new;
        f = attempt.f_new;
        steps += 1;
        for i in 0..N {
            max_abs[i] = max_abs[i].max(y[i].abs());
        }
        let scale =
            if attempt.err == 0.0 { 5.0 } else { (0.9 * attempt.err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= scale;
    }
}

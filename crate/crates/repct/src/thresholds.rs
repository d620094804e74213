//! Threshold surfaces and region classification for the reduced phase plane.
//!
//! The reduced dynamics in (rho, d) is integrable, and the boundary between
//! global existence and finite-time breakdown is an explicit curve in the
//! initial data. For zero background (c = 0) a single signed curve
//! g(rho, Gamma) does the job. For c > 0 the geometry is organized by the
//! rest points of the reduced system: a center/saddle pair for
//! 0 < beta < k/(2c), a single degenerate point at rho = 2c for
//! beta = k/(2c), and no rest point at all above that, where every
//! trajectory breaks down.
//!
//! Region names follow the usual convention for this system:
//! S1 (nonpositive gap, unconditionally smooth for positive density),
//! S2 (positive gap, divergence on the admissible side of g or g1),
//! S3 (the measure-zero curve d = g2(rho) in the degenerate regime).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::InitialConfig;

/// Relative tolerance used to snap measure-zero equality conditions: the S3
/// curve membership tests and the degenerate parameter beta = k/(2c).
/// Exact hits only occur by construction, so this is deliberately tight.
pub const EPSILON_REGION: f64 = 1e-9;

/// Absolute slack under which a threshold radicand is treated as a rounding
/// artifact of zero rather than a domain violation.
const RADICAND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    S1,
    S2,
    S3,
    Supercritical,
}

/// Classification outcome.
///
/// `margin` is a signed distance to the active threshold surface in d-units
/// (positive means inside the global-existence region). It is +inf in the
/// interior of S1 where no surface applies, and -inf where breakdown holds
/// for every divergence so no finite surface exists. `surface_value` is the
/// threshold curve evaluated at the query point, when one applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionVerdict {
    pub region: Region,
    pub margin: f64,
    pub surface_value: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CriticalPointKind {
    /// Center at rho1*, saddle at rho2* (c > 0 with 0 < beta < k/(2c)).
    /// For beta <= 0 only the right-branch rest point exists; it is reported
    /// in `rho2_star` and `rho1_star` stays empty.
    TwoPoints,
    /// beta = k/(2c): the rest points merge at rho = 2c.
    Degenerate,
    /// beta > k/(2c): no rest point at positive density.
    None,
    /// c = 0 with beta > 0: saddle at rho = 2k/beta.
    SingleZeroBackground,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoints {
    pub kind: CriticalPointKind,
    pub rho1_star: Option<f64>,
    pub rho2_star: Option<f64>,
}

/// Which rule gates the one-sided branch of the c > 0 classification.
///
/// Two natural forms of the S2 condition disagree away from the
/// central density interval: one switches to the one-sided acceptance
/// `d >= g1` as soon as Gamma >= 2k(rho - c), the other keeps the two-sided
/// interval `|d| <= g1` for all rho0 up to the saddle density rho2* and
/// admits only the exact stable curve beyond it. `GammaGate` is the default;
/// `SaddleGate` is the phase-plane variant. The empirical bisection harness
/// in `experiments` is the arbiter between them; the two are intentionally
/// not reconciled here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchRule {
    #[default]
    GammaGate,
    SaddleGate,
}

fn rel_close(a: f64, b: f64, eps: f64) -> bool {
    (a - b).abs() <= eps * a.abs().max(b.abs())
}

/// F(rho) = beta rho - 2k ln rho, the convex potential whose level sets
/// carry the zero-background trajectories via d^2 = rho (const + F(rho)).
/// For beta > 0 its minimum sits at rho = 2k/beta.
pub fn potential_f(rho: f64, beta: f64, k: f64) -> Result<f64> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!("potential_f requires rho > 0, got {rho}")));
    }
    Ok(beta * rho - 2.0 * k * rho.ln())
}

/// Level offset of the conserved quantity relative to the rest point
/// (rho_star, 0):
///
///   G(rho, rho_star, beta) = beta (rho - rho_star) - 2k ln(rho/rho_star)
///                            - 2ck/rho + 2ck/rho_star.
///
/// The saddle separatrix of the c > 0 system is d^2 = rho G(rho, rho2*, beta).
pub fn level_offset_g(rho: f64, rho_star: f64, beta: f64, k: f64, c: f64) -> Result<f64> {
    if !(rho > 0.0) || !(rho_star > 0.0) {
        return Err(Error::Domain(format!(
            "level_offset_g requires positive densities, got rho = {rho}, rho_star = {rho_star}"
        )));
    }
    Ok(beta * (rho - rho_star) - 2.0 * k * (rho / rho_star).ln() - 2.0 * c * k / rho
        + 2.0 * c * k / rho_star)
}

/// Critical threshold for c = 0, the signed curve
///
///   g(rho, Gamma) = sgn(Gamma - 2k rho) sqrt(Gamma - 2k rho + 2k rho ln(2k rho / Gamma)).
///
/// The radicand is nonnegative for every rho, Gamma > 0 (it is
/// rho (F(rho) - min F) for beta = Gamma/rho^2); rounding can leave a tiny
/// negative residue near Gamma = 2k rho, which is clamped to zero.
pub fn g_zero_background(rho: f64, gamma: f64, k: f64) -> Result<f64> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!("g requires rho > 0, got {rho}")));
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("g requires Gamma > 0, got {gamma}")));
    }
    if !(k > 0.0) {
        return Err(Error::Domain(format!("g requires k > 0, got {k}")));
    }
    let two_k_rho = 2.0 * k * rho;
    let radicand = gamma - two_k_rho + two_k_rho * (two_k_rho / gamma).ln();
    debug_assert!(
        radicand >= -RADICAND_SLACK * gamma.max(two_k_rho).max(1.0),
        "g radicand must be nonnegative up to rounding, got {radicand}"
    );
    let root = radicand.max(0.0).sqrt();
    if gamma > two_k_rho {
        Ok(root)
    } else if gamma < two_k_rho {
        Ok(-root)
    } else {
        Ok(0.0)
    }
}

/// Threshold curve for c > 0 in the band 0 < Gamma < (k/2c) rho^2:
///
///   g1(rho, Gamma) = sqrt(Gamma - 2k [c + s + rho ln((rho - s)/(2c))]),
///   s = sqrt(rho^2 - 2c Gamma / k).
///
/// `rho - s` is evaluated as (2c Gamma/k)/(rho + s) to avoid cancellation at
/// small Gamma. The outer radicand equals rho G(rho, rho2*, Gamma/rho^2) and
/// turns negative left of the homoclinic loop, where no divergence is
/// admissible; that case is reported as a domain error.
pub fn g1_nonzero_background(rho: f64, gamma: f64, k: f64, c: f64) -> Result<f64> {
    if !(rho > 0.0) || !(k > 0.0) || !(c > 0.0) {
        return Err(Error::Domain(format!(
            "g1 requires rho, k, c > 0, got rho = {rho}, k = {k}, c = {c}"
        )));
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("g1 requires Gamma > 0, got {gamma}")));
    }
    let inner = rho * rho - 2.0 * c * gamma / k;
    if inner <= 0.0 {
        return Err(Error::Domain(format!(
            "g1 requires Gamma < (k/2c) rho^2, got Gamma = {gamma} at rho = {rho}"
        )));
    }
    let s = inner.sqrt();
    // (rho - s)/(2c) rationalized through rho^2 - s^2 = 2c Gamma / k
    let log_arg = gamma / (k * (rho + s));
    let radicand = gamma - 2.0 * k * (c + s + rho * log_arg.ln());
    if radicand < -RADICAND_SLACK {
        return Err(Error::Domain(format!(
            "no admissible divergence at rho = {rho}, Gamma = {gamma}: threshold radicand = {radicand}"
        )));
    }
    Ok(radicand.max(0.0).sqrt())
}

/// Curve of the degenerate regime beta = k/(2c), defined for rho >= 2c:
///
///   g2(rho) = sqrt(-2ck + (k/2c) rho^2 + 2k rho ln(2c/rho)).
///
/// The radicand has a triple root at rho = 2c and is negative below it; a
/// residue in [-1e-12, 0) is clamped to zero, anything lower is a domain
/// error.
pub fn g2_nonzero_background(rho: f64, k: f64, c: f64) -> Result<f64> {
    if !(rho > 0.0) || !(k > 0.0) || !(c > 0.0) {
        return Err(Error::Domain(format!(
            "g2 requires rho, k, c > 0, got rho = {rho}, k = {k}, c = {c}"
        )));
    }
    let radicand = -2.0 * c * k + 0.5 * k / c * rho * rho + 2.0 * k * rho * (2.0 * c / rho).ln();
    if radicand < -RADICAND_SLACK {
        return Err(Error::Domain(format!(
            "g2 is defined for rho >= 2c, got rho = {rho} with 2c = {}",
            2.0 * c
        )));
    }
    Ok(radicand.max(0.0).sqrt())
}

/// Rest points of the reduced system, the solutions of 2k(rho - c) = beta rho^2
/// at positive density.
///
/// The left root is computed in the rationalized form 2ck/(k + sqrt(k^2 - 2ckb))
/// which stays accurate for small |beta| and covers beta <= 0 (where it is the
/// only positive root) including beta = 0 seamlessly.
pub fn critical_points(beta: f64, k: f64, c: f64) -> CriticalPoints {
    assert!(k > 0.0 && c >= 0.0, "critical_points requires k > 0 and c >= 0");
    if c == 0.0 {
        if beta > 0.0 {
            return CriticalPoints {
                kind: CriticalPointKind::SingleZeroBackground,
                rho1_star: None,
                rho2_star: Some(2.0 * k / beta),
            };
        }
        // beta <= 0 at zero background: no rest point at positive density
        return CriticalPoints { kind: CriticalPointKind::None, rho1_star: None, rho2_star: None };
    }

    let beta_star = 0.5 * k / c;
    if rel_close(beta, beta_star, EPSILON_REGION) {
        return CriticalPoints {
            kind: CriticalPointKind::Degenerate,
            rho1_star: Some(2.0 * c),
            rho2_star: Some(2.0 * c),
        };
    }
    if beta > beta_star {
        return CriticalPoints { kind: CriticalPointKind::None, rho1_star: None, rho2_star: None };
    }

    let discriminant_root = (k * k - 2.0 * c * k * beta).sqrt();
    let left = 2.0 * c * k / (k + discriminant_root);
    if beta > 0.0 {
        CriticalPoints {
            kind: CriticalPointKind::TwoPoints,
            rho1_star: Some(left),
            rho2_star: Some((k + discriminant_root) / beta),
        }
    } else {
        CriticalPoints {
            kind: CriticalPointKind::TwoPoints,
            rho1_star: None,
            rho2_star: Some(left),
        }
    }
}

/// Classify initial data for the zero-background model (c = 0).
///
/// S1 is Gamma0 <= 0 with any divergence at positive density (nonnegative
/// divergence on the vacuum set); S2 is Gamma0 > 0 at positive density with
/// d0 >= g(rho0, Gamma0), boundary included; everything else breaks down in
/// finite time.
pub fn classify_zero_background(config: &InitialConfig) -> Result<RegionVerdict> {
    if config.c != 0.0 {
        return Err(Error::InvalidConfig(format!(
            "zero-background classification requires c = 0, got c = {}",
            config.c
        )));
    }
    if config.gamma0 <= 0.0 {
        if config.rho0 > 0.0 {
            return Ok(RegionVerdict {
                region: Region::S1,
                margin: f64::INFINITY,
                surface_value: None,
            });
        }
        // vacuum: the threshold in d is the sign of d0 itself
        let region = if config.d0 >= 0.0 { Region::S1 } else { Region::Supercritical };
        return Ok(RegionVerdict { region, margin: config.d0, surface_value: None });
    }
    if config.rho0 == 0.0 {
        // positive gap on the vacuum set: outside both admissible regions
        return Ok(RegionVerdict {
            region: Region::Supercritical,
            margin: f64::NEG_INFINITY,
            surface_value: None,
        });
    }
    let g = g_zero_background(config.rho0, config.gamma0, config.k)?;
    let margin = config.d0 - g;
    let region = if margin >= 0.0 { Region::S2 } else { Region::Supercritical };
    Ok(RegionVerdict { region, margin, surface_value: Some(g) })
}

/// Classify initial data for c > 0 with the default branch rule.
pub fn classify_nonzero_background(config: &InitialConfig) -> Result<RegionVerdict> {
    classify_nonzero_background_with(config, BranchRule::default())
}

/// Classify initial data for c > 0.
///
/// S1 mirrors the zero-background case. For 0 < Gamma0 < (k/2c) rho0^2 the
/// admissible divergences are bounded by g1: two-sided |d0| <= g1 on the
/// central branch, one-sided d0 >= g1 on the branch selected by `rule` (see
/// `BranchRule` for the disagreement between the two gates). On the
/// degenerate parabola Gamma0 = (k/2c) rho0^2 (snapped within
/// `EPSILON_REGION`) only the curve d0 = g2(rho0), rho0 >= 2c survives;
/// above the parabola every datum breaks down.
pub fn classify_nonzero_background_with(
    config: &InitialConfig,
    rule: BranchRule,
) -> Result<RegionVerdict> {
    let (rho0, d0, gamma0, k, c) = (config.rho0, config.d0, config.gamma0, config.k, config.c);
    if c <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "nonzero-background classification requires c > 0, got c = {c}"
        )));
    }

    if gamma0 <= 0.0 {
        if rho0 > 0.0 {
            return Ok(RegionVerdict {
                region: Region::S1,
                margin: f64::INFINITY,
                surface_value: None,
            });
        }
        let region = if d0 >= 0.0 { Region::S1 } else { Region::Supercritical };
        return Ok(RegionVerdict { region, margin: d0, surface_value: None });
    }

    let degenerate_gamma = 0.5 * k / c * rho0 * rho0;
    if rel_close(gamma0, degenerate_gamma, EPSILON_REGION) {
        // on the degenerate parabola only the g2 curve survives, and only
        // for rho0 >= 2c; below 2c the curve has no real points so the
        // region is empty there
        return Ok(match g2_nonzero_background(rho0, k, c) {
            Ok(g2) => {
                let on_curve = rel_close(d0, g2, EPSILON_REGION);
                RegionVerdict {
                    region: if on_curve { Region::S3 } else { Region::Supercritical },
                    margin: -(d0 - g2).abs(),
                    surface_value: Some(g2),
                }
            }
            Err(_) => RegionVerdict {
                region: Region::Supercritical,
                margin: f64::NEG_INFINITY,
                surface_value: None,
            },
        });
    }
    if gamma0 > degenerate_gamma {
        // beta > k/(2c): no rest point, breakdown for every divergence
        return Ok(RegionVerdict {
            region: Region::Supercritical,
            margin: f64::NEG_INFINITY,
            surface_value: None,
        });
    }

    let g1 = match g1_nonzero_background(rho0, gamma0, k, c) {
        Ok(v) => v,
        // left of the homoclinic loop no divergence is admissible
        Err(Error::Domain(_)) => {
            return Ok(RegionVerdict {
                region: Region::Supercritical,
                margin: f64::NEG_INFINITY,
                surface_value: None,
            });
        }
        Err(e) => return Err(e),
    };

    let two_sided = match rule {
        BranchRule::GammaGate => gamma0 < 2.0 * k * (rho0 - c),
        BranchRule::SaddleGate => {
            let beta = gamma0 / (rho0 * rho0);
            let saddle = critical_points(beta, k, c)
                .rho2_star
                .expect("0 < beta < k/2c has a saddle");
            rho0 <= saddle
        }
    };

    let (region, margin) = if two_sided {
        let margin = g1 - d0.abs();
        (if margin >= 0.0 { Region::S2 } else { Region::Supercritical }, margin)
    } else {
        match rule {
            BranchRule::GammaGate => {
                let margin = d0 - g1;
                (if margin >= 0.0 { Region::S2 } else { Region::Supercritical }, margin)
            }
            // beyond the saddle only the stable curve d0 = g1 survives
            BranchRule::SaddleGate => {
                let on_curve = rel_close(d0, g1, EPSILON_REGION);
                (if on_curve { Region::S2 } else { Region::Supercritical }, -(d0 - g1).abs())
            }
        }
    };
    Ok(RegionVerdict { region, margin, surface_value: Some(g1) })
}

/// Classify against the surface family selected by the background density.
pub fn classify(config: &InitialConfig) -> Result<RegionVerdict> {
    if config.c == 0.0 {
        classify_zero_background(config)
    } else {
        classify_nonzero_background(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        let scale = a.abs().max(b.abs()).max(1.0);
        assert!((a - b).abs() <= tol * scale, "{a} vs {b} (tol {tol})");
    }

    fn cfg(rho0: f64, d0: f64, gamma0: f64, k: f64, c: f64) -> InitialConfig {
        InitialConfig::new(rho0, d0, gamma0, k, c).unwrap()
    }

    #[test]
    fn potential_f_frozen_value() {
        // F(2; beta=1, k=1) = 2 - 2 ln 2
        assert_close(potential_f(2.0, 1.0, 1.0).unwrap(), 0.6137056388801094, 1e-15);
        assert!(potential_f(0.0, 1.0, 1.0).is_err());
        assert!(potential_f(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn g_zero_background_frozen_values() {
        // sqrt(2 - 2 ln 2)
        assert_close(g_zero_background(1.0, 4.0, 1.0).unwrap(), 0.7833936678835931, 1e-15);
        // -sqrt(-3 + 8 ln 2)
        assert_close(g_zero_background(2.0, 1.0, 1.0).unwrap(), -1.5953612269575698, 1e-15);
    }

    #[test]
    fn g_zero_background_vanishes_exactly_on_the_sign_change_locus() {
        for rho in [0.17, 1.0, 2.5, 42.0] {
            for k in [0.3, 1.0, 7.0] {
                assert_eq!(g_zero_background(rho, 2.0 * k * rho, k).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn g_zero_background_domain() {
        assert!(g_zero_background(0.0, 1.0, 1.0).is_err());
        assert!(g_zero_background(1.0, 0.0, 1.0).is_err());
        assert!(g_zero_background(1.0, -4.0, 1.0).is_err());
    }

    #[test]
    fn g1_frozen_value_and_identity() {
        let g1 = g1_nonzero_background(4.0, 1.0, 1.0, 1.0).unwrap();
        assert_close(g1, 2.8088452440718866, 1e-14);
        // same number through the level-offset identity g1^2 = rho G
        let beta = 1.0 / 16.0;
        let saddle = critical_points(beta, 1.0, 1.0).rho2_star.unwrap();
        assert_close(saddle, 30.966629547095766, 1e-14);
        let rho_g = 4.0 * level_offset_g(4.0, saddle, beta, 1.0, 1.0).unwrap();
        assert_close(rho_g, 7.889611605145256, 1e-12);
        assert_close(g1 * g1, rho_g, 1e-12);
    }

    #[test]
    fn g1_vanishes_at_the_saddle_density() {
        // rho2* for beta = 0.25, k = c = 1, with Gamma = beta rho^2
        let rho2 = 6.82842712474619;
        let g1 = g1_nonzero_background(rho2, 0.25 * rho2 * rho2, 1.0, 1.0).unwrap();
        assert!(g1.abs() < 1e-6, "expected ~0 at the saddle, got {g1}");
    }

    #[test]
    fn g1_domain_errors() {
        // at or above the degenerate parabola Gamma = (k/2c) rho^2
        assert!(g1_nonzero_background(2.0, 2.0, 1.0, 1.0).is_err());
        assert!(g1_nonzero_background(2.0, 3.0, 1.0, 1.0).is_err());
        // left of the homoclinic loop (rho_hom ~ 0.515 for beta = 0.25)
        assert!(g1_nonzero_background(0.3, 0.25 * 0.09, 1.0, 1.0).is_err());
        // degenerate limit: just below the parabola the value is tiny
        let g1 = g1_nonzero_background(2.0, 2.0 * (1.0 - 1e-9), 1.0, 1.0).unwrap();
        assert!(g1 < 1e-3, "near-degenerate limit should approach 0, got {g1}");
    }

    #[test]
    fn g2_frozen_values_and_domain() {
        assert_close(g2_nonzero_background(3.0, 1.0, 1.0).unwrap(), 0.259247664118722, 1e-13);
        // triple root at rho = 2c evaluates to exactly zero
        assert_eq!(g2_nonzero_background(2.0, 1.0, 1.0).unwrap(), 0.0);
        assert!(g2_nonzero_background(1.0, 1.0, 1.0).is_err());
        assert!(g2_nonzero_background(3.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn critical_points_two_point_regime() {
        let pts = critical_points(0.25, 1.0, 1.0);
        assert_eq!(pts.kind, CriticalPointKind::TwoPoints);
        assert_close(pts.rho1_star.unwrap(), 1.17157287525381, 1e-14);
        assert_close(pts.rho2_star.unwrap(), 6.82842712474619, 1e-14);
        // residual of 2k(rho - c) - beta rho^2 at each root
        for rho in [pts.rho1_star.unwrap(), pts.rho2_star.unwrap()] {
            let residual = 2.0 * (rho - 1.0) - 0.25 * rho * rho;
            assert!(residual.abs() <= 1e-10 * (2.0 * (rho - 1.0)).abs().max(0.25 * rho * rho));
        }
    }

    #[test]
    fn critical_points_other_regimes() {
        let degenerate = critical_points(0.5, 1.0, 1.0);
        assert_eq!(degenerate.kind, CriticalPointKind::Degenerate);
        assert_eq!(degenerate.rho1_star, Some(2.0));
        assert_eq!(degenerate.rho2_star, Some(2.0));

        assert_eq!(critical_points(0.7, 1.0, 1.0).kind, CriticalPointKind::None);

        // beta < 0 keeps a single center on the right branch of the nullcline
        let neg = critical_points(-1.0, 1.0, 1.0);
        assert_eq!(neg.kind, CriticalPointKind::TwoPoints);
        assert_eq!(neg.rho1_star, None);
        assert_close(neg.rho2_star.unwrap(), 0.7320508075688772, 1e-15);

        // beta = 0 degenerates to the parabola vertex rho = c
        let zero = critical_points(0.0, 1.0, 1.0);
        assert_eq!(zero.rho1_star, None);
        assert_close(zero.rho2_star.unwrap(), 1.0, 1e-15);

        let zero_bg = critical_points(1.0, 1.0, 0.0);
        assert_eq!(zero_bg.kind, CriticalPointKind::SingleZeroBackground);
        assert_eq!(zero_bg.rho2_star, Some(2.0));
        assert_eq!(critical_points(-2.0, 1.0, 0.0).kind, CriticalPointKind::None);
    }

    #[test]
    fn classify_zero_background_regions() {
        // nonpositive gap at positive density: unconditionally smooth
        let v = classify_zero_background(&cfg(1.0, -5.0, -4.0, 1.0, 0.0)).unwrap();
        assert_eq!(v.region, Region::S1);
        assert_eq!(v.margin, f64::INFINITY);
        assert_eq!(v.surface_value, None);

        // positive gap: one-sided in d0, boundary included
        let g = g_zero_background(1.0, 4.0, 1.0).unwrap();
        let above = classify_zero_background(&cfg(1.0, 0.9, 4.0, 1.0, 0.0)).unwrap();
        assert_eq!(above.region, Region::S2);
        assert_close(above.margin, 0.9 - g, 1e-15);
        assert_eq!(above.surface_value, Some(g));

        let on = classify_zero_background(&cfg(1.0, g, 4.0, 1.0, 0.0)).unwrap();
        assert_eq!(on.region, Region::S2);
        assert_eq!(on.margin, 0.0);

        let below = classify_zero_background(&cfg(1.0, 0.5, 4.0, 1.0, 0.0)).unwrap();
        assert_eq!(below.region, Region::Supercritical);
        assert!(below.margin < 0.0);

        // vacuum set
        let vac_ok = classify_zero_background(&cfg(0.0, 1.0, 0.0, 1.0, 0.0)).unwrap();
        assert_eq!(vac_ok.region, Region::S1);
        assert_eq!(vac_ok.margin, 1.0);
        let vac_bad = classify_zero_background(&cfg(0.0, -1.0, -1.0, 1.0, 0.0)).unwrap();
        assert_eq!(vac_bad.region, Region::Supercritical);
        assert_eq!(vac_bad.margin, -1.0);
        let vac_gap = classify_zero_background(&cfg(0.0, 1.0, 4.0, 1.0, 0.0)).unwrap();
        assert_eq!(vac_gap.region, Region::Supercritical);

        assert!(classify_zero_background(&cfg(1.0, 0.0, 1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn classify_nonzero_background_regions() {
        // two-sided central branch: Gamma0 = 1 < 2k(rho0 - c) = 6 at rho0 = 4
        let g1 = g1_nonzero_background(4.0, 1.0, 1.0, 1.0).unwrap();
        let inside = classify_nonzero_background(&cfg(4.0, 2.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(inside.region, Region::S2);
        assert_close(inside.margin, g1 - 2.0, 1e-14);
        let below = classify_nonzero_background(&cfg(4.0, -2.9, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(below.region, Region::Supercritical);
        assert!(below.margin < 0.0);

        // degenerate parabola: the S3 curve
        let on_curve = classify_nonzero_background(&cfg(2.0, 0.0, 2.0, 1.0, 1.0)).unwrap();
        assert_eq!(on_curve.region, Region::S3);
        assert_eq!(on_curve.margin, 0.0);
        assert_eq!(on_curve.surface_value, Some(0.0));
        let off_curve = classify_nonzero_background(&cfg(2.0, 0.4, 2.0, 1.0, 1.0)).unwrap();
        assert_eq!(off_curve.region, Region::Supercritical);

        // the S3 curve is empty below rho0 = 2c
        let no_curve = classify_nonzero_background(&cfg(1.0, 0.0, 0.5, 1.0, 1.0)).unwrap();
        assert_eq!(no_curve.region, Region::Supercritical);
        assert_eq!(no_curve.margin, f64::NEG_INFINITY);

        // above the parabola everything breaks down
        let above = classify_nonzero_background(&cfg(1.0, 10.0, 3.0, 1.0, 1.0)).unwrap();
        assert_eq!(above.region, Region::Supercritical);
        assert_eq!(above.margin, f64::NEG_INFINITY);

        // left of the homoclinic loop no divergence is admissible
        let left = classify_nonzero_background(&cfg(0.3, 0.0, 0.0225, 1.0, 1.0)).unwrap();
        assert_eq!(left.region, Region::Supercritical);
        assert_eq!(left.margin, f64::NEG_INFINITY);

        assert!(classify_nonzero_background(&cfg(1.0, 0.0, 1.0, 1.0, 0.0)).is_err());
    }

    #[test]
    fn branch_rules_disagree_off_the_central_interval() {
        // rho0 = 1, Gamma0 = 0.25 (beta = 0.25, c = 1): Gamma0 >= 2k(rho0 - c) = 0
        // so the gamma gate is one-sided here, while rho0 < rho2* keeps the
        // saddle gate two-sided. Just above g1 they disagree.
        let g1 = g1_nonzero_background(1.0, 0.25, 1.0, 1.0).unwrap();
        assert_close(g1, 0.8233924661701897, 1e-13);
        let probe = cfg(1.0, g1 + 0.1, 0.25, 1.0, 1.0);
        let gamma_gate =
            classify_nonzero_background_with(&probe, BranchRule::GammaGate).unwrap();
        let saddle_gate =
            classify_nonzero_background_with(&probe, BranchRule::SaddleGate).unwrap();
        assert_eq!(gamma_gate.region, Region::S2);
        assert_eq!(saddle_gate.region, Region::Supercritical);

        // inside the interval they agree
        let inside = cfg(1.0, 0.0, 0.25, 1.0, 1.0);
        assert_eq!(
            classify_nonzero_background_with(&inside, BranchRule::SaddleGate).unwrap().region,
            Region::S2
        );
    }

    #[test]
    fn classify_dispatches_on_background() {
        let zero = classify(&cfg(1.0, 0.0, -1.0, 1.0, 0.0)).unwrap();
        assert_eq!(zero.region, Region::S1);
        let nonzero = classify(&cfg(1.0, 0.0, -1.0, 1.0, 1.0)).unwrap();
        assert_eq!(nonzero.region, Region::S1);
    }

    proptest! {
        /// sign(g) follows sign(Gamma - 2k rho).
        #[test]
        fn g_sign_tracks_the_locus(
            rho in 1e-2..1e2f64,
            gamma in 1e-2..1e2f64,
            k in 1e-1..1e1f64,
        ) {
            let g = g_zero_background(rho, gamma, k).unwrap();
            let locus = gamma - 2.0 * k * rho;
            if g > 0.0 {
                prop_assert!(locus > 0.0);
            } else if g < 0.0 {
                prop_assert!(locus < 0.0);
            }
        }

        /// Admission in d0 is monotone for the zero-background classifier:
        /// raising the divergence never leaves S2.
        #[test]
        fn zero_background_verdict_monotone_in_d0(
            rho in 1e-2..1e2f64,
            gamma in 1e-2..1e2f64,
            d0 in -10.0..10.0f64,
            bump in 0.0..10.0f64,
        ) {
            let lo = classify_zero_background(&cfg(rho, d0, gamma, 1.0, 0.0)).unwrap();
            let hi = classify_zero_background(&cfg(rho, d0 + bump, gamma, 1.0, 0.0)).unwrap();
            if lo.region == Region::S2 {
                prop_assert_eq!(hi.region, Region::S2);
            }
        }

        /// Both rest points satisfy the defining equation 2k(rho - c) = beta rho^2.
        #[test]
        fn critical_points_residual(
            beta in 1e-3..0.49f64,
            k in 0.5..2.0f64,
        ) {
            let c = 1.0;
            prop_assume!(beta < 0.5 * k / c * 0.999);
            let pts = critical_points(beta, k, c);
            prop_assert_eq!(pts.kind, CriticalPointKind::TwoPoints);
            for rho in [pts.rho1_star.unwrap(), pts.rho2_star.unwrap()] {
                let lhs = 2.0 * k * (rho - c);
                let rhs = beta * rho * rho;
                prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(rhs.abs()).max(1e-30));
            }
        }

        /// The g1 radicand matches rho G(rho, rho2*, beta) wherever g1 exists.
        #[test]
        fn g1_level_offset_identity(
            rho in 1.5..6.0f64,
            frac in 0.1..0.9f64,
        ) {
            let (k, c) = (1.0, 1.0);
            let beta = frac * 0.5 * k / c;
            let gamma = beta * rho * rho;
            if let Ok(g1) = g1_nonzero_background(rho, gamma, k, c) {
                let saddle = critical_points(beta, k, c).rho2_star.unwrap();
                let rho_g = rho * level_offset_g(rho, saddle, beta, k, c).unwrap();
                // near the saddle both sides vanish through cancellation of
                // O(gamma) terms, so the bound needs an absolute floor at
                // the rounding scale of those inputs
                let tol = 1e-9 * rho_g.abs() + 1e-13 * (gamma.abs() + 1.0);
                prop_assert!((g1 * g1 - rho_g).abs() <= tol);
            }
        }
    }
}

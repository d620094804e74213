//! Measure critical divergences empirically and compare them with the
//! closed forms.
//!
//! Run with `cargo run --example threshold_bisection`.

use repct::dynamics::IntegratorConfig;
use repct::experiments::{empirical_threshold, ThresholdBranch, ThresholdQuery};
use repct::thresholds::{g1_nonzero_background, g_zero_background};

fn main() -> repct::Result<()> {
    let ic = IntegratorConfig::default();

    // zero background: one surface, survival above it
    let query = ThresholdQuery::new(1.0, 4.0, 1.0, 0.0);
    let result = empirical_threshold(&query, &ic)?;
    println!("zero background, rho0 = 1, Gamma0 = 4:");
    println!("  analytic  g  = {:+.6}", g_zero_background(1.0, 4.0, 1.0)?);
    println!(
        "  empirical    = {:+.6} (bracket {:.1e}, {} simulations)",
        result.d_critical_empirical, result.bracket_width, result.n_simulations
    );
    println!("  discrepancy    {:.2e}", result.discrepancy);

    // nonzero background, small gap: the admissible divergences form a band
    // |d0| <= g1 and both edges can be measured
    println!();
    println!("background band, rho0 = 4, Gamma0 = 1, c = 1:");
    println!("  analytic g1  = {:+.6}", g1_nonzero_background(4.0, 1.0, 1.0, 1.0)?);
    for branch in [ThresholdBranch::Upper, ThresholdBranch::Lower] {
        let mut query = ThresholdQuery::new(4.0, 1.0, 1.0, 1.0);
        query.branch = branch;
        let result = empirical_threshold(&query, &ic)?;
        println!(
            "  {branch} edge   = {:+.6} (survival {}, discrepancy {:.2e})",
            result.d_critical_empirical,
            if result.survive_above { "above" } else { "below" },
            result.discrepancy
        );
    }

    // tighter bisection tolerance buys a smaller discrepancy
    println!();
    println!("convergence at the zero-background cell:");
    for tol in [1e-2, 1e-3, 1e-4, 1e-5] {
        let mut query = ThresholdQuery::new(1.0, 4.0, 1.0, 0.0);
        query.tol_d = tol;
        let result = empirical_threshold(&query, &ic)?;
        println!(
            "  tol {tol:.0e}: discrepancy {:.3e} after {} simulations",
            result.discrepancy, result.n_simulations
        );
    }
    Ok(())
}

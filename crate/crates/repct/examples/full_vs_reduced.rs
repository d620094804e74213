//! The full 2x2 gradient system and the reduced (rho, d) system describe
//! the same flow. Integrate both from matching data and compare.
//!
//! Run with `cargo run --example full_vs_reduced`.

use repct::dynamics::{integrate_full, integrate_reduced, IntegratorConfig};
use repct::spectral::{GradientTensor, InitialConfig};

fn main() -> repct::Result<()> {
    let m = GradientTensor::new(0.3, 0.9, -0.6, 0.5)?;
    let (rho0, k, c) = (1.2, 1.0, 0.0);
    let config = InitialConfig::from_tensor(&m, rho0, k, c)?;
    println!(
        "tensor trace {:.3}, spectral gap {:.3}, so d0 = {:.3} and Gamma0 = {:.3}",
        m.trace(),
        m.spectral_gap(),
        config.d0,
        config.gamma0
    );

    let ic = IntegratorConfig {
        rel_tol: 1e-10,
        abs_tol: 1e-12,
        t_end: 8.0,
        ..IntegratorConfig::default()
    };
    let full = integrate_full(&m, rho0, k, c, &ic)?;
    let reduced = integrate_reduced(&config, &ic)?;
    println!("full:    {}", full.outcome.summary());
    println!("reduced: {}", reduced.outcome.summary());

    // both runs sample on the same time grid, so states compare directly
    let mut worst = (0.0f64, 0.0f64);
    for ((t, fs), (_, rs)) in full.samples.iter().zip(&reduced.samples) {
        let dev = (fs.rho - rs.rho).abs().max((fs.m.trace() - rs.d).abs());
        if dev > worst.1 {
            worst = (*t, dev);
        }
    }
    println!("worst (rho, d) deviation {:.3e} at t = {:.1}", worst.1, worst.0);

    // the decomposition components all satisfy the same transport equation
    // as the density, so their ratios to rho are constants of the motion
    let parts0 = m.decompose();
    println!();
    println!("transport ratios along the full run:");
    for (label, r0, pick) in [
        ("p/rho", parts0.p / rho0, 0usize),
        ("q/rho", parts0.q / rho0, 1),
        ("omega/rho", parts0.omega / rho0, 2),
    ] {
        let mut drift = 0.0f64;
        for (_, fs) in &full.samples {
            let parts = fs.m.decompose();
            let value = [parts.p, parts.q, parts.omega][pick] / fs.rho;
            drift = drift.max((value - r0).abs());
        }
        println!("  {label:<10} initial {r0:+.6}, max drift {drift:.3e}");
    }
    Ok(())
}

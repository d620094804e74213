//! Integrate two nearby initial states, one on each side of the
//! zero-background threshold, and watch them diverge.
//!
//! Run with `cargo run --example simulate_breakdown`.

use repct::dynamics::{integrate_reduced, IntegratorConfig};
use repct::spectral::InitialConfig;
use repct::thresholds::g_zero_background;

fn main() -> repct::Result<()> {
    let (rho0, gamma0, k) = (1.0, 4.0, 1.0);
    let g = g_zero_background(rho0, gamma0, k)?;
    println!("threshold divergence at rho0 = {rho0}, Gamma0 = {gamma0}: g = {g:.6}");

    let ic = IntegratorConfig { t_end: 25.0, ..IntegratorConfig::default() };
    for offset in [0.05, -0.05] {
        let config = InitialConfig::zero_background(rho0, g + offset, gamma0, k)?;
        let sim = integrate_reduced(&config, &ic)?;
        println!();
        println!("d0 = g {offset:+}: {}", sim.outcome.summary());
        println!(
            "  {} accepted steps, max |d| {:.3e}, max rho {:.3e}",
            sim.diagnostics.steps, sim.diagnostics.max_abs_d, sim.diagnostics.max_rho
        );
        let (t_last, last) = sim.samples.last().unwrap();
        println!("  last sample: t = {t_last:.2}, rho = {:.6}, d = {:.6}", last.rho, last.d);
    }

    // breakdown times sharpen as the data sinks deeper below the surface
    println!();
    println!("breakdown time vs depth below the surface:");
    for depth in [0.1, 0.5, 1.0, 2.0] {
        let config = InitialConfig::zero_background(rho0, g - depth, gamma0, k)?;
        let sim = integrate_reduced(&config, &ic)?;
        match sim.outcome.breakdown_time() {
            Some(t_star) => println!("  d0 = g - {depth:<4}  t* = {t_star:.4}"),
            None => println!("  d0 = g - {depth:<4}  no breakdown before t = {}", ic.t_end),
        }
    }
    Ok(())
}

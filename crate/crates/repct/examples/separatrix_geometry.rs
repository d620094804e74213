//! Walk through the phase-plane geometry behind the thresholds: rest
//! points, the saddle separatrix bounding the trapped region, and the
//! divergence nullcline.
//!
//! Run with `cargo run --example separatrix_geometry`.

use repct::experiments::{nullcline, separatrix};
use repct::thresholds::{critical_points, g2_nonzero_background, CriticalPointKind};

fn main() -> repct::Result<()> {
    let (k, c) = (1.0, 1.0);

    // subcritical gap ratio: a center and a saddle
    let beta = 0.25;
    let points = critical_points(beta, k, c);
    println!("beta = {beta}: {:?}", points.kind);
    println!("  center rho1* = {:.6}", points.rho1_star.unwrap());
    println!("  saddle rho2* = {:.6}", points.rho2_star.unwrap());

    // the separatrix through the saddle encloses every trapped orbit; its
    // half-width in d shrinks to zero at the saddle density
    let saddle = points.rho2_star.unwrap();
    println!();
    println!("separatrix half-width, beta = {beta}:");
    for frac in [0.2, 0.4, 0.6, 0.8, 0.95, 1.0] {
        let rho = frac * saddle;
        let pts = separatrix(beta, k, c, &[rho])?;
        match pts[0].d {
            Some(d) => println!("  rho = {rho:7.4}  d = {d:.6}"),
            None => println!("  rho = {rho:7.4}  outside the loop"),
        }
    }

    // raising the gap ratio to k/(2c) merges the two rest points
    let degenerate = critical_points(k / (2.0 * c), k, c);
    assert_eq!(degenerate.kind, CriticalPointKind::Degenerate);
    println!();
    println!(
        "beta = k/(2c): rest points merge at rho = {:.6}",
        degenerate.rho2_star.unwrap()
    );
    println!("survivors now sit on a single curve d = g2(rho):");
    for rho in [2.0, 2.5, 3.0, 4.0] {
        println!("  g2({rho}) = {:.6}", g2_nonzero_background(rho, k, c)?);
    }

    // with no background the saddle sits at rho = 2k/beta and the trapped
    // region degenerates to the branch above the separatrix
    let beta0 = 1.0;
    let zero_bg = critical_points(beta0, k, 0.0);
    println!();
    println!("c = 0, beta = {beta0}: {:?} at rho = {:.4}", zero_bg.kind, zero_bg.rho2_star.unwrap());
    let rhos: Vec<f64> = (1..=8).map(|i| 0.5 * i as f64).collect();
    for p in separatrix(beta0, k, 0.0, &rhos)? {
        println!("  rho = {:3.1}  separatrix d = {:+.6}", p.rho, p.d.unwrap());
    }

    // the divergence nullcline d^2 = 2k(rho - c) - beta rho^2 bounds where
    // orbits turn around
    println!();
    let arch = nullcline(0.25, k, c, &[1.5, 2.5, 4.0, 6.0]);
    println!("nullcline arch, beta = 0.25:");
    for p in arch {
        match (p.d_plus, p.d_minus) {
            (Some(hi), Some(lo)) => println!("  rho = {:3.1}  d in [{lo:+.4}, {hi:+.4}]", p.rho),
            _ => println!("  rho = {:3.1}  no real turning point", p.rho),
        }
    }
    Ok(())
}

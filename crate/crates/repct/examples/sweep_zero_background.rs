//! Sweep the zero-background threshold surface over a grid of initial
//! densities and gaps, validating the closed form cell by cell.
//!
//! Run with `cargo run --release --example sweep_zero_background`.

use repct::experiments::{preset_sweep, sweep_csv, sweep_threshold_surface};

fn main() {
    let spec = preset_sweep("thm11").expect("built-in grid");
    println!(
        "{} cells, k = {}, c = {}, horizon {}, bisection tolerance {:.0e}",
        spec.cells.len(),
        spec.k,
        spec.c,
        spec.horizon,
        spec.tol_d
    );

    let rows = sweep_threshold_surface(&spec);

    let mut worst: Option<&repct::experiments::SweepRow> = None;
    for row in &rows {
        if let Some(disc) = row.discrepancy {
            if worst.and_then(|w| w.discrepancy).is_none_or(|w| disc > w) {
                worst = Some(row);
            }
        }
    }
    let measured = rows.iter().filter(|r| r.discrepancy.is_some()).count();
    println!("measured {measured} of {} rows", rows.len());
    if let Some(row) = worst {
        println!(
            "worst cell: rho0 = {}, Gamma0 = {}, |empirical - analytic| = {:.3e}",
            row.rho0,
            row.gamma0,
            row.discrepancy.unwrap()
        );
    }

    println!();
    let csv = sweep_csv(&rows);
    for line in csv.lines().take(6) {
        println!("{line}");
    }
    println!("... ({} more rows)", rows.len().saturating_sub(5));
}

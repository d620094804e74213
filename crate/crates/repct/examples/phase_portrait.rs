//! Extract the phase-plane geometry for a background case with a center
//! and a saddle, and write the bundle as JSON.
//!
//! Run with `cargo run --example phase_portrait`.

use repct::experiments::{preset_portrait, render_portrait};

fn main() -> repct::Result<()> {
    let spec = preset_portrait("fig32").expect("built-in setup");
    println!(
        "beta = {}, k = {}, c = {}, rho in [{}, {}], {} seeds",
        spec.beta,
        spec.k,
        spec.c,
        spec.rho_range.0,
        spec.rho_range.1,
        spec.seeds.len()
    );

    let data = render_portrait(&spec)?;

    println!("rest points: {:?}", data.critical_points.kind);
    if let Some(rho) = data.critical_points.rho1_star {
        println!("  center at rho = {rho:.6}");
    }
    if let Some(rho) = data.critical_points.rho2_star {
        println!("  saddle at rho = {rho:.6}");
    }

    if let Some(sep) = &data.separatrix {
        let on_curve = sep.iter().filter(|p| p.d.is_some()).count();
        println!("separatrix sampled at {on_curve} of {} densities", sep.len());
    }

    println!("trajectories:");
    for record in &data.trajectories {
        println!(
            "  seed ({:>4}, {:>4}): {} ({} samples)",
            record.seed[0],
            record.seed[1],
            record.outcome,
            record.samples.len()
        );
    }

    let path = std::env::temp_dir().join("repct_portrait.json");
    std::fs::write(&path, serde_json::to_string_pretty(&data).unwrap())
        .map_err(|e| repct::Error::InvalidConfig(format!("cannot write portrait: {e}")))?;
    println!("wrote {}", path.display());
    Ok(())
}

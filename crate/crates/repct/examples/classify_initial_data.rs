//! Classify representative initial states against the threshold surfaces.
//!
//! Run with `cargo run --example classify_initial_data`.

use repct::spectral::{GradientTensor, InitialConfig};
use repct::thresholds::classify;

fn show(label: &str, config: &InitialConfig) -> repct::Result<()> {
    let verdict = classify(config)?;
    let surface = match verdict.surface_value {
        Some(v) => format!("{v:+.6}"),
        None => "none".into(),
    };
    println!(
        "{label:<44} {:>13}  margin {:+9.4}  surface {surface}",
        format!("{:?}", verdict.region),
        verdict.margin
    );
    Ok(())
}

fn main() -> repct::Result<()> {
    println!("zero background (c = 0, k = 1)");
    show("rotation dominated, negative gap", &InitialConfig::zero_background(1.0, -2.0, -4.0, 1.0)?)?;
    show("positive gap, expanding fast enough", &InitialConfig::zero_background(1.0, 2.0, 4.0, 1.0)?)?;
    show("positive gap, expansion too weak", &InitialConfig::zero_background(1.0, 0.5, 4.0, 1.0)?)?;
    show("positive gap, contracting", &InitialConfig::zero_background(1.0, -1.0, 4.0, 1.0)?)?;

    println!();
    println!("nonzero background (c = 1, k = 1)");
    show("negative gap", &InitialConfig::new(1.0, 0.0, -1.0, 1.0, 1.0)?)?;
    show("small gap, at rest inside the band", &InitialConfig::new(4.0, 0.0, 1.0, 1.0, 1.0)?)?;
    show("small gap, outside the band", &InitialConfig::new(4.0, -3.0, 1.0, 1.0, 1.0)?)?;
    show("degenerate parabola, on the curve", &InitialConfig::new(3.0, 0.259247664118722, 4.5, 1.0, 1.0)?)?;
    show("gap too large for the density", &InitialConfig::new(1.0, 0.0, 4.0, 1.0, 1.0)?)?;

    // initial data straight from a velocity gradient: the divergence and
    // the spectral gap are read off the tensor
    println!();
    let m = GradientTensor::new(0.1, 0.8, -0.3, 0.2)?;
    let config = InitialConfig::from_tensor(&m, 1.0, 1.0, 0.0)?;
    println!(
        "from tensor [{} {}; {} {}]: d0 = {:.3}, Gamma0 = {:.3}",
        m.m11, m.m12, m.m21, m.m22, config.d0, config.gamma0
    );
    show("tensor data", &config)?;
    Ok(())
}

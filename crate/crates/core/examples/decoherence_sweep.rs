//! Grows both windows at fixed kept width and watches the histories decohere.
//!
//!     cargo run --release --example decoherence_sweep -- 3 5 7

use quantum_baker::experiment::{cmd_sweep, ConfigOverrides, Experiment, RunConfig};

fn main() -> quantum_baker::Result<()> {
    let lefts: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let overrides = ConfigOverrides {
        sweep_left: Some(if lefts.is_empty() { vec![3, 4, 5, 6] } else { lefts }),
        sweep_steps: Some(vec![2]),
        ..Default::default()
    };
    let record = cmd_sweep(&RunConfig::resolve(Experiment::Sweep, overrides))?;

    println!("{:>4} {:>6} {:>12} {:>12}", "l", "N", "|H - k|", "offdiag max");
    for row in &record.rows {
        println!(
            "{:>4} {:>6} {:>12.4e} {:>12.4e}",
            row[0].render(),
            row[3].render(),
            row[7].as_f64().unwrap_or(f64::NAN),
            row[10].as_f64().unwrap_or(f64::NAN)
        );
    }
    Ok(())
}

//! Entropy of the full history distribution against the number of steps.
//! The least-squares slope approaches one bit per iteration.
//!
//!     cargo run --release --example entropy_growth -- 6

use quantum_baker::coarse::validate_parameters;
use quantum_baker::experiment::least_squares_slope;
use quantum_baker::histories::{
    entropy_bits, history_distribution, propagate_branches, HistoryKind, PropagationOptions,
};
use quantum_baker::BitString;

fn main() -> quantum_baker::Result<()> {
    let left = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5usize);
    let x: BitString = "01".parse()?;
    let mut points = Vec::new();
    for steps in 1..=3 {
        let cg = validate_parameters(2 * left + 2, left + 1, left, left, steps)?;
        let ensemble = propagate_branches(&cg, &x, steps, &PropagationOptions::default())?;
        let h = entropy_bits(&history_distribution(&ensemble, HistoryKind::Full)?);
        println!("k = {steps}: H = {h:.6} bits");
        points.push((steps as f64, h));
    }
    if let Some(slope) = least_squares_slope(&points) {
        println!("slope = {slope:.4} bits per step");
    }
    Ok(())
}

//! Fine-grained histories for a two-qubit window: every step records the
//! window, and the weight concentrates on the paths that follow the shift.
//!
//!     cargo run --release --example full_histories -- 14 2

use quantum_baker::coarse::validate_parameters;
use quantum_baker::histories::{
    entropy_bits, history_distribution, is_shift_consistent, offdiagonal_norm, propagate_branches, theorem2_value,
    HistoryKind, NormMode, PropagationOptions,
};
use quantum_baker::BitString;

fn main() -> quantum_baker::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let qubits = args.first().copied().unwrap_or(14);
    let steps = args.get(1).copied().unwrap_or(2);
    let dot = qubits / 2;
    let cg = validate_parameters(qubits, dot, dot - 1, qubits - dot - 1, steps)?;
    let x: BitString = "01".parse()?;

    let ensemble = propagate_branches(&cg, &x, steps, &PropagationOptions::default())?;
    let dist = history_distribution(&ensemble, HistoryKind::Full)?;
    for &(code, p) in &dist.entries {
        let path = dist.path(code);
        let mark = if is_shift_consistent(&x, &path)? { "shift" } else { "" };
        println!("{path:>12}  {p:.6}  oracle {:.4}  {mark}", theorem2_value(&x, &path, &path)?);
    }
    println!("H = {:.4} bits over {} retained paths", entropy_bits(&dist), dist.entries.len());
    println!(
        "off-diagonal: max {:.3e}, rms {:.3e}",
        offdiagonal_norm(&ensemble, NormMode::Max)?,
        offdiagonal_norm(&ensemble, NormMode::Rms)?
    );
    Ok(())
}

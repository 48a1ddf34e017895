//! Coarse-grained histories: only the final window outcome is recorded.
//! The initial string is `α·x` and after `k` steps the weight sits almost
//! entirely on the `2^k` strings that start with `x`.
//!
//!     cargo run --release --example coarse_entropy

use quantum_baker::coarse::validate_parameters;
use quantum_baker::histories::{
    coarse_offdiagonal_max, entropy_bits, history_distribution, propagate_branches, theorem1_value, HistoryKind,
    PropagationOptions,
};
use quantum_baker::BitString;

fn main() -> quantum_baker::Result<()> {
    let (qubits, dot, left, right, steps) = (12, 6, 5, 5, 1);
    let cg = validate_parameters(qubits, dot, left, right, steps)?;
    let core: BitString = "1".parse()?;
    let alpha: BitString = "0".parse()?;
    let initial = alpha.concat(&core)?;

    let opts = PropagationOptions { full_histories: false, ..Default::default() };
    let ensemble = propagate_branches(&cg, &initial, steps, &opts)?;
    let dist = history_distribution(&ensemble, HistoryKind::Coarse)?;

    for &(code, p) in &dist.entries {
        let y = BitString::from_index(code, cg.width())?;
        let oracle = theorem1_value(&core, &y.slice(1, cg.width() - steps), steps)?;
        println!("y = {y}  p = {p:.12}  leading order = {oracle}");
    }
    println!("entropy = {:.12} bits (k = {steps})", entropy_bits(&dist));
    println!("largest off-diagonal coarse entry = {:.2e}", coarse_offdiagonal_max(&ensemble));
    Ok(())
}

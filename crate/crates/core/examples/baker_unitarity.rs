//! Applies the quantum baker's map to random states and to basis states.
//!
//!     cargo run --release --example baker_unitarity -- 12 6

use num_complex::Complex64;
use quantum_baker::{basis_state, BakerMap, BitString, StateVector, SystemShape};

fn main() -> quantum_baker::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let qubits = args.first().copied().unwrap_or(12);
    let dot = args.get(1).copied().unwrap_or(qubits / 2);
    let shape = SystemShape::new(qubits, dot)?;
    let map = BakerMap::new(shape)?;

    // cheap deterministic pseudo-random amplitudes
    let mut seed = 0x2545f4914f6cdd1du64;
    let mut next = move || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let psi = StateVector::from_amplitudes((0..shape.dim()).map(|_| Complex64::new(next(), next())).collect());
    let out = map.apply(&psi)?;
    println!("N = {qubits}, n = {dot}: |psi| = {:.15}, |B psi| = {:.15}", psi.norm(), out.norm());

    // B maps the dot-n basis state with label ξ to the dot-(n+1) one
    let xi = BitString::from_index((shape.dim() / 3) as u64, qubits)?;
    let image = map.apply(&basis_state(&shape, dot, &xi)?)?;
    let expected = basis_state(&shape, dot + 1, &xi)?;
    println!("basis image defect for {xi}: {:.2e}", image.max_abs_diff(&expected)?);
    Ok(())
}

//! Compares the baker's map with the dot one position from the right end to
//! the Balazs-Voros-Saraceno matrix built from antiperiodic Fourier blocks.
//!
//!     cargo run --example bvs_crosscheck

use quantum_baker::dense::{baker_matrix, bvs_reference_matrix, max_abs_diff, unitarity_defect};
use quantum_baker::SystemShape;

fn main() -> quantum_baker::Result<()> {
    for qubits in 1..=8 {
        let ours = baker_matrix(&SystemShape::new(qubits, qubits - 1)?)?;
        let reference = bvs_reference_matrix(qubits)?;
        println!(
            "N = {qubits}  max|Δ| = {:.2e}  unitarity defect = {:.2e}",
            max_abs_diff(&ours, &reference),
            unitarity_defect(&ours)
        );
    }
    Ok(())
}

//! Builds a few basis states for a 6-qubit register, prints where they sit in
//! phase space and confirms that the fast transform agrees with the explicit
//! product-state construction.
//!
//!     cargo run --example basis_states

use quantum_baker::{basis_state, localization_centers, BasisTransform, BitString, StateVector, SystemShape};

fn main() -> quantum_baker::Result<()> {
    let shape = SystemShape::new(6, 3)?;
    let m = 3;

    println!("label   q        p        dq       dp");
    for label in ["000000", "101100", "111111", "010011"] {
        let xi: BitString = label.parse()?;
        let loc = localization_centers(&shape, m, &xi)?;
        println!("{label}  {:.5}  {:.5}  {:.5}  {:.5}", loc.q, loc.p, loc.dq, loc.dp);
    }

    // every basis state is a column of the synthesis transform
    let transform = BasisTransform::new(&shape, m)?;
    let mut worst = 0.0f64;
    for index in 0..shape.dim() as u64 {
        let xi = BitString::from_index(index, 6)?;
        let mut coeffs = StateVector::zeros(shape.dim());
        coeffs[index as usize] = 1.0.into();
        let fast = transform.synthesize(&coeffs)?;
        worst = worst.max(fast.max_abs_diff(&basis_state(&shape, m, &xi)?)?);
    }
    println!("max |fast - product| over all {} labels: {worst:.2e}", shape.dim());
    Ok(())
}

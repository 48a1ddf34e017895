//! Dense matrices for small systems. These serve as independent references for
//! the fast transforms; nothing in the propagation path uses them.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::baker::BakerMap;
use crate::error::{Error, Result};
use crate::shape::SystemShape;
use crate::state::StateVector;

pub type CMatrix = DMatrix<Complex64>;

/// Largest `N` for which dense matrices are built.
pub const MAX_DENSE_QUBITS: usize = 10;

fn check_dense(qubits: usize) -> Result<()> {
    if qubits > MAX_DENSE_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "dense matrices limited to N <= {MAX_DENSE_QUBITS}, got N = {qubits}"
        )));
    }
    Ok(())
}

/// Matrix of `B̂` in computational coordinates, built column by column from the fast map.
pub fn baker_matrix(shape: &SystemShape) -> Result<CMatrix> {
    check_dense(shape.qubits())?;
    let map = BakerMap::new(*shape)?;
    let dim = shape.dim();
    let mut m = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        let col = map.apply(&StateVector::basis(dim, j)?)?;
        m.column_mut(j).copy_from_slice(col.amplitudes());
    }
    Ok(m)
}

/// Sign of the exponent in an antiperiodic Fourier kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelSign {
    Positive,
    Negative,
}

/// `G[j, k] = M^{-1/2} exp(±2πi (j+½)(k+½)/M)`.
pub fn antiperiodic_fourier(modes: usize, sign: KernelSign) -> CMatrix {
    let s = match sign {
        KernelSign::Positive => 1.0,
        KernelSign::Negative => -1.0,
    };
    let mf = modes as f64;
    CMatrix::from_fn(modes, modes, |j, k| {
        Complex64::from_polar(1.0 / mf.sqrt(), s * 2.0 * PI * (j as f64 + 0.5) * (k as f64 + 0.5) / mf)
    })
}

/// The classic baker quantization `G_D^{-1} (G_{D/2} ⊕ G_{D/2})` built directly
/// from Fourier matrices with the given kernel sign.
pub fn bvs_reference_matrix_with_sign(qubits: usize, sign: KernelSign) -> Result<CMatrix> {
    check_dense(qubits)?;
    if qubits == 0 {
        return Err(Error::invalid("reference map needs N >= 1"));
    }
    let dim = 1usize << qubits;
    let half = dim / 2;
    let g_half = antiperiodic_fourier(half, sign);
    let mut blocks = CMatrix::zeros(dim, dim);
    blocks.view_mut((0, 0), (half, half)).copy_from(&g_half);
    blocks.view_mut((half, half), (half, half)).copy_from(&g_half);
    Ok(antiperiodic_fourier(dim, sign).adjoint() * blocks)
}

/// Reference for the `n = N - 1` map. The kernel sign is the one that matches
/// [`baker_matrix`]; see the calibration test.
pub fn bvs_reference_matrix(qubits: usize) -> Result<CMatrix> {
    bvs_reference_matrix_with_sign(qubits, KernelSign::Negative)
}

/// Matrix whose columns are the given vectors.
pub fn from_columns(cols: &[StateVector]) -> CMatrix {
    let dim = cols.first().map_or(0, |c| c.dim());
    let mut m = CMatrix::zeros(dim, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.column_mut(j).copy_from_slice(c.amplitudes());
    }
    m
}

/// `max |A - B|` over entries.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `max |A†A - 1|`.
pub fn unitarity_defect(a: &CMatrix) -> f64 {
    let id = CMatrix::identity(a.ncols(), a.ncols());
    max_abs_diff(&(a.adjoint() * a), &id)
}

//! Brute-force decoherence functionals from explicit dense matrices.
//! Everything here is built from the product-form basis states, so it shares
//! no code with the fast transforms or the branch propagation.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use quantum_baker::coarse::CoarseGraining;
use quantum_baker::{basis_state, BitString, SystemShape};

pub type Mat = DMatrix<Complex64>;

pub struct DenseModel {
    pub cg: CoarseGraining,
    /// Columns are the dot-n basis states.
    pub basis_n: Mat,
    pub baker: Mat,
    projectors: Vec<Mat>,
}

fn basis_matrix(shape: &SystemShape, m: usize) -> Mat {
    let dim = shape.dim();
    let mut s = Mat::zeros(dim, dim);
    for j in 0..dim {
        let xi = BitString::from_index(j as u64, shape.qubits()).unwrap();
        let v = basis_state(shape, m, &xi).unwrap();
        for i in 0..dim {
            s[(i, j)] = v[i];
        }
    }
    s
}

impl DenseModel {
    pub fn new(cg: CoarseGraining) -> Self {
        let shape = *cg.shape();
        let basis_n = basis_matrix(&shape, shape.dot());
        let baker = basis_matrix(&shape, shape.dot() + 1) * basis_n.adjoint();
        let projectors = (0..cg.outcomes())
            .map(|y| {
                let diag = Mat::from_fn(shape.dim(), shape.dim(), |i, j| {
                    if i == j && cg.window(i) == y {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::default()
                    }
                });
                &basis_n * diag * basis_n.adjoint()
            })
            .collect();
        DenseModel { cg, basis_n, baker, projectors }
    }

    /// `P_y` in the computational basis.
    pub fn projector(&self, y: usize) -> &Mat {
        &self.projectors[y]
    }

    /// Columns `|s⟩` for every label in the block of `x`.
    pub fn block(&self, x: &BitString) -> Mat {
        let labels = quantum_baker::enumerate_block(&self.cg, x).unwrap();
        let cols: Vec<_> = labels.iter().map(|s| self.basis_n.column(s.index() as usize).into_owned()).collect();
        Mat::from_columns(&cols)
    }

    pub fn weight(&self) -> f64 {
        0.5f64.powi((self.cg.left() + self.cg.right()) as i32)
    }

    /// `C_y⃗ |s⟩` for every block label, one column per label.
    pub fn chain(&self, path: &[usize], block: &Mat) -> Mat {
        let mut m = block.clone();
        for &y in path {
            m = self.projector(y) * (&self.baker * m);
        }
        m
    }

    /// `Tr[C_y ρ₀ C_z†] = w ⟨M_z, M_y⟩_F`.
    pub fn functional(&self, my: &Mat, mz: &Mat) -> Complex64 {
        let w = self.weight();
        mz.iter().zip(my.iter()).map(|(a, b)| a.conj() * b).sum::<Complex64>() * w
    }

    /// `P_y B^k` applied to the block.
    pub fn coarse_chain(&self, y: usize, steps: usize, block: &Mat) -> Mat {
        let mut m = block.clone();
        for _ in 0..steps {
            m = &self.baker * m;
        }
        self.projector(y) * m
    }
}

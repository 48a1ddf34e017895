use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Amplitudes over the `D` computational (or basis-label) indices.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zeros(dim: usize) -> Self {
        StateVector { amps: vec![Complex64::new(0.0, 0.0); dim] }
    }

    /// The unit vector `e_j`.
    pub fn basis(dim: usize, j: usize) -> Result<Self> {
        if j >= dim {
            return Err(Error::invalid(format!("basis index {j} out of range for dimension {dim}")));
        }
        let mut v = Self::zeros(dim);
        v.amps[j] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        StateVector { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&mut self, s: Complex64) {
        self.amps.iter_mut().for_each(|a| *a *= s);
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: Complex64, other: &StateVector) -> Result<()> {
        check_dims(self, other)?;
        self.amps.iter_mut().zip(&other.amps).for_each(|(a, b)| *a += s * b);
        Ok(())
    }

    /// Largest componentwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        check_dims(self, other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }
}

impl Index<usize> for StateVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.amps[i]
    }
}

impl IndexMut<usize> for StateVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.amps[i]
    }
}

fn check_dims(u: &StateVector, v: &StateVector) -> Result<()> {
    if u.dim() != v.dim() {
        return Err(Error::invalid(format!("dimension mismatch: {} vs {}", u.dim(), v.dim())));
    }
    Ok(())
}

/// `⟨u|v⟩`, conjugating the first argument.
pub fn inner_product(u: &StateVector, v: &StateVector) -> Result<Complex64> {
    check_dims(u, v)?;
    Ok(dot_slices(&u.amps, &v.amps))
}

pub(crate) fn dot_slices(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn conjugation_side() {
        let e0 = StateVector::basis(2, 0).unwrap();
        let e1 = StateVector::basis(2, 1).unwrap();
        assert_eq!(inner_product(&e0, &e0).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(inner_product(&e0, &e1).unwrap(), Complex64::new(0.0, 0.0));
        let mut ie0 = e0.clone();
        ie0.scale(Complex64::i());
        assert_eq!(inner_product(&ie0, &e0).unwrap(), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn dim_mismatch() {
        let u = StateVector::zeros(2);
        let v = StateVector::zeros(4);
        assert!(matches!(inner_product(&u, &v), Err(Error::InvalidArgument(_))));
        assert!(StateVector::basis(2, 2).is_err());
    }

    fn vector(len: usize) -> impl Strategy<Value = StateVector> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
            .prop_map(|v| StateVector::from_amplitudes(v.into_iter().map(|(r, i)| Complex64::new(r, i)).collect()))
    }

    proptest! {
        #[test]
        fn cauchy_schwarz((u, v) in (1usize..64).prop_flat_map(|n| (vector(n), vector(n)))) {
            let uv = inner_product(&u, &v).unwrap().norm();
            prop_assert!(uv <= u.norm() * v.norm() * (1.0 + 1e-12) + 1e-12);
            let uu = inner_product(&u, &u).unwrap();
            prop_assert!(uu.re >= 0.0 && uu.im.abs() <= 1e-12);
            let vu = inner_product(&v, &u).unwrap();
            prop_assert!((vu - inner_product(&u, &v).unwrap().conj()).norm() <= 1e-12);
        }
    }
}

//! The quantum baker's map at dot position `n`: the unitary sending every
//! dot-`n` basis state to the dot-`(n+1)` state with the same label.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::basis::BasisTransform;
use crate::error::{Error, Result};
use crate::shape::SystemShape;
use crate::state::StateVector;

#[derive(Debug, Clone)]
pub struct BakerMap {
    shape: SystemShape,
    source: BasisTransform,
    target: BasisTransform,
}

/// Reusable buffers for [`BakerMap::transfer_into`].
#[derive(Debug, Clone)]
pub struct Workspace {
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl BakerMap {
    pub fn new(shape: SystemShape) -> Result<Self> {
        // SystemShape already enforces dot <= N - 1, so the target basis exists.
        let mut planner = FftPlanner::new();
        let source = BasisTransform::with_planner(&shape, shape.dot(), &mut planner)?;
        let target = BasisTransform::with_planner(&shape, shape.dot() + 1, &mut planner)?;
        Ok(BakerMap { shape, source, target })
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    /// Transform for the dot-`n` basis in which projectors are diagonal.
    pub fn source_basis(&self) -> &BasisTransform {
        &self.source
    }

    pub fn target_basis(&self) -> &BasisTransform {
        &self.target
    }

    pub fn workspace(&self) -> Workspace {
        Workspace {
            buf: vec![Complex64::default(); self.shape.dim()],
            scratch: vec![Complex64::default(); self.source.scratch_len().max(self.target.scratch_len())],
        }
    }

    /// `B̂ψ` in computational coordinates.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        self.check(state)?;
        let mut ws = self.workspace();
        let mut coeffs = state.amplitudes().to_vec();
        self.source.analyze_into(&mut coeffs, &mut ws.buf, &mut ws.scratch);
        let mut out = StateVector::zeros(self.shape.dim());
        self.target.synthesize_into(&ws.buf, out.amplitudes_mut(), &mut ws.scratch);
        Ok(out)
    }

    /// One step of the map expressed in dot-`n` label coordinates.
    pub fn transfer(&self, coeffs: &StateVector) -> Result<StateVector> {
        self.check(coeffs)?;
        let mut out = StateVector::zeros(self.shape.dim());
        self.transfer_into(coeffs.amplitudes(), out.amplitudes_mut(), &mut self.workspace());
        Ok(out)
    }

    /// `out = analyze_n(synthesize_{n+1}(coeffs))`.
    pub fn transfer_into(&self, coeffs: &[Complex64], out: &mut [Complex64], ws: &mut Workspace) {
        self.target.synthesize_into(coeffs, &mut ws.buf, &mut ws.scratch);
        self.source.analyze_into(&mut ws.buf, out, &mut ws.scratch);
    }

    fn check(&self, v: &StateVector) -> Result<()> {
        if v.dim() != self.shape.dim() {
            return Err(Error::invalid(format!("dimension mismatch: {} vs {}", v.dim(), self.shape.dim())));
        }
        Ok(())
    }
}

/// `B̂ψ` for the map of `shape`.
pub fn apply_baker(state: &StateVector, shape: &SystemShape) -> Result<StateVector> {
    BakerMap::new(*shape)?.apply(state)
}

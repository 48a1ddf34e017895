//! Position/momentum-localized basis states at a given dot position and the
//! fast transforms between computational coordinates and basis-label coordinates.
//!
//! For dot position `m`, the state labelled `ξ_1…ξ_m.ξ_{m+1}…ξ_N` carries the
//! position bits `ξ_{m+1}…ξ_N` on the leading `N - m` qubits and an
//! antiperiodic Fourier mode on the trailing `m` qubits. Its momentum index is
//! the integer `ξ_m…ξ_1` (so `ξ_1` is the least significant momentum bit) and
//! its amplitude on trailing value `b` is `e^{2πi(b+½)(k+½)/M}/√M`, `M = 2^m`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::bits::{reverse_bits, BitString};
use crate::error::{Error, Result};
use crate::shape::SystemShape;
use crate::state::StateVector;

/// A basis ket `|ξ_1…ξ_m.ξ_{m+1}…ξ_N⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisLabel {
    pub shape: SystemShape,
    pub dot: usize,
    pub xi: BitString,
}

impl BasisLabel {
    pub fn new(shape: SystemShape, dot: usize, xi: BitString) -> Result<Self> {
        check_label(&shape, dot, &xi)?;
        Ok(BasisLabel { shape, dot, xi })
    }

    pub fn state(&self) -> StateVector {
        product_state(self.shape.qubits(), self.dot, &self.xi)
    }

    pub fn centers(&self) -> Result<Localization> {
        localization_centers(&self.shape, self.dot, &self.xi)
    }
}

fn check_label(shape: &SystemShape, m: usize, xi: &BitString) -> Result<()> {
    if m > shape.qubits() {
        return Err(Error::invalid(format!("dot position {m} exceeds N = {}", shape.qubits())));
    }
    if xi.len() != shape.qubits() {
        return Err(Error::invalid(format!("label has {} bits, expected N = {}", xi.len(), shape.qubits())));
    }
    Ok(())
}

/// Builds the basis state directly as a tensor product of single-qubit factors.
///
/// `m` may be anything in `0..=N`; `m = 0` gives `i|q_j⟩` and `m = N` has no
/// position qubits at all. Used as the reference the fast transforms are checked
/// against.
pub fn basis_state(shape: &SystemShape, m: usize, xi: &BitString) -> Result<StateVector> {
    check_label(shape, m, xi)?;
    Ok(product_state(shape.qubits(), m, xi))
}

fn product_state(qubits: usize, m: usize, xi: &BitString) -> StateVector {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut amps = vec![Complex64::from_polar(1.0, PI * xi.slice(1, m).reversed().binary_fraction(true))];
    for l in m + 1..=qubits {
        let factor = if xi.bit(l) { [zero, one] } else { [one, zero] };
        amps = kron(&amps, &factor);
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for t in 1..=m {
        let theta = 2.0 * PI * xi.slice(1, t).reversed().binary_fraction(true);
        amps = kron(&amps, &[Complex64::new(h, 0.0), Complex64::from_polar(h, theta)]);
    }
    StateVector::from_amplitudes(amps)
}

fn kron(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Phase-space cell of a basis state: centers `(q, p)` and widths `(Δq, Δp)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Localization {
    pub q: f64,
    pub p: f64,
    pub dq: f64,
    pub dp: f64,
}

/// `q = 0.ξ_{m+1}…ξ_N1`, `Δq = 2^{-(N-m)}`, `p = 0.ξ_m…ξ_11`, `Δp = 2^{-m}`.
pub fn localization_centers(shape: &SystemShape, m: usize, xi: &BitString) -> Result<Localization> {
    check_label(shape, m, xi)?;
    let n = shape.qubits();
    if m == 0 || m >= n {
        return Err(Error::invalid(format!("localization needs 1 <= m <= N - 1, got m = {m}")));
    }
    Ok(Localization {
        q: xi.slice(m + 1, n).binary_fraction(true),
        p: xi.slice(1, m).reversed().binary_fraction(true),
        dq: 0.5f64.powi((n - m) as i32),
        dp: 0.5f64.powi(m as i32),
    })
}

/// Change of basis between computational coordinates and the labels of the
/// dot-`m` basis, in `O(N 2^N)` operations.
///
/// `synthesize` maps label coefficients `c` to `Σ_ξ c_ξ |ξ⟩`; `analyze` is its
/// inverse (and adjoint).
#[derive(Clone)]
pub struct BasisTransform {
    qubits: usize,
    dot: usize,
    // e^{iπk/M}, applied to coefficients before the inverse FFT
    pre: Vec<Complex64>,
    // e^{iπ(b+½)/M}/√M, applied after it
    post: Vec<Complex64>,
    // momentum index k -> integer value of ξ_1…ξ_m
    rev: Vec<usize>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for BasisTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BasisTransform").field("qubits", &self.qubits).field("dot", &self.dot).finish()
    }
}

impl BasisTransform {
    pub fn new(shape: &SystemShape, m: usize) -> Result<Self> {
        let mut planner = FftPlanner::new();
        Self::with_planner(shape, m, &mut planner)
    }

    pub(crate) fn with_planner(shape: &SystemShape, m: usize, planner: &mut FftPlanner<f64>) -> Result<Self> {
        if m > shape.qubits() {
            return Err(Error::invalid(format!("dot position {m} exceeds N = {}", shape.qubits())));
        }
        let modes = 1usize << m;
        let mf = modes as f64;
        let scale = 1.0 / mf.sqrt();
        Ok(BasisTransform {
            qubits: shape.qubits(),
            dot: m,
            pre: (0..modes).map(|k| Complex64::from_polar(1.0, PI * k as f64 / mf)).collect(),
            post: (0..modes).map(|b| Complex64::from_polar(scale, PI * (b as f64 + 0.5) / mf)).collect(),
            rev: (0..modes).map(|k| reverse_bits(k as u64, m) as usize).collect(),
            forward: planner.plan_fft_forward(modes),
            inverse: planner.plan_fft_inverse(modes),
        })
    }

    pub fn dot(&self) -> usize {
        self.dot
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    /// Scratch length needed by the `*_into` methods.
    pub fn scratch_len(&self) -> usize {
        self.forward.get_inplace_scratch_len().max(self.inverse.get_inplace_scratch_len())
    }

    pub fn synthesize(&self, coeffs: &StateVector) -> Result<StateVector> {
        self.check(coeffs)?;
        let mut out = StateVector::zeros(self.dim());
        let mut scratch = vec![Complex64::default(); self.scratch_len()];
        self.synthesize_into(coeffs.amplitudes(), out.amplitudes_mut(), &mut scratch);
        Ok(out)
    }

    pub fn analyze(&self, state: &StateVector) -> Result<StateVector> {
        self.check(state)?;
        let mut out = StateVector::zeros(self.dim());
        let mut work = state.amplitudes().to_vec();
        let mut scratch = vec![Complex64::default(); self.scratch_len()];
        self.analyze_into(&mut work, out.amplitudes_mut(), &mut scratch);
        Ok(out)
    }

    /// Label coefficients in `coeffs` to computational amplitudes in `out`.
    pub(crate) fn synthesize_into(&self, coeffs: &[Complex64], out: &mut [Complex64], scratch: &mut [Complex64]) {
        let modes = self.pre.len();
        let positions = self.dim() / modes;
        // label index = a * positions + pos, with a = ξ_1…ξ_m; computational index = pos * modes + b
        for k in 0..modes {
            let a = self.rev[k];
            let row = &coeffs[a * positions..(a + 1) * positions];
            let pre = self.pre[k];
            for (pos, c) in row.iter().enumerate() {
                out[pos * modes + k] = c * pre;
            }
        }
        if modes > 1 {
            self.inverse.process_with_scratch(out, scratch);
        }
        for chunk in out.chunks_exact_mut(modes) {
            chunk.iter_mut().zip(&self.post).for_each(|(v, p)| *v *= p);
        }
    }

    /// Computational amplitudes in `work` (overwritten) to label coefficients in `out`.
    pub(crate) fn analyze_into(&self, work: &mut [Complex64], out: &mut [Complex64], scratch: &mut [Complex64]) {
        let modes = self.pre.len();
        let positions = self.dim() / modes;
        for chunk in work.chunks_exact_mut(modes) {
            chunk.iter_mut().zip(&self.post).for_each(|(v, p)| *v *= p.conj());
        }
        if modes > 1 {
            self.forward.process_with_scratch(work, scratch);
        }
        for k in 0..modes {
            let a = self.rev[k];
            let row = &mut out[a * positions..(a + 1) * positions];
            let pre = self.pre[k].conj();
            for (pos, c) in row.iter_mut().enumerate() {
                *c = work[pos * modes + k] * pre;
            }
        }
    }

    fn check(&self, v: &StateVector) -> Result<()> {
        if v.dim() != self.dim() {
            return Err(Error::invalid(format!("dimension mismatch: {} vs {}", v.dim(), self.dim())));
        }
        Ok(())
    }
}

/// Label coordinates `⟨ξ|ψ⟩` of `state` in the dot-`m` basis.
pub fn analyze(state: &StateVector, shape: &SystemShape, m: usize) -> Result<StateVector> {
    BasisTransform::new(shape, m)?.analyze(state)
}

/// `Σ_ξ c_ξ |ξ⟩` in the dot-`m` basis.
pub fn synthesize(coeffs: &StateVector, shape: &SystemShape, m: usize) -> Result<StateVector> {
    BasisTransform::new(shape, m)?.synthesize(coeffs)
}

//! Coarse-graining projectors `P_y^{(l,r)}` and block initial states.
//!
//! A projector keeps the middle `c = N - l - r` bits of a dot-`n` label equal
//! to `y` and ignores the `l` leftmost (momentum) and `r` rightmost (position)
//! bits. In label coordinates it is an index mask.

use std::fmt;

use crate::bits::{mask, BitString};
use crate::error::{Error, Result};
use crate::shape::SystemShape;
use crate::state::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct CoarseGraining {
    shape: SystemShape,
    left: usize,
    right: usize,
}

impl CoarseGraining {
    /// Requires `l < n`, `r < N - n`; the kept width is then at least one.
    pub fn new(shape: SystemShape, left: usize, right: usize) -> Result<Self> {
        check_window(&shape, left, right)?;
        Ok(CoarseGraining { shape, left, right })
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    /// `l`.
    pub fn left(&self) -> usize {
        self.left
    }

    /// `r`.
    pub fn right(&self) -> usize {
        self.right
    }

    /// Kept width `c = N - l - r`.
    pub fn width(&self) -> usize {
        self.shape.qubits() - self.left - self.right
    }

    pub fn outcomes(&self) -> usize {
        1 << self.width()
    }

    /// Middle bits `l+1..l+c` of the label with index `label`.
    #[inline]
    pub fn window(&self, label: usize) -> usize {
        (label >> self.right) & mask(self.width()) as usize
    }

    pub fn window_string(&self, label: &BitString) -> Result<BitString> {
        if label.len() != self.shape.qubits() {
            return Err(Error::invalid(format!("label has {} bits, expected {}", label.len(), self.shape.qubits())));
        }
        Ok(label.slice(self.left + 1, self.left + self.width()))
    }

    fn check_outcome(&self, y: &BitString) -> Result<()> {
        if y.len() != self.width() {
            return Err(Error::invalid(format!("string \"{y}\" has {} bits, kept width is {}", y.len(), self.width())));
        }
        Ok(())
    }
}

impl fmt::Display for CoarseGraining {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(l={}, r={}, c={})", self.left, self.right, self.width())
    }
}

fn check_window(shape: &SystemShape, l: usize, r: usize) -> Result<()> {
    let (n_qubits, n) = (shape.qubits(), shape.dot());
    if l >= n {
        return Err(Error::ParameterViolation(format!("l < n violated (l = {l}, n = {n})")));
    }
    if r >= n_qubits - n {
        return Err(Error::ParameterViolation(format!("r < N - n violated (r = {r}, N - n = {})", n_qubits - n)));
    }
    Ok(())
}

/// `P_y` applied to dot-`n` label coefficients.
pub fn project(coeffs: &StateVector, cg: &CoarseGraining, y: &BitString) -> Result<StateVector> {
    cg.check_outcome(y)?;
    if coeffs.dim() != cg.shape.dim() {
        return Err(Error::invalid(format!("dimension mismatch: {} vs {}", coeffs.dim(), cg.shape.dim())));
    }
    let target = y.index() as usize;
    let mut out = coeffs.clone();
    for (label, a) in out.amplitudes_mut().iter_mut().enumerate() {
        if cg.window(label) != target {
            *a = Default::default();
        }
    }
    Ok(out)
}

/// All labels `a·x·b` with `|a| = l`, `|b| = r`, ordered by `a` then `b`.
pub fn enumerate_block(cg: &CoarseGraining, x: &BitString) -> Result<Vec<BitString>> {
    cg.check_outcome(x)?;
    pad_string(cg.left, x, cg.right)
}

/// Every string `a·x·b` with `|a| = left` and `|b| = right`, `a`-major and
/// lexicographic. No dot constraint applies here.
pub fn pad_string(left: usize, x: &BitString, right: usize) -> Result<Vec<BitString>> {
    let n = left + x.len() + right;
    if n > 32 {
        return Err(Error::invalid(format!("padded length {n} too long to enumerate")));
    }
    let base = (x.index() as usize) << right;
    (0..1usize << left)
        .flat_map(|a| (0..1usize << right).map(move |b| (a << (n - left)) | base | b))
        .map(|i| BitString::from_index(i as u64, n))
        .collect()
}

/// Checks `l < n`, `r < N - n` and `1 <= k < r`, naming the first violated inequality.
pub fn validate_run(cg: &CoarseGraining, steps: usize) -> Result<()> {
    check_window(&cg.shape, cg.left, cg.right)?;
    if steps == 0 {
        return Err(Error::ParameterViolation("k >= 1 violated (k = 0)".into()));
    }
    if steps >= cg.right {
        return Err(Error::ParameterViolation(format!("k < r violated (k = {steps}, r = {})", cg.right)));
    }
    Ok(())
}

/// Validates the raw integers `N, n, l, r, k` in one go.
pub fn validate_parameters(
    qubits: usize,
    dot: usize,
    left: usize,
    right: usize,
    steps: usize,
) -> Result<CoarseGraining> {
    let shape = SystemShape::new(qubits, dot).map_err(|e| match e {
        Error::InvalidArgument(msg) => Error::ParameterViolation(msg),
        other => other,
    })?;
    if left + right >= qubits {
        return Err(Error::ParameterViolation(format!("l + r < N violated (l + r = {}, N = {qubits})", left + right)));
    }
    let cg = CoarseGraining::new(shape, left, right)?;
    validate_run(&cg, steps)?;
    Ok(cg)
}

/// `ρ₀ = 2^{-(l+r)} P_x`, held as the uniform ensemble of its basis labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockInitialState {
    cg: CoarseGraining,
    x: BitString,
}

impl BlockInitialState {
    pub fn new(cg: CoarseGraining, x: BitString) -> Result<Self> {
        cg.check_outcome(&x)?;
        Ok(BlockInitialState { cg, x })
    }

    pub fn coarse_graining(&self) -> &CoarseGraining {
        &self.cg
    }

    pub fn x(&self) -> &BitString {
        &self.x
    }

    /// Weight `2^{-(l+r)}` of each pure component.
    pub fn weight(&self) -> f64 {
        0.5f64.powi((self.cg.left + self.cg.right) as i32)
    }

    pub fn labels(&self) -> Vec<BitString> {
        enumerate_block(&self.cg, &self.x).expect("x length checked at construction")
    }
}

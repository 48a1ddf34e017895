//! Coarse-grained histories of the baker's map: branch propagation of the
//! block initial state, decoherence functionals for full and coarse histories,
//! history probabilities and entropies, and the leading-order predictions of the
//! two asymptotic theorems.

mod entropy;
mod functional;
mod oracle;
mod propagate;

pub use entropy::{entropy_bits, shannon_entropy_bits};
pub use functional::{
    coarse_dfunc, coarse_from_branches, coarse_offdiagonal_max, full_dfunc, history_distribution, offdiagonal_norm,
    HistoryDistribution, NormMode,
};
pub use oracle::{is_shift_consistent, theorem1_value, theorem2_value};
pub use propagate::{
    propagate_branches, BranchEnsemble, EnsembleParams, LabelReduction, LabelSummary, PropagationOptions,
};

use std::fmt;

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Which family of histories a distribution or functional refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HistoryKind {
    /// `(P_{y^1}, …, P_{y^k})`.
    Full,
    /// `(1, …, 1, P_y)`.
    Coarse,
}

/// A full history `y⃗ = (y^1, …, y^k)`, every entry of the kept width.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FullHistory {
    steps: Vec<BitString>,
}

impl FullHistory {
    pub fn new(steps: Vec<BitString>) -> Result<Self> {
        let width = steps.first().map(|s| s.len()).ok_or_else(|| Error::invalid("a history needs k >= 1 steps"))?;
        if steps.iter().any(|s| s.len() != width) {
            return Err(Error::invalid("all history entries must have the same width"));
        }
        if width * steps.len() > 63 {
            return Err(Error::invalid("history too long to encode (c * k > 63)"));
        }
        Ok(FullHistory { steps })
    }

    /// Parses `"01;11;10"`.
    pub fn parse(s: &str) -> Result<Self> {
        Self::new(s.split(';').map(str::parse).collect::<Result<Vec<_>>>()?)
    }

    /// Inverse of [`FullHistory::code`].
    pub fn from_code(code: u64, width: usize, steps: usize) -> Result<Self> {
        let m = crate::bits::mask(width);
        Self::new(
            (0..steps)
                .map(|j| BitString::from_index((code >> (width * (steps - 1 - j))) & m, width))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn steps(&self) -> &[BitString] {
        &self.steps
    }

    /// `k`.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn width(&self) -> usize {
        self.steps[0].len()
    }

    pub fn last(&self) -> &BitString {
        self.steps.last().expect("non-empty")
    }

    /// Concatenated MSB-first index of `y^1 … y^k`; lexicographic order of paths.
    pub fn code(&self) -> u64 {
        self.steps.iter().fold(0, |acc, s| (acc << s.len()) | s.index())
    }
}

impl fmt::Display for FullHistory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// `h^c_y`: identities for the first `k - 1` steps, then `P_y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoarseHistory {
    pub steps: usize,
    pub y: BitString,
}

impl CoarseHistory {
    pub fn new(steps: usize, y: BitString) -> Self {
        CoarseHistory { steps, y }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn history_codes() {
        let h = FullHistory::parse("01;11;10").unwrap();
        assert_eq!(h.code(), 0b01_11_10);
        assert_eq!(h.to_string(), "01;11;10");
        assert_eq!(FullHistory::from_code(0b011110, 2, 3).unwrap(), h);
        assert!(FullHistory::parse("01;1").is_err());
        assert!(FullHistory::new(vec![]).is_err());
    }
}

use crate::error::{Error, Result};

/// Default ceiling on the qubit count.
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// Qubit count `N`, dot position `n`, and the Hilbert-space dimension `D = 2^N`.
///
/// The phase-space cell is `2πħ = 1/D`; nothing downstream needs ħ explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct SystemShape {
    qubits: usize,
    dot: usize,
}

impl SystemShape {
    /// `1 <= qubits <= 24` and `dot <= qubits - 1`.
    pub fn new(qubits: usize, dot: usize) -> Result<Self> {
        Self::with_max_qubits(qubits, dot, DEFAULT_MAX_QUBITS)
    }

    pub fn with_max_qubits(qubits: usize, dot: usize, max_qubits: usize) -> Result<Self> {
        if qubits == 0 || qubits > max_qubits.min(usize::BITS as usize - 2) {
            return Err(Error::invalid(format!("qubit count {qubits} outside 1..={max_qubits}")));
        }
        if dot >= qubits {
            return Err(Error::invalid(format!("dot position {dot} must be at most N - 1 = {}", qubits - 1)));
        }
        Ok(SystemShape { qubits, dot })
    }

    /// `N`.
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    /// `n`: number of momentum bits to the left of the dot.
    pub fn dot(&self) -> usize {
        self.dot
    }

    /// `D = 2^N`.
    pub fn dim(&self) -> usize {
        1 << self.qubits
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert_eq!(SystemShape::new(3, 2).unwrap().dim(), 8);
        assert!(SystemShape::new(3, 3).is_err());
        assert!(SystemShape::new(0, 0).is_err());
        assert!(SystemShape::new(25, 3).is_err());
        assert!(SystemShape::with_max_qubits(25, 3, 30).is_ok());
        assert!(SystemShape::with_max_qubits(9, 3, 8).is_err());
    }
}

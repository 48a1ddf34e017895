use num_complex::Complex64;

use super::{BranchEnsemble, CoarseHistory, EnsembleParams, FullHistory, HistoryKind};
use crate::bits::BitString;
use crate::error::{Error, Result};

/// Diagonal values down to this are clipped to zero; anything more negative is an error.
const NEGATIVE_TOLERANCE: f64 = 1e-12;
/// Allowed defect in `Σp + discarded = 1`.
const CONSERVATION_TOLERANCE: f64 = 1e-9;
/// Cap on history pairs visited by [`offdiagonal_norm`].
const MAX_PAIRS: usize = 1 << 28;

/// `D[ρ₀, h_y⃗, h_z⃗] = 2^{-(l+r)} Σ_s ⟨C_z⃗ s, C_y⃗ s⟩`. Pruned branches count as zero.
pub fn full_dfunc(ensemble: &BranchEnsemble, y: &FullHistory, z: &FullHistory) -> Result<Complex64> {
    check_full(ensemble, y)?;
    check_full(ensemble, z)?;
    Ok(ensemble.full_entry(y.code(), z.code()))
}

/// `Tr[P_y B̂^k ρ₀ B̂^{†k} P_z]`.
pub fn coarse_dfunc(ensemble: &BranchEnsemble, y: &CoarseHistory, z: &CoarseHistory) -> Result<Complex64> {
    check_coarse(ensemble, y)?;
    check_coarse(ensemble, z)?;
    Ok(ensemble.coarse_entry(y.y.index() as usize, z.y.index() as usize))
}

fn check_full(ensemble: &BranchEnsemble, h: &FullHistory) -> Result<()> {
    if h.len() != ensemble.steps() || h.width() != ensemble.width() {
        return Err(Error::invalid(format!(
            "history {h} has k = {}, c = {}; ensemble has k = {}, c = {}",
            h.len(),
            h.width(),
            ensemble.steps(),
            ensemble.width()
        )));
    }
    Ok(())
}

fn check_coarse(ensemble: &BranchEnsemble, h: &CoarseHistory) -> Result<()> {
    if h.steps != ensemble.steps() || h.y.len() != ensemble.width() {
        return Err(Error::invalid(format!(
            "coarse history ({}, {}) does not match ensemble k = {}, c = {}",
            h.steps,
            h.y,
            ensemble.steps(),
            ensemble.width()
        )));
    }
    Ok(())
}

/// Diagonal functional values read as probabilities.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct HistoryDistribution {
    pub kind: HistoryKind,
    pub steps: usize,
    pub width: usize,
    /// `(path code, p)` in lexicographic path order.
    pub entries: Vec<(u64, f64)>,
    pub discarded_mass: f64,
    pub params: EnsembleParams,
}

impl HistoryDistribution {
    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|&(_, p)| p)
    }

    pub fn total(&self) -> f64 {
        self.probabilities().sum()
    }

    /// `|Σp + discarded - 1|`.
    pub fn conservation_defect(&self) -> f64 {
        (self.total() + self.discarded_mass - 1.0).abs()
    }

    /// Path of an entry code; coarse histories have a single entry.
    pub fn path(&self, code: u64) -> FullHistory {
        let steps = match self.kind {
            HistoryKind::Full => self.steps,
            HistoryKind::Coarse => 1,
        };
        FullHistory::from_code(code, self.width, steps).expect("codes come from the ensemble")
    }

    pub fn probability(&self, code: u64) -> f64 {
        self.entries.binary_search_by_key(&code, |&(c, _)| c).map_or(0.0, |i| self.entries[i].1)
    }

    /// Entries with `p > threshold`.
    pub fn supported(&self, threshold: f64) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.entries.iter().copied().filter(move |&(_, p)| p > threshold)
    }
}

/// Probabilities of the retained full histories, or of all `2^c` coarse histories.
pub fn history_distribution(ensemble: &BranchEnsemble, kind: HistoryKind) -> Result<HistoryDistribution> {
    let raw: Vec<(u64, f64)> = match kind {
        HistoryKind::Full => ensemble.retained_paths().map(|c| (c, ensemble.full_entry(c, c).re)).collect(),
        HistoryKind::Coarse => {
            (0..ensemble.coarse_graining().outcomes()).map(|y| (y as u64, ensemble.coarse_entry(y, y).re)).collect()
        }
    };
    let mut entries = Vec::with_capacity(raw.len());
    for (code, p) in raw {
        if p < -NEGATIVE_TOLERANCE {
            return Err(Error::InvariantViolation(format!("negative diagonal functional value {p:e}")));
        }
        entries.push((code, p.max(0.0)));
    }
    let discarded_mass = match kind {
        HistoryKind::Full => ensemble.discarded_mass(),
        // computed from the unpruned evolution
        HistoryKind::Coarse => 0.0,
    };
    let dist = HistoryDistribution {
        kind,
        steps: ensemble.steps(),
        width: ensemble.width(),
        entries,
        discarded_mass,
        params: ensemble.params().clone(),
    };
    if dist.conservation_defect() > CONSERVATION_TOLERANCE {
        return Err(Error::InvariantViolation(format!(
            "probabilities sum to {} with discarded mass {}",
            dist.total(),
            dist.discarded_mass
        )));
    }
    Ok(dist)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMode {
    Max,
    Rms,
}

/// Max or root-mean-square of `|D[y⃗, z⃗]|` over ordered pairs `y⃗ ≠ z⃗` of
/// retained full histories.
pub fn offdiagonal_norm(ensemble: &BranchEnsemble, mode: NormMode) -> Result<f64> {
    let paths: Vec<u64> = ensemble.retained_paths().collect();
    let pairs = paths.len().saturating_mul(paths.len().saturating_sub(1));
    if pairs > MAX_PAIRS {
        return Err(Error::ResourceLimit(format!("{pairs} history pairs exceed the limit of {MAX_PAIRS}")));
    }
    if pairs == 0 {
        return Ok(0.0);
    }
    let mut max = 0.0f64;
    let mut sum_sq = 0.0;
    for &y in &paths {
        for &z in &paths {
            if y != z {
                let v = ensemble.full_entry(y, z).norm();
                max = max.max(v);
                sum_sq += v * v;
            }
        }
    }
    Ok(match mode {
        NormMode::Max => max,
        NormMode::Rms => (sum_sq / pairs as f64).sqrt(),
    })
}

/// Largest `|D^c[y, z]|` over `y ≠ z`.
pub fn coarse_offdiagonal_max(ensemble: &BranchEnsemble) -> f64 {
    let n = ensemble.coarse_graining().outcomes();
    let mut max = 0.0f64;
    for y in 0..n {
        for z in (0..n).filter(|&z| z != y) {
            max = max.max(ensemble.coarse_entry(y, z).norm());
        }
    }
    max
}

/// Coarse functional assembled from full-history branches, for the sum rule check.
pub fn coarse_from_branches(ensemble: &BranchEnsemble, y: &BitString, z: &BitString) -> Result<Complex64> {
    let c = ensemble.width();
    if y.len() != c || z.len() != c {
        return Err(Error::invalid(format!("coarse strings must have width {c}")));
    }
    Ok(ensemble.coarse_entry_from_branches(y, z))
}

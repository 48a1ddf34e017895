use super::functional::HistoryDistribution;

/// Probabilities below this are left out of entropy sums.
const NEGLIGIBLE: f64 = 1e-15;

/// `-Σ p log₂ p` with `0 log 0 = 0`.
pub fn shannon_entropy_bits(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs.into_iter().filter(|&p| p >= NEGLIGIBLE).map(|p| -p * p.log2()).sum()
}

/// Entropy of the retained probabilities; discarded mass is not folded in.
pub fn entropy_bits(dist: &HistoryDistribution) -> f64 {
    shannon_entropy_bits(dist.probabilities())
}

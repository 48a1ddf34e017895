//! Branch propagation of the block initial state.
//!
//! Each label `s` of the initial block is evolved in dot-`n` label coordinates.
//! After every step the vector is split into its `2^c` projector components;
//! components with squared norm below `prune_eps` are dropped and their mass
//! recorded. The surviving branch for path `y⃗` is `P_{y^k} B̂ ⋯ P_{y^1} B̂ |s⟩`.
//!
//! Branch vectors are reduced on the fly into the decoherence functional: only
//! branches that end in the same outcome can overlap, so per label we take
//! inner products within each final-outcome group and drop the vectors.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::baker::BakerMap;
use crate::bits::BitString;
use crate::coarse::{validate_run, BlockInitialState, CoarseGraining};
use crate::error::{Error, Result};
use crate::state::{dot_slices, StateVector};

/// How initial labels are enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelReduction {
    /// Every one of the `2^{l+r}` labels `a·x·b`.
    None,
    /// Labels differing only in the last `r - k` position bits give
    /// relabelled copies of the same branches: those bits move left one place
    /// per step, never reach the kept window or the dot within `k < r` steps.
    /// One representative per class is propagated with weight `2^{r-k}`.
    Spectators,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationOptions {
    /// Squared-norm threshold below which a branch is discarded.
    pub prune_eps: f64,
    /// Worker threads; `None` uses every available core.
    pub threads: Option<usize>,
    /// Upper bound on live branch storage across workers, in bytes.
    pub memory_budget: usize,
    /// Retain every surviving branch vector in the ensemble (small systems only).
    pub keep_branches: bool,
    pub reduction: LabelReduction,
    /// Split into full-history branches. When off only the coarse functional is built.
    pub full_histories: bool,
}

impl Default for PropagationOptions {
    fn default() -> Self {
        PropagationOptions {
            prune_eps: 1e-12,
            threads: None,
            memory_budget: 2 << 30,
            keep_branches: false,
            reduction: LabelReduction::Spectators,
            full_histories: true,
        }
    }
}

impl PropagationOptions {
    /// No pruning and full label enumeration.
    pub fn exact() -> Self {
        PropagationOptions { prune_eps: 0.0, reduction: LabelReduction::None, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EnsembleParams {
    pub coarse_graining: CoarseGraining,
    pub x: BitString,
    pub steps: usize,
    pub prune_eps: f64,
    pub reduction: LabelReduction,
}

/// Bookkeeping for one propagated initial label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelSummary {
    pub label: BitString,
    /// Number of initial labels this one stands for.
    pub multiplicity: usize,
    pub retained_paths: usize,
    pub retained_norm: f64,
    pub discarded: f64,
}

/// Result of propagating every label of the initial block through `k` steps.
#[derive(Debug, Clone)]
pub struct BranchEnsemble {
    params: EnsembleParams,
    // (y, z) -> D[y, z], only pairs sharing a final outcome (others vanish)
    full: BTreeMap<(u64, u64), Complex64>,
    paths: BTreeSet<u64>,
    // D^c[y, z] from B̂^k ρ₀ B̂^{†k}, row-major over outcomes
    coarse: Vec<Complex64>,
    // the same quantity rebuilt by summing retained branches over intermediate steps
    coarse_from_branches: Vec<Complex64>,
    discarded_mass: f64,
    labels: Vec<LabelSummary>,
    branches: Option<Vec<(BitString, BTreeMap<u64, StateVector>)>>,
}

struct LabelResult {
    summary: LabelSummary,
    full: Vec<(u64, u64, Complex64)>,
    coarse: Vec<Complex64>,
    coarse_from_branches: Vec<Complex64>,
    branches: Option<BTreeMap<u64, StateVector>>,
}

/// Propagates `ρ₀ = 2^{-(l+r)} P_x` through `k` steps of the map.
pub fn propagate_branches(
    cg: &CoarseGraining,
    x: &BitString,
    steps: usize,
    options: &PropagationOptions,
) -> Result<BranchEnsemble> {
    validate_run(cg, steps)?;
    let initial = BlockInitialState::new(*cg, *x)?;
    if options.prune_eps.is_nan() || options.prune_eps < 0.0 {
        return Err(Error::invalid(format!("prune_eps must be >= 0, got {}", options.prune_eps)));
    }
    let width = cg.width();
    if options.full_histories && width * steps > 62 {
        return Err(Error::ResourceLimit(format!("c * k = {} exceeds the 62-bit path encoding", width * steps)));
    }
    let threads = options.threads.unwrap_or_else(rayon::current_num_threads).max(1);
    let dim = cg.shape().dim();
    let live = if options.full_histories { 1u128 << (width * steps) } else { 1 };
    let bytes_per_worker = live * dim as u128 * 16 * 2;
    let workers = threads.min(initial.labels().len()) as u128;
    if bytes_per_worker * workers > options.memory_budget as u128 {
        return Err(Error::ResourceLimit(format!(
            "up to 2^{} branches of dimension {dim} on {workers} workers need {} MiB, budget is {} MiB; \
             lower N, c or k, or raise the budget",
            width * steps,
            (bytes_per_worker * workers) >> 20,
            options.memory_budget >> 20
        )));
    }

    let (labels, multiplicity) = representatives(&initial, steps, options.reduction);
    if options.keep_branches {
        let total = labels.len() as u128 * (1u128 << (width * steps)) * dim as u128 * 16;
        if total > options.memory_budget as u128 {
            return Err(Error::ResourceLimit(format!(
                "keeping every branch needs up to {} MiB, budget is {} MiB",
                total >> 20,
                options.memory_budget >> 20
            )));
        }
    }

    let map = BakerMap::new(*cg.shape())?;
    let run = |s: &BitString| propagate_label(&map, cg, s, steps, options, multiplicity);
    let results: Vec<LabelResult> = if threads == 1 {
        labels.iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::ResourceLimit(format!("cannot start worker pool: {e}")))?;
        pool.install(|| labels.par_iter().map(run).collect())
    };

    // Fixed label order, so sums do not depend on the thread count.
    let weight = initial.weight() * multiplicity as f64;
    let outcomes = cg.outcomes();
    let mut full = BTreeMap::new();
    let mut paths = BTreeSet::new();
    let mut coarse = vec![Complex64::default(); outcomes * outcomes];
    let mut coarse_from_branches = coarse.clone();
    let mut discarded_mass = 0.0;
    let mut summaries = Vec::with_capacity(results.len());
    let mut kept = options.keep_branches.then(Vec::new);
    for r in results {
        for (y, z, v) in r.full {
            paths.insert(y);
            *full.entry((y, z)).or_insert_with(Complex64::default) += v * weight;
        }
        for (acc, v) in coarse.iter_mut().zip(&r.coarse) {
            *acc += v * weight;
        }
        for (acc, v) in coarse_from_branches.iter_mut().zip(&r.coarse_from_branches) {
            *acc += v * weight;
        }
        discarded_mass += r.summary.discarded * weight;
        if let (Some(kept), Some(b)) = (kept.as_mut(), r.branches) {
            kept.push((r.summary.label, b));
        }
        summaries.push(r.summary);
    }

    Ok(BranchEnsemble {
        params: EnsembleParams {
            coarse_graining: *cg,
            x: *x,
            steps,
            prune_eps: options.prune_eps,
            reduction: options.reduction,
        },
        full,
        paths,
        coarse,
        coarse_from_branches,
        discarded_mass,
        labels: summaries,
        branches: kept,
    })
}

fn representatives(initial: &BlockInitialState, steps: usize, reduction: LabelReduction) -> (Vec<BitString>, usize) {
    let cg = initial.coarse_graining();
    match reduction {
        LabelReduction::None => (initial.labels(), 1),
        LabelReduction::Spectators => {
            let spectators = cg.right() - steps;
            let reps =
                initial.labels().into_iter().filter(|s| s.index() & crate::bits::mask(spectators) == 0).collect();
            (reps, 1 << spectators)
        }
    }
}

fn propagate_label(
    map: &BakerMap,
    cg: &CoarseGraining,
    label: &BitString,
    steps: usize,
    options: &PropagationOptions,
    multiplicity: usize,
) -> LabelResult {
    let prune_eps = options.prune_eps;
    let dim = cg.shape().dim();
    let width = cg.width();
    let outcomes = cg.outcomes();
    let mut ws = map.workspace();
    let mut evolved = vec![Complex64::default(); dim];

    let start = label.index() as usize;
    let mut unit = vec![Complex64::default(); dim];
    unit[start] = Complex64::new(1.0, 0.0);

    // Unprojected evolution B̂^k|s⟩ for the coarse functional.
    let mut free = unit.clone();
    for _ in 0..steps {
        map.transfer_into(&free, &mut evolved, &mut ws);
        std::mem::swap(&mut free, &mut evolved);
    }
    let coarse = outer_gram(cg, &free);
    if !options.full_histories {
        let norm: f64 = free.iter().map(|a| a.norm_sqr()).sum();
        return LabelResult {
            summary: LabelSummary {
                label: *label,
                multiplicity,
                retained_paths: 0,
                retained_norm: norm,
                discarded: 0.0,
            },
            full: Vec::new(),
            coarse,
            coarse_from_branches: vec![Complex64::default(); outcomes * outcomes],
            branches: None,
        };
    }

    let mut branches: Vec<(u64, Vec<Complex64>)> = vec![(0, unit)];
    let mut discarded = 0.0;
    let mut norms = vec![0.0; outcomes];
    for _ in 0..steps {
        let mut next = Vec::with_capacity(branches.len() * outcomes);
        for (code, v) in branches {
            map.transfer_into(&v, &mut evolved, &mut ws);
            norms.iter_mut().for_each(|n| *n = 0.0);
            for (i, a) in evolved.iter().enumerate() {
                norms[cg.window(i)] += a.norm_sqr();
            }
            for (y, &mass) in norms.iter().enumerate() {
                if mass < prune_eps {
                    discarded += mass;
                    continue;
                }
                let mut part = vec![Complex64::default(); dim];
                for_window(cg, y, |range| part[range.clone()].copy_from_slice(&evolved[range]));
                next.push(((code << width) | y as u64, part));
            }
        }
        branches = next;
    }

    let mask = crate::bits::mask(width);
    let mut full = Vec::new();
    let mut retained_norm = 0.0;
    let mut sums = vec![vec![Complex64::default(); dim]; outcomes];
    for (y, sum) in sums.iter_mut().enumerate() {
        let group: Vec<&(u64, Vec<Complex64>)> = branches.iter().filter(|(c, _)| (c & mask) as usize == y).collect();
        for (i, (ci, bi)) in group.iter().enumerate() {
            for (cj, bj) in &group[i..] {
                let mut g = Complex64::default();
                for_window(cg, y, |range| g += dot_slices(&bj[range.clone()], &bi[range]));
                full.push((*ci, *cj, g));
                if ci != cj {
                    full.push((*cj, *ci, g.conj()));
                } else {
                    retained_norm += g.re;
                }
            }
            for_window(cg, y, |range| sum[range.clone()].iter_mut().zip(&bi[range]).for_each(|(s, b)| *s += b));
        }
    }
    let summed: Vec<Complex64> = sums.into_iter().flatten().collect();
    let coarse_from_branches = grouped_gram(&summed, dim, outcomes);

    LabelResult {
        summary: LabelSummary { label: *label, multiplicity, retained_paths: branches.len(), retained_norm, discarded },
        full,
        coarse,
        coarse_from_branches,
        branches: options
            .keep_branches
            .then(|| branches.into_iter().map(|(c, v)| (c, StateVector::from_amplitudes(v))).collect()),
    }
}

/// Calls `f` with each contiguous index range whose labels have window `y`.
fn for_window(cg: &CoarseGraining, y: usize, mut f: impl FnMut(std::ops::Range<usize>)) {
    let run = 1usize << cg.right();
    let stride = run << cg.width();
    let offset = y * run;
    for hi in 0..1usize << cg.left() {
        let start = hi * stride + offset;
        f(start..start + run);
    }
}

/// `G[y, z] = ⟨P_z v, P_y v⟩` over all outcome pairs.
fn outer_gram(cg: &CoarseGraining, v: &[Complex64]) -> Vec<Complex64> {
    let outcomes = cg.outcomes();
    let dim = v.len();
    let mut parts = vec![Complex64::default(); dim * outcomes];
    for y in 0..outcomes {
        for_window(cg, y, |range| parts[y * dim + range.start..y * dim + range.end].copy_from_slice(&v[range]));
    }
    grouped_gram(&parts, dim, outcomes)
}

/// Gram matrix of `outcomes` consecutive vectors of length `dim`, `G[y, z] = ⟨v_z, v_y⟩`.
fn grouped_gram(vectors: &[Complex64], dim: usize, outcomes: usize) -> Vec<Complex64> {
    let mut g = vec![Complex64::default(); outcomes * outcomes];
    for y in 0..outcomes {
        for z in 0..outcomes {
            g[y * outcomes + z] = dot_slices(&vectors[z * dim..(z + 1) * dim], &vectors[y * dim..(y + 1) * dim]);
        }
    }
    g
}

impl BranchEnsemble {
    pub fn params(&self) -> &EnsembleParams {
        &self.params
    }

    pub fn coarse_graining(&self) -> &CoarseGraining {
        &self.params.coarse_graining
    }

    pub fn steps(&self) -> usize {
        self.params.steps
    }

    pub fn width(&self) -> usize {
        self.params.coarse_graining.width()
    }

    /// Codes of every path retained for at least one label, in lexicographic order.
    pub fn retained_paths(&self) -> impl Iterator<Item = u64> + '_ {
        self.paths.iter().copied()
    }

    pub fn retained_path_count(&self) -> usize {
        self.paths.len()
    }

    /// Pruned probability mass, weighted as in `ρ₀`.
    pub fn discarded_mass(&self) -> f64 {
        self.discarded_mass
    }

    pub fn labels(&self) -> &[LabelSummary] {
        &self.labels
    }

    /// Largest `|Σ‖branch‖² + discarded - 1|` over propagated labels.
    pub fn max_label_defect(&self) -> f64 {
        self.labels.iter().map(|l| (l.retained_norm + l.discarded - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Surviving branch vectors per initial label, when they were kept.
    pub fn branches(&self) -> Option<&[(BitString, BTreeMap<u64, StateVector>)]> {
        self.branches.as_deref()
    }

    pub(crate) fn full_entry(&self, y: u64, z: u64) -> Complex64 {
        self.full.get(&(y, z)).copied().unwrap_or_default()
    }

    pub(crate) fn coarse_entry(&self, y: usize, z: usize) -> Complex64 {
        self.coarse[y * self.params.coarse_graining.outcomes() + z]
    }

    /// Coarse functional rebuilt from the retained branches of the full histories.
    pub fn coarse_entry_from_branches(&self, y: &BitString, z: &BitString) -> Complex64 {
        self.coarse_from_branches[y.index() as usize * self.params.coarse_graining.outcomes() + z.index() as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::SystemShape;
    use crate::state::inner_product;

    fn cg(n: usize, dot: usize, l: usize, r: usize) -> CoarseGraining {
        CoarseGraining::new(SystemShape::new(n, dot).unwrap(), l, r).unwrap()
    }

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn exact_mode_conserves_norm_per_label() {
        let g = cg(8, 4, 2, 3);
        let opts = PropagationOptions { keep_branches: true, threads: Some(1), ..PropagationOptions::exact() };
        let e = propagate_branches(&g, &bs("010"), 2, &opts).unwrap();
        assert_eq!(e.labels().len(), 32);
        assert!(e.max_label_defect() < 1e-10);
        assert_eq!(e.discarded_mass(), 0.0);
        for (_, b) in e.branches().unwrap() {
            assert_eq!(b.len(), 64);
            let total: f64 = b.values().map(StateVector::norm_sqr).sum();
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn one_step_branches_are_orthogonal() {
        let g = cg(7, 3, 1, 2);
        let opts = PropagationOptions { keep_branches: true, threads: Some(1), ..PropagationOptions::exact() };
        let e = propagate_branches(&g, &bs("1011"), 1, &opts).unwrap();
        for (_, b) in e.branches().unwrap() {
            let v: Vec<_> = b.values().collect();
            for i in 0..v.len() {
                for j in i + 1..v.len() {
                    assert!(inner_product(v[i], v[j]).unwrap().norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn spectator_reduction_is_exact() {
        let g = cg(10, 5, 3, 4);
        for prune in [0.0, 1e-8] {
            let full = PropagationOptions { prune_eps: prune, reduction: LabelReduction::None, ..Default::default() };
            let reduced = PropagationOptions { reduction: LabelReduction::Spectators, ..full.clone() };
            let a = propagate_branches(&g, &bs("110"), 2, &full).unwrap();
            let b = propagate_branches(&g, &bs("110"), 2, &reduced).unwrap();
            assert_eq!(b.labels().len(), a.labels().len() / 4);
            assert_eq!(a.paths, b.paths);
            for (key, v) in &a.full {
                assert!((v - b.full[key]).norm() < 1e-13, "{key:?}");
            }
            for (u, v) in a.coarse.iter().zip(&b.coarse) {
                assert!((u - v).norm() < 1e-13);
            }
            assert!((a.discarded_mass() - b.discarded_mass()).abs() < 1e-15);
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let g = cg(9, 4, 2, 3);
        let one = PropagationOptions { threads: Some(1), ..Default::default() };
        let four = PropagationOptions { threads: Some(4), ..Default::default() };
        let a = propagate_branches(&g, &bs("0110"), 2, &one).unwrap();
        let b = propagate_branches(&g, &bs("0110"), 2, &four).unwrap();
        assert_eq!(a.full, b.full);
        assert_eq!(a.coarse, b.coarse);
        assert_eq!(a.discarded_mass, b.discarded_mass);
    }

    #[test]
    fn pruning_accounts_for_dropped_mass() {
        let g = cg(10, 5, 3, 4);
        let eps = 1e-4;
        let opts = PropagationOptions { prune_eps: eps, ..Default::default() };
        let e = propagate_branches(&g, &bs("101"), 3, &opts).unwrap();
        assert!(e.discarded_mass() > 0.0);
        assert!(e.max_label_defect() < 1e-10);
        let bound = (1u64 << (g.width() * 3)) as f64 * eps;
        assert!(e.labels().iter().all(|l| l.discarded <= bound));
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = cg(8, 4, 2, 3);
        assert!(matches!(
            propagate_branches(&g, &bs("010"), 3, &Default::default()),
            Err(Error::ParameterViolation(_))
        ));
        assert!(propagate_branches(&g, &bs("01"), 2, &Default::default()).is_err());
        let bad = PropagationOptions { prune_eps: -1.0, ..Default::default() };
        assert!(propagate_branches(&g, &bs("010"), 2, &bad).is_err());
        let tiny = PropagationOptions { memory_budget: 1024, ..Default::default() };
        assert!(matches!(propagate_branches(&g, &bs("010"), 2, &tiny), Err(Error::ResourceLimit(_))));
    }
}

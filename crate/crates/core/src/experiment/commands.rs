//! The four canned experiments behind the command-line front end.

use std::time::Instant;

use num_complex::Complex64;
use rand::{rngs::StdRng, Rng, SeedableRng};

use super::config::{alternating, Experiment, RunConfig};
use super::record::{Cell, ResultRecord};
use crate::baker::BakerMap;
use crate::basis::{basis_state, BasisTransform};
use crate::bits::BitString;
use crate::coarse::{validate_parameters, validate_run, CoarseGraining};
use crate::dense::{self, MAX_DENSE_QUBITS};
use crate::error::{Error, Result};
use crate::histories::{
    coarse_from_branches, coarse_offdiagonal_max, entropy_bits, history_distribution, is_shift_consistent,
    offdiagonal_norm, propagate_branches, theorem1_value, theorem2_value, BranchEnsemble, HistoryDistribution,
    HistoryKind, NormMode, PropagationOptions,
};
use crate::shape::SystemShape;
use crate::state::StateVector;

/// Probability above which a history counts as carrying weight.
pub const SUPPORT_THRESHOLD: f64 = 0.01;
/// Tolerance used by every `check` suite.
pub const CHECK_TOLERANCE: f64 = 1e-10;

fn options(cfg: &RunConfig) -> PropagationOptions {
    PropagationOptions { prune_eps: cfg.prune, threads: cfg.threads, ..Default::default() }
}

struct Stopwatch(Instant);

impl Stopwatch {
    fn start() -> Self {
        Stopwatch(Instant::now())
    }

    fn lap(&mut self) -> f64 {
        let t = self.0.elapsed().as_secs_f64();
        self.0 = Instant::now();
        t
    }
}

/// Result of `check`: the report table plus the names of failed invariants.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub record: ResultRecord,
    pub failures: Vec<String>,
}

/// Runs the structural invariant suites at the configured `(N, n, l, r, k)`.
///
/// Dense-matrix suites only run for `N <= 10`. Branch suites need `1 <= k < r`
/// and are reported as skipped otherwise.
pub fn cmd_check(cfg: &RunConfig) -> Result<CheckReport> {
    let shape = SystemShape::new(cfg.qubits, cfg.dot).map_err(as_parameter_error)?;
    let cg = CoarseGraining::new(shape, cfg.left, cfg.right)?;
    let mut record = ResultRecord::new(Experiment::Check, cfg.echo(), &["invariant", "value", "tolerance", "status"]);
    let mut failures = Vec::new();
    let mut line = |name: &str, value: Option<f64>, tol: f64| {
        let status = match value {
            None => "skipped",
            Some(v) if v <= tol => "pass",
            Some(_) => {
                failures.push(name.to_string());
                "FAIL"
            }
        };
        let value = value.map_or(Cell::Text(String::new()), Cell::Float);
        record.push_row(vec![name.into(), value, tol.into(), status.into()]);
    };

    let n = cfg.qubits;
    let dense_ok = n <= MAX_DENSE_QUBITS;
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let map = BakerMap::new(shape)?;

    for m in [shape.dot(), shape.dot() + 1] {
        let name = format!("basis_orthonormal_dot{m}");
        line(&name, dense_ok.then(|| gram_defect(&shape, m)).transpose()?, CHECK_TOLERANCE);
    }
    line(
        "baker_unitary",
        dense_ok.then(|| dense::baker_matrix(&shape).map(|b| dense::unitarity_defect(&b))).transpose()?,
        CHECK_TOLERANCE,
    );
    line(
        "baker_fast_matches_dense",
        dense_ok.then(|| fast_vs_dense(&shape, &map, &mut rng)).transpose()?,
        CHECK_TOLERANCE,
    );
    line("baker_norm_preserved", Some(norm_defect(&map, &mut rng)?), CHECK_TOLERANCE);
    for m in [shape.dot(), shape.dot() + 1] {
        line(
            &format!("analyze_synthesize_inverse_dot{m}"),
            Some(round_trip_defect(&shape, m, &mut rng)?),
            CHECK_TOLERANCE,
        );
    }
    line(
        "bvs_crosscheck",
        dense_ok
            .then(|| -> Result<f64> {
                let top = dense::baker_matrix(&SystemShape::new(n, n - 1)?)?;
                Ok(dense::max_abs_diff(&top, &dense::bvs_reference_matrix(n)?))
            })
            .transpose()?,
        CHECK_TOLERANCE,
    );
    let (complete, orthogonal, idempotent) = projector_violations(&cg, &mut rng)?;
    line("projector_completeness", Some(complete), 0.0);
    line("projector_orthogonality", Some(orthogonal), 0.0);
    line("projector_idempotence", Some(idempotent), 0.0);

    if validate_run(&cg, cfg.steps).is_ok() {
        let x = cfg.init_x.unwrap_or_else(|| alternating(cg.width()));
        let opts = PropagationOptions { prune_eps: 0.0, threads: cfg.threads, ..Default::default() };
        let e = propagate_branches(&cg, &x, cfg.steps, &opts)?;
        line("branch_norm_conservation", Some(e.max_label_defect()), CHECK_TOLERANCE);
        line("coarse_decoherence_exact", Some(coarse_offdiagonal_max(&e)), CHECK_TOLERANCE);
        line("full_to_coarse_sum_rule", Some(sum_rule_defect(&e)?), CHECK_TOLERANCE);
        let full = history_distribution(&e, HistoryKind::Full)?;
        line("full_probabilities_sum_to_one", Some(full.conservation_defect()), CHECK_TOLERANCE);
    } else {
        for name in [
            "branch_norm_conservation",
            "coarse_decoherence_exact",
            "full_to_coarse_sum_rule",
            "full_probabilities_sum_to_one",
        ] {
            line(name, None, CHECK_TOLERANCE);
        }
    }
    record.summarize("failures", failures.len());
    Ok(CheckReport { record, failures })
}

fn as_parameter_error(e: Error) -> Error {
    match e {
        Error::InvalidArgument(msg) => Error::ParameterViolation(msg),
        other => other,
    }
}

fn gram_defect(shape: &SystemShape, m: usize) -> Result<f64> {
    let cols = (0..shape.dim() as u64)
        .map(|i| basis_state(shape, m, &BitString::from_index(i, shape.qubits())?))
        .collect::<Result<Vec<_>>>()?;
    Ok(dense::unitarity_defect(&dense::from_columns(&cols)))
}

fn random_state(dim: usize, rng: &mut StdRng) -> StateVector {
    StateVector::from_amplitudes(
        (0..dim).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect(),
    )
}

fn fast_vs_dense(shape: &SystemShape, map: &BakerMap, rng: &mut StdRng) -> Result<f64> {
    let b = dense::baker_matrix(shape)?;
    let psi = random_state(shape.dim(), rng);
    let dense = &b * nalgebra::DVector::from_column_slice(psi.amplitudes());
    let fast = map.apply(&psi)?;
    Ok(dense.iter().zip(fast.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
}

fn norm_defect(map: &BakerMap, rng: &mut StdRng) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..4 {
        let psi = random_state(map.shape().dim(), rng);
        let out = map.apply(&psi)?;
        worst = worst.max((out.norm() - psi.norm()).abs() / psi.norm());
    }
    Ok(worst)
}

fn round_trip_defect(shape: &SystemShape, m: usize, rng: &mut StdRng) -> Result<f64> {
    let t = BasisTransform::new(shape, m)?;
    let psi = random_state(shape.dim(), rng);
    let back = t.synthesize(&t.analyze(&psi)?)?;
    let c = random_state(shape.dim(), rng);
    let forward = t.analyze(&t.synthesize(&c)?)?;
    Ok(back.max_abs_diff(&psi)?.max(forward.max_abs_diff(&c)?))
}

/// Counts entries breaking completeness, orthogonality and idempotence of the
/// projector masks on a random vector. Exact: every count should be zero.
fn projector_violations(cg: &CoarseGraining, rng: &mut StdRng) -> Result<(f64, f64, f64)> {
    let c = random_state(cg.shape().dim(), rng);
    let outcomes: Vec<BitString> =
        (0..cg.outcomes() as u64).map(|y| BitString::from_index(y, cg.width())).collect::<Result<_>>()?;
    let parts: Vec<StateVector> = outcomes.iter().map(|y| crate::coarse::project(&c, cg, y)).collect::<Result<_>>()?;
    let mut total = StateVector::zeros(c.dim());
    for p in &parts {
        total.axpy(Complex64::new(1.0, 0.0), p)?;
    }
    let complete = total.amplitudes().iter().zip(c.amplitudes()).filter(|(a, b)| a != b).count();
    let mut orthogonal = 0;
    let mut idempotent = 0;
    for (i, p) in parts.iter().enumerate() {
        if crate::coarse::project(p, cg, &outcomes[i])? != *p {
            idempotent += 1;
        }
        let other = &outcomes[(i + 1) % outcomes.len()];
        if other != &outcomes[i] {
            orthogonal += crate::coarse::project(p, cg, other)?.amplitudes().iter().filter(|a| a.norm() != 0.0).count();
        }
    }
    Ok((complete as f64, orthogonal as f64, idempotent as f64))
}

/// Largest gap between the coarse functional and its reconstruction from branches.
pub fn sum_rule_defect(e: &BranchEnsemble) -> Result<f64> {
    let cg = e.coarse_graining();
    let mut worst = 0.0f64;
    for y in 0..cg.outcomes() as u64 {
        for z in 0..cg.outcomes() as u64 {
            let (ys, zs) = (BitString::from_index(y, cg.width())?, BitString::from_index(z, cg.width())?);
            let direct = crate::histories::coarse_dfunc(
                e,
                &crate::histories::CoarseHistory::new(e.steps(), ys),
                &crate::histories::CoarseHistory::new(e.steps(), zs),
            )?;
            worst = worst.max((direct - coarse_from_branches(e, &ys, &zs)?).norm());
        }
    }
    Ok(worst)
}

/// Coarse histories with a leading-order initial string `α·x`, `|α| = k`, `|x| = c - k`.
pub fn cmd_coarse_entropy(cfg: &RunConfig) -> Result<ResultRecord> {
    let mut clock = Stopwatch::start();
    let cg = validate_parameters(cfg.qubits, cfg.dot, cfg.left, cfg.right, cfg.steps)?;
    let (c, k) = (cg.width(), cfg.steps);
    if k > c {
        return Err(Error::ParameterViolation(format!("k <= c violated (k = {k}, c = {c}): no room for α")));
    }
    let core = cfg.init_x.unwrap_or_else(|| alternating(c - k));
    if core.len() != c - k {
        return Err(Error::invalid(format!("--init-x must have c - k = {} bits, got \"{core}\"", c - k)));
    }
    let alpha = match cfg.alpha {
        Some(a) if a.len() != k => return Err(Error::invalid(format!("--alpha must have k = {k} bits, got \"{a}\""))),
        Some(a) => a,
        None => BitString::zeros(k)?,
    };
    let initial = alpha.concat(&core)?;
    let build = clock.lap();

    let opts = PropagationOptions { full_histories: false, ..options(cfg) };
    let e = propagate_branches(&cg, &initial, k, &opts)?;
    let propagate = clock.lap();
    let dist = history_distribution(&e, HistoryKind::Coarse)?;
    let functional = clock.lap();

    let mut record =
        ResultRecord::new(Experiment::CoarseEntropy, cfg.echo(), &["path", "p", "oracle_p", "abs_residual"]);
    let mut worst = 0.0f64;
    for &(code, p) in &dist.entries {
        let yb = BitString::from_index(code, c)?;
        let oracle = theorem1_value(&core, &yb.slice(1, c - k), k)?;
        worst = worst.max((p - oracle).abs());
        record.push_row(vec![yb.to_string().into(), p.into(), oracle.into(), (p - oracle).abs().into()]);
    }
    let h = entropy_bits(&dist);
    let entropy = clock.lap();
    record.summarize("initial_string", initial.to_string());
    record.summarize("entropy_bits", h);
    record.summarize("oracle_entropy_bits", k);
    record.summarize("entropy_residual", (h - k as f64).abs());
    record.summarize("theorem1_max_residual", worst);
    record.summarize("dominant_histories", dist.supported(0.5f64.powi(k as i32) / 2.0).count());
    record.summarize("coarse_offdiag_max", coarse_offdiagonal_max(&e));
    summarize_conservation(&mut record, &dist);
    record.timings = vec![("build", build), ("propagate", propagate), ("functional", functional), ("entropy", entropy)];
    record.include_timings = cfg.timings;
    Ok(record)
}

fn summarize_conservation(record: &mut ResultRecord, dist: &HistoryDistribution) {
    record.summarize("total_probability", dist.total());
    record.summarize("discarded_mass", dist.discarded_mass);
    record.summarize("conservation_defect", dist.conservation_defect());
}

/// Full histories with the leading-order oracle alongside each path.
pub fn cmd_full_histories(cfg: &RunConfig) -> Result<ResultRecord> {
    let mut clock = Stopwatch::start();
    let cg = validate_parameters(cfg.qubits, cfg.dot, cfg.left, cfg.right, cfg.steps)?;
    let x = cfg.init_x.unwrap_or_else(|| alternating(cg.width()));
    if x.len() != cg.width() {
        return Err(Error::invalid(format!("--init-x must have c = {} bits, got \"{x}\"", cg.width())));
    }
    let build = clock.lap();
    let e = propagate_branches(&cg, &x, cfg.steps, &options(cfg))?;
    let propagate = clock.lap();
    let dist = history_distribution(&e, HistoryKind::Full)?;
    let off_max = offdiagonal_norm(&e, NormMode::Max)?;
    let off_rms = offdiagonal_norm(&e, NormMode::Rms)?;
    let functional = clock.lap();

    let mut record =
        ResultRecord::new(Experiment::FullHistories, cfg.echo(), &["path", "p", "oracle_p", "abs_residual"]);
    let mut violating = 0.0;
    for &(code, p) in &dist.entries {
        let path = dist.path(code);
        let oracle = theorem2_value(&x, &path, &path)?;
        if !is_shift_consistent(&x, &path)? {
            violating += p;
        }
        record.push_row(vec![path.to_string().into(), p.into(), oracle.into(), (p - oracle).abs().into()]);
    }
    let h = entropy_bits(&dist);
    let entropy = clock.lap();
    record.summarize("entropy_bits", h);
    record.summarize("oracle_entropy_bits", cfg.steps);
    record.summarize("entropy_residual", (h - cfg.steps as f64).abs());
    record.summarize("offdiag_max", off_max);
    record.summarize("offdiag_rms", off_rms);
    record.summarize("supported_paths", dist.supported(SUPPORT_THRESHOLD).count());
    record.summarize("shift_violating_mass", violating);
    record.summarize("retained_paths", dist.entries.len());
    summarize_conservation(&mut record, &dist);
    record.timings = vec![("build", build), ("propagate", propagate), ("functional", functional), ("entropy", entropy)];
    record.include_timings = cfg.timings;
    Ok(record)
}

pub const SWEEP_COLUMNS: [&str; 14] = [
    "left",
    "right",
    "dot",
    "qubits",
    "steps",
    "width",
    "entropy_bits",
    "entropy_residual",
    "coarse_entropy_bits",
    "theorem1_residual",
    "offdiag_max",
    "offdiag_rms",
    "discarded_mass",
    "conservation_defect",
];

/// One row per `(l, k)` with `r = l`, `n = l + 1` and `N = 2l + c`, so the kept width stays fixed.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<ResultRecord> {
    let c = cfg.width;
    let x = cfg.init_x.unwrap_or_else(|| alternating(c));
    if x.len() != c {
        return Err(Error::invalid(format!("--init-x must have width = {c} bits, got \"{x}\"")));
    }
    // validate every point before running any of them
    let mut points = Vec::new();
    for &l in &cfg.sweep_left {
        for &k in &cfg.sweep_steps {
            points.push((l, k, validate_parameters(2 * l + c, l + 1, l, l, k)?));
        }
    }
    let mut columns: Vec<&str> = SWEEP_COLUMNS.to_vec();
    if cfg.timings {
        columns.push("runtime_s");
    }
    let mut record = ResultRecord::new(Experiment::Sweep, cfg.echo(), &columns);
    let mut total = Stopwatch::start();
    let mut entropies: Vec<(usize, usize, f64)> = Vec::new();
    for (l, k, cg) in points {
        let mut clock = Stopwatch::start();
        let e = propagate_branches(&cg, &x, k, &options(cfg))?;
        let full = history_distribution(&e, HistoryKind::Full)?;
        let coarse = history_distribution(&e, HistoryKind::Coarse)?;
        let h = entropy_bits(&full);
        let t1 = theorem1_residual(&coarse, &x, k)?;
        let mut row: Vec<Cell> = vec![
            l.into(),
            l.into(),
            (l + 1).into(),
            (2 * l + c).into(),
            k.into(),
            c.into(),
            h.into(),
            (h - k as f64).abs().into(),
            entropy_bits(&coarse).into(),
            t1.into(),
            offdiagonal_norm(&e, NormMode::Max)?.into(),
            offdiagonal_norm(&e, NormMode::Rms)?.into(),
            full.discarded_mass.into(),
            full.conservation_defect().into(),
        ];
        if cfg.timings {
            row.push(clock.lap().into());
        }
        record.push_row(row);
        entropies.push((l, k, h));
    }
    for &l in &cfg.sweep_left {
        let pts: Vec<(f64, f64)> =
            entropies.iter().filter(|(ll, _, _)| *ll == l).map(|&(_, k, h)| (k as f64, h)).collect();
        if let Some(slope) = least_squares_slope(&pts) {
            record.summarize(format!("entropy_slope_l{l}"), slope);
        }
    }
    record.timings = vec![("total", total.lap())];
    record.include_timings = cfg.timings;
    Ok(record)
}

/// `max_y |p(h^c_y) - 2^{-k} δ(x_core, y_{1:c-k})|` with `x = α·x_core`, `|α| = k`.
/// `NaN` when `k > c`.
pub fn theorem1_residual(coarse: &HistoryDistribution, x: &BitString, k: usize) -> Result<f64> {
    let c = x.len();
    if k > c {
        return Ok(f64::NAN);
    }
    let core = x.slice(k + 1, c);
    let mut worst = 0.0f64;
    for &(code, p) in &coarse.entries {
        let y = BitString::from_index(code, c)?;
        worst = worst.max((p - theorem1_value(&core, &y.slice(1, c - k), k)?).abs());
    }
    Ok(worst)
}

/// Ordinary least-squares slope; `None` for fewer than two distinct abscissae.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::config::{ConfigOverrides, OutputFormat};

    fn cfg(exp: Experiment, o: ConfigOverrides) -> RunConfig {
        RunConfig::resolve(exp, ConfigOverrides { threads: Some(1), ..o })
    }

    #[test]
    fn check_passes_on_small_instance() {
        let o = ConfigOverrides { qubits: Some(8), dot: Some(4), left: Some(2), right: Some(3), ..Default::default() };
        let report = cmd_check(&cfg(Experiment::Check, o)).unwrap();
        assert!(report.failures.is_empty(), "{:?}", report.failures);
        assert!(report.record.rows.iter().all(|r| r[3] == Cell::Text("pass".into())));
    }

    #[test]
    fn check_rejects_bad_window() {
        let o = ConfigOverrides { qubits: Some(8), dot: Some(4), left: Some(5), right: Some(3), ..Default::default() };
        let err = cmd_check(&cfg(Experiment::Check, o)).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("l < n violated"));
    }

    #[test]
    fn check_bvs_line_at_top_dot() {
        let o = ConfigOverrides { qubits: Some(6), dot: Some(5), ..Default::default() };
        let report = cmd_check(&cfg(Experiment::Check, o)).unwrap();
        let row = report.record.rows.iter().find(|r| r[0] == Cell::Text("bvs_crosscheck".into())).unwrap();
        assert!(row[1].as_f64().unwrap() <= 1e-10);
        assert!(report.failures.is_empty());
    }

    #[test]
    fn coarse_entropy_small() {
        let o = ConfigOverrides {
            qubits: Some(10),
            dot: Some(5),
            left: Some(4),
            right: Some(4),
            steps: Some(1),
            ..Default::default()
        };
        let r = cmd_coarse_entropy(&cfg(Experiment::CoarseEntropy, o)).unwrap();
        assert_eq!(r.rows.len(), 4);
        assert!(r.summary_value("conservation_defect").unwrap().as_f64().unwrap() < 1e-9);
        let bad = ConfigOverrides {
            qubits: Some(10),
            dot: Some(5),
            left: Some(4),
            right: Some(4),
            steps: Some(1),
            init_x: Some("01".parse().unwrap()),
            ..Default::default()
        };
        assert!(cmd_coarse_entropy(&cfg(Experiment::CoarseEntropy, bad)).is_err());
    }

    #[test]
    fn empty_sweep_is_header_only() {
        let o = ConfigOverrides { sweep_left: Some(vec![]), ..Default::default() };
        let r = cmd_sweep(&cfg(Experiment::Sweep, o)).unwrap();
        assert!(r.rows.is_empty());
        let mut out = Vec::new();
        r.write(OutputFormat::Csv, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1);
    }

    #[test]
    fn slope() {
        assert_eq!(least_squares_slope(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]), Some(1.0));
        assert_eq!(least_squares_slope(&[(1.0, 1.0)]), None);
    }
}

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::bits::BitString;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Check,
    CoarseEntropy,
    FullHistories,
    Sweep,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Check => "check",
            Experiment::CoarseEntropy => "coarse-entropy",
            Experiment::FullHistories => "full-histories",
            Experiment::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::invalid(format!("unknown format \"{other}\" (csv or json)"))),
        }
    }
}

/// Settings that may come from flags or from a `key = value` file.
/// Unset fields fall back to the file, then to defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub qubits: Option<usize>,
    pub dot: Option<usize>,
    pub left: Option<usize>,
    pub right: Option<usize>,
    pub steps: Option<usize>,
    pub init_x: Option<BitString>,
    pub alpha: Option<BitString>,
    pub prune: Option<f64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub sweep_left: Option<Vec<usize>>,
    pub sweep_steps: Option<Vec<usize>>,
    pub width: Option<usize>,
    pub timings: Option<bool>,
}

impl ConfigOverrides {
    /// Parses the flat `key = value` format. Keys match the long flag names;
    /// `#` starts a comment.
    pub fn parse_file(text: &str) -> Result<Self> {
        let mut o = ConfigOverrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("config line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |e: String| Error::invalid(format!("config line {} ({key}): {e}", lineno + 1));
            match key {
                "qubits" => o.qubits = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
                "dot" => o.dot = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
                "left" => o.left = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
                "right" => o.right = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
                "steps" => o.steps = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
                "init-x" => o.init_x = Some(value.parse().map_err(|e: Error| bad(e.to_string()))?),
                "alpha" => o.alpha = Some(value.parse().map_err(|e: Error| bad(e.to_string()))?),
                "prune" => o.prune = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
                "threads" => o.threads = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
                "out" => o.out = Some(PathBuf::from(value)),
                "format" => o.format = Some(value.parse().map_err(|e: Error| bad(e.to_string()))?),
                "sweep-left" => o.sweep_left = Some(parse_list(value).map_err(|e| bad(e.to_string()))?),
                "sweep-steps" => o.sweep_steps = Some(parse_list(value).map_err(|e| bad(e.to_string()))?),
                "width" => o.width = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
                "timings" => o.timings = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
                other => return Err(Error::invalid(format!("config line {}: unknown key \"{other}\"", lineno + 1))),
            }
        }
        Ok(o)
    }

    /// Fields set in `self` win over `fallback`.
    pub fn or(self, fallback: ConfigOverrides) -> ConfigOverrides {
        ConfigOverrides {
            qubits: self.qubits.or(fallback.qubits),
            dot: self.dot.or(fallback.dot),
            left: self.left.or(fallback.left),
            right: self.right.or(fallback.right),
            steps: self.steps.or(fallback.steps),
            init_x: self.init_x.or(fallback.init_x),
            alpha: self.alpha.or(fallback.alpha),
            prune: self.prune.or(fallback.prune),
            threads: self.threads.or(fallback.threads),
            out: self.out.or(fallback.out),
            format: self.format.or(fallback.format),
            sweep_left: self.sweep_left.or(fallback.sweep_left),
            sweep_steps: self.sweep_steps.or(fallback.sweep_steps),
            width: self.width.or(fallback.width),
            timings: self.timings.or(fallback.timings),
        }
    }
}

/// Comma-separated non-negative integers; the empty string is the empty list.
pub fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|e| Error::invalid(format!("bad list entry \"{t}\": {e}"))))
        .collect()
}

pub const DEFAULT_QUBITS: usize = 12;
pub const DEFAULT_DOT: usize = 6;
pub const DEFAULT_STEPS: usize = 2;
pub const DEFAULT_PRUNE: f64 = 1e-12;
pub const DEFAULT_WIDTH: usize = 2;
pub const DEFAULT_SWEEP_LEFT: [usize; 3] = [4, 6, 8];

/// Fully resolved run parameters.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub qubits: usize,
    pub dot: usize,
    pub left: usize,
    pub right: usize,
    pub steps: usize,
    pub init_x: Option<BitString>,
    pub alpha: Option<BitString>,
    pub prune: f64,
    #[serde(skip)]
    pub threads: Option<usize>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub sweep_left: Vec<usize>,
    pub sweep_steps: Vec<usize>,
    pub width: usize,
    #[serde(skip)]
    pub timings: bool,
}

impl RunConfig {
    /// Fills unset fields with defaults. Without explicit `left`/`right`, the
    /// widest windows allowed by `l < n` and `r < N - n` are used.
    pub fn resolve(experiment: Experiment, o: ConfigOverrides) -> RunConfig {
        let qubits = o.qubits.unwrap_or(DEFAULT_QUBITS);
        let dot = o.dot.unwrap_or(if o.qubits.is_some() { qubits / 2 } else { DEFAULT_DOT });
        RunConfig {
            experiment,
            qubits,
            dot,
            left: o.left.unwrap_or(dot.saturating_sub(1)),
            right: o.right.unwrap_or(qubits.saturating_sub(dot + 1)),
            steps: o.steps.unwrap_or(DEFAULT_STEPS),
            init_x: o.init_x,
            alpha: o.alpha,
            prune: o.prune.unwrap_or(DEFAULT_PRUNE),
            threads: o.threads,
            out: o.out,
            format: o.format.unwrap_or_default(),
            sweep_left: o.sweep_left.unwrap_or_else(|| DEFAULT_SWEEP_LEFT.to_vec()),
            sweep_steps: o.sweep_steps.unwrap_or_else(|| vec![DEFAULT_STEPS]),
            width: o.width.unwrap_or(DEFAULT_WIDTH),
            timings: o.timings.unwrap_or(false),
        }
    }

    /// Ordered `key = value` pairs echoed into every output header.
    pub fn echo(&self) -> BTreeMap<&'static str, String> {
        let mut m = BTreeMap::new();
        m.insert("experiment", self.experiment.name().to_string());
        match self.experiment {
            Experiment::Sweep => {
                m.insert("sweep-left", join(&self.sweep_left));
                m.insert("sweep-steps", join(&self.sweep_steps));
                m.insert("width", self.width.to_string());
            }
            _ => {
                m.insert("qubits", self.qubits.to_string());
                m.insert("dot", self.dot.to_string());
                m.insert("left", self.left.to_string());
                m.insert("right", self.right.to_string());
                m.insert("steps", self.steps.to_string());
            }
        }
        if let Some(x) = self.init_x {
            m.insert("init-x", x.to_string());
        }
        if let Some(a) = self.alpha {
            m.insert("alpha", a.to_string());
        }
        m.insert("prune", format!("{:e}", self.prune));
        m
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// `0101…` of the given length.
pub fn alternating(len: usize) -> BitString {
    let bits: Vec<bool> = (0..len).map(|i| i % 2 == 1).collect();
    BitString::from_bits(&bits).expect("short string")
}

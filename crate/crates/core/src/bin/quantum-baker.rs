use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quantum_baker::bits::BitString;
use quantum_baker::experiment::{self, parse_list, ConfigOverrides, Experiment, OutputFormat, RunConfig};
use quantum_baker::Error;

/// Decoherent histories of the quantum baker map.
#[derive(Parser)]
#[command(name = "quantum-baker", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the structural invariant suites
    Check(Flags),
    /// Coarse-grained history distribution and its entropy
    CoarseEntropy(Flags),
    /// Fine-grained history distribution, oracle column and decoherence norms
    FullHistories(Flags),
    /// Entropy and decoherence across window sizes and step counts
    Sweep(Flags),
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    qubits: Option<usize>,
    #[arg(long)]
    dot: Option<usize>,
    #[arg(long)]
    left: Option<usize>,
    #[arg(long)]
    right: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long = "init-x")]
    init_x: Option<BitString>,
    /// Leading `k` bits of the coarse-entropy initial string
    #[arg(long)]
    alpha: Option<BitString>,
    /// Drop branches with squared norm below this
    #[arg(long)]
    prune: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<OutputFormat>,
    /// Worker threads (default: available cores, or QUANTUM_BAKER_THREADS)
    #[arg(long)]
    threads: Option<usize>,
    /// Flat `key = value` file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated left window sizes
    #[arg(long = "sweep-left")]
    sweep_left: Option<String>,
    /// Comma-separated step counts
    #[arg(long = "sweep-steps")]
    sweep_steps: Option<String>,
    /// Kept window width for sweeps
    #[arg(long)]
    width: Option<usize>,
    /// Include wall-clock timings in the output file
    #[arg(long)]
    timings: bool,
}

impl Flags {
    fn overrides(self) -> Result<ConfigOverrides, Error> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
                ConfigOverrides::parse_file(&text)?
            }
            None => ConfigOverrides::default(),
        };
        let env_threads = match std::env::var("QUANTUM_BAKER_THREADS") {
            Ok(v) => Some(v.trim().parse().map_err(|_| {
                Error::InvalidArgument(format!("QUANTUM_BAKER_THREADS must be a positive integer, got \"{v}\""))
            })?),
            Err(_) => None,
        };
        let flags = ConfigOverrides {
            qubits: self.qubits,
            dot: self.dot,
            left: self.left,
            right: self.right,
            steps: self.steps,
            init_x: self.init_x,
            alpha: self.alpha,
            prune: self.prune,
            threads: self.threads.or(env_threads),
            out: self.out,
            format: self.format,
            sweep_left: self.sweep_left.as_deref().map(parse_list).transpose()?,
            sweep_steps: self.sweep_steps.as_deref().map(parse_list).transpose()?,
            width: self.width,
            timings: self.timings.then_some(true),
        };
        Ok(flags.or(file))
    }
}

enum Failure {
    App(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::App(e)
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let (experiment, flags) = match cli.command {
        Command::Check(f) => (Experiment::Check, f),
        Command::CoarseEntropy(f) => (Experiment::CoarseEntropy, f),
        Command::FullHistories(f) => (Experiment::FullHistories, f),
        Command::Sweep(f) => (Experiment::Sweep, f),
    };
    let cfg = RunConfig::resolve(experiment, flags.overrides()?);
    if cfg.threads == Some(0) {
        return Err(Error::InvalidArgument("--threads must be at least 1".into()).into());
    }
    let (record, failures) = experiment::run(&cfg)?;

    for (stage, secs) in &record.timings {
        eprintln!("{stage}: {secs:.3} s");
    }
    let io_err = |e: io::Error| Failure::Io(format!("write failed: {e}"));
    match &cfg.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::Io(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            record.write(cfg.format, &mut w).map_err(io_err)?;
            w.flush().map_err(io_err)?;
        }
        None => record.write(cfg.format, io::stdout().lock()).map_err(io_err)?,
    }
    if failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for name in &failures {
            eprintln!("invariant violated: {name}");
        }
        Ok(ExitCode::from(3))
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::App(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

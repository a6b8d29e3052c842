//! `simfiber` command-line runner.
//!
//! Exit codes: 0 success, 1 invalid configuration, 2 runtime failure.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use simfiber_core::harness::{emit_results, run_experiment, write_results, ExperimentConfig, ExperimentKind, OutputFormat};

#[derive(Parser)]
#[command(name = "simfiber", version, about = "Meta-fiber SIM transceiver experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Check a config file without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a timing benchmark with default parameters.
    Bench {
        #[arg(long, default_value = "scaling_bench")]
        kind: String,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Args)]
struct Overrides {
    /// Output file; records go to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = ["csv", "jsonl"])]
    format: Option<String>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

enum Failure {
    Invalid(anyhow::Error),
    Runtime(anyhow::Error),
}

impl Overrides {
    fn apply(self, config: &mut ExperimentConfig) -> Result<(), Failure> {
        if let Some(out) = self.out {
            config.output = Some(out);
        }
        if let Some(format) = self.format {
            config.format = Some(format.parse().map_err(|e: simfiber_core::Error| Failure::Invalid(e.into()))?);
        }
        if self.workers.is_some() {
            config.workers = self.workers;
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        config.validate().map_err(|e| Failure::Invalid(e.into()))
    }
}

fn load(path: &Path) -> Result<ExperimentConfig, Failure> {
    ExperimentConfig::from_path(path)
        .with_context(|| format!("invalid config {}", path.display()))
        .map_err(Failure::Invalid)
}

fn parse_kind(kind: &str) -> Result<ExperimentKind, Failure> {
    let parsed: ExperimentKind = kind.parse().map_err(|e: simfiber_core::Error| Failure::Invalid(e.into()))?;
    if parsed != ExperimentKind::ScalingBench {
        return Err(Failure::Invalid(anyhow!("`{kind}` is not a benchmark kind; use `run` instead")));
    }
    Ok(parsed)
}

fn execute(config: &ExperimentConfig) -> Result<(), Failure> {
    let records = run_experiment(config).map_err(|e| Failure::Runtime(e.into()))?;
    let format = config.output_format();
    match &config.output {
        Some(path) => {
            emit_results(&records, path, format).map_err(|e| Failure::Runtime(e.into()))?;
            eprintln!("wrote {} records to {}", records.len(), path.display());
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_results(&records, &mut lock, format).map_err(|e| Failure::Runtime(e.into()))?;
            lock.flush().map_err(|e| Failure::Runtime(e.into()))?;
        }
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run { config, overrides } => {
            let mut c = load(&config)?;
            overrides.apply(&mut c)?;
            execute(&c)
        }
        Command::Validate { config } => {
            let c = load(&config)?;
            let format: OutputFormat = c.output_format();
            println!(
                "ok: {} with {} point(s), {} trial(s), {} output",
                c.kind.as_str(),
                c.points().len(),
                c.trials,
                format.as_str()
            );
            Ok(())
        }
        Command::Bench { kind, overrides } => {
            let mut c = ExperimentConfig::new(parse_kind(&kind)?);
            overrides.apply(&mut c)?;
            execute(&c)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        // usage errors count as invalid input, not runtime failures
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

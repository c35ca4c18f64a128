use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use dixmier_experiments::{record, run, ExperimentConfig, ExperimentId, RunError};

/// Runs one experiment and writes its CSV, JSON and timing files.
///
/// Exit status: 0 when every predicate passes, 2 when a numerical predicate
/// fails, 3 when the configuration is infeasible, 1 on I/O errors.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Cli {
    /// Experiment id.
    #[arg(value_enum)]
    experiment: ExperimentId,
    /// JSON configuration; the shipped default when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads for the parallel loops.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Golden CSV: captured on the first run, compared on later runs.
    #[arg(long)]
    regression: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<u8, RunError> {
    if cli.threads == 0 {
        return Err(RunError::Infeasible("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| RunError::Infeasible(format!("thread pool: {e}")))?;
    let config = match &cli.config {
        Some(path) => ExperimentConfig::from_json(&std::fs::read_to_string(path)?)?,
        None => ExperimentConfig::default_for(cli.experiment),
    };
    if config.experiment != cli.experiment {
        return Err(RunError::Infeasible(format!(
            "config is for {} but the subcommand is {}",
            config.experiment, cli.experiment
        )));
    }
    let outcome = run(&config)?;
    record::emit(&outcome.record, &outcome.timing, &cli.out)?;
    for c in &outcome.record.checks {
        println!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    let mut passed = outcome.record.passed;
    if let Some(golden) = &cli.regression {
        if let Some(diff) = record::regression(&outcome.record, golden)? {
            println!("FAIL regression: {diff}");
            passed = false;
        }
    }
    println!(
        "{} {} in {:.1} s",
        config.experiment,
        if passed { "passed" } else { "failed" },
        outcome.timing.total_seconds
    );
    Ok(if passed { 0 } else { 2 })
}

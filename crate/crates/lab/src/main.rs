use std::{io::Write, path::PathBuf, process::ExitCode};

use clap::Parser;
use mixedq::{emit_report, run, write_report, Command, ExperimentConfig, Format};

/// Verify mixed-state computation bounds on random or file-supplied instances.
#[derive(Parser)]
#[command(name = "mixedq", version, allow_negative_numbers = true)]
struct Cli {
    #[arg(value_enum)]
    command: Command,

    /// JSON instance file; without it the command runs its random sweep.
    #[arg(long)]
    input: Option<PathBuf>,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, default_value_t = 300, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,

    /// Report destination; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[arg(long, default_value_t = mixedq_core::DEFAULT_QUBIT_CAP)]
    qubit_cap: usize,

    /// Slack applied to every check in place of its default.
    #[arg(long)]
    tolerance: Option<f64>,

    /// Comma-separated inverse temperatures for thermal and cluster-scan.
    #[arg(long, value_delimiter = ',')]
    betas: Option<Vec<f64>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = ExperimentConfig {
        command: cli.command,
        input: cli.input,
        seed: cli.seed,
        trials: cli.trials,
        output: cli.out,
        format: cli.format,
        qubit_cap: cli.qubit_cap,
        tolerance: cli.tolerance,
        betas: cli.betas,
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let bytes = emit_report(&report, config.format);
    let written = match &config.output {
        Some(path) => write_report(path, &bytes),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|source| mixedq::LabError::Io { path: "<stdout>".into(), source }),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    let s = &report.summary;
    eprintln!(
        "{}: {}/{} checks passed, max violation {:e}, {:.2?}",
        report.config.command, s.passes, s.cases, s.max_violation, report.wall_clock
    );
    ExitCode::from(report.exit_code() as u8)
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use multimode::output::{result_table, write_table};
use multimode::runner::{oracle_check, run};
use multimode::scan::{configured_separations, overlap_scan, scan_table};
use multimode::{load_config, ExperimentConfig, RunError, RunOptions, RunReport, ORACLE_TOLERANCE};

/// Single-detection interference of two bosons from independent multimode sources.
#[derive(Debug, Parser)]
#[command(name = "multimode", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write CSV here instead of `output.path` (stdout when neither is set).
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Evaluate the brute-force Fock-space density alongside the closed form.
    #[arg(long, global = true)]
    oracle: bool,

    /// Cap on the number of oracle modes.
    #[arg(long, global = true, value_name = "M")]
    max_modes: Option<usize>,

    /// Seed for the random points of `oracle-check`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Suppress diagnostics on stderr.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the configured point or sweep.
    Run { config: PathBuf },
    /// Like `run`, but the evaluation must be a position or time sweep.
    Sweep { config: PathBuf },
    /// Scan the momentum separation of two Gaussian sources.
    OverlapScan { config: PathBuf },
    /// Compare closed form and oracle at seeded random points.
    OracleCheck { config: PathBuf },
}

const EXIT_ERROR: u8 = 1;
const EXIT_ORACLE_MISMATCH: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn execute(cli: &Cli) -> Result<ExitCode, RunError> {
    let options = RunOptions {
        oracle: cli.oracle,
        max_modes: cli.max_modes,
        seed: cli.seed,
    };
    let (name, config_path) = match &cli.command {
        Command::Run { config } => ("run", config),
        Command::Sweep { config } => ("sweep", config),
        Command::OverlapScan { config } => ("overlap-scan", config),
        Command::OracleCheck { config } => ("oracle-check", config),
    };
    let cfg = load_config(config_path)?;
    let output = cli.output.as_deref().or(cfg.output.as_deref());

    match cli.command {
        Command::OverlapScan { .. } => {
            let separations = configured_separations(&cfg)?;
            let rows = overlap_scan(&cfg, &separations)?;
            let metadata = base_metadata(name, &cfg);
            write_table(output, &metadata, &scan_table(&rows))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { .. } if !cfg.evaluation.is_sweep() => Err(RunError::Usage(
            "`sweep` needs evaluation.kind = \"position_sweep\" or \"time_sweep\"".into(),
        )),
        Command::Run { .. } | Command::Sweep { .. } => {
            let report = run(&cfg, &options)?;
            finish(cli, name, &cfg, &report, output)
        }
        Command::OracleCheck { .. } => {
            let report = oracle_check(&cfg, &options)?;
            finish(cli, name, &cfg, &report, output)
        }
    }
}

fn base_metadata(command: &str, cfg: &ExperimentConfig) -> Vec<(&'static str, String)> {
    vec![
        ("generator", format!("multimode {}", env!("CARGO_PKG_VERSION"))),
        ("command", command.to_string()),
        ("config_sha256", cfg.digest.clone()),
    ]
}

fn finish(
    cli: &Cli,
    command: &str,
    cfg: &ExperimentConfig,
    report: &RunReport,
    output: Option<&Path>,
) -> Result<ExitCode, RunError> {
    let mut metadata = base_metadata(command, cfg);
    let o = &report.overlap;
    metadata.push(("overlap_c", format!("{:.16e} {:+.16e}i", o.c.re, o.c.im)));
    metadata.push(("state_norm", format!("{:.16e}", o.state_norm)));
    if let Some(d) = report.max_deviation {
        metadata.push(("oracle_max_abs_deviation", format!("{d:.16e}")));
    }
    write_table(output, &metadata, &result_table(&report.rows, cfg.grid.dimension()))?;

    if !cli.quiet {
        if let Some(w) = report.worst_phase {
            eprintln!(
                "warning: {} of {} points exceed the phase resolution limit (worst {:.3} rad per cell on axis {}); refine the momentum grid",
                report.phase_warnings,
                report.rows.len(),
                w.phase_step,
                w.axis
            );
        }
    }
    if report.oracle_failed() {
        eprintln!(
            "error: oracle deviation {:.3e} exceeds {ORACLE_TOLERANCE:e}",
            report.max_deviation.unwrap_or(f64::NAN)
        );
        return Ok(ExitCode::from(EXIT_ORACLE_MISMATCH));
    }
    if !cli.quiet {
        if let Some(d) = report.max_deviation {
            eprintln!("oracle agrees: max |deviation| = {d:.3e}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

//! Command-line front end: run experiments, verify canned suites, export
//! snapshots, and describe run summaries.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration or usage
//! error, 3 numerical abort.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use kdnls::io::{self, read_snapshot, Summary};
use kdnls::verify::{run_suite, Suite};
use kdnls::Error;

#[derive(Parser)]
#[command(name = "kdnls", version, about = "Pseudospectral laboratory for a kinetic derivative NLS")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the experiment described by a config file.
    Run {
        /// Path to a flat key = value config file.
        config: PathBuf,
    },
    /// Run a canned verification suite
    /// (operators | solver-order | identities | scattering | dissipation | all).
    Verify { suite: String },
    /// Print a binary snapshot to stdout.
    Export {
        snapshot: PathBuf,
        #[arg(long = "as", value_enum, default_value = "csv")]
        format: ExportFormat,
    },
    /// Summarize a run from its summary.json.
    Describe { summary: PathBuf },
}

const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

fn error_code(e: &Error) -> u8 {
    match e {
        Error::NumericalAbort { .. } | Error::BoundaryContamination { .. } => EXIT_NUMERICAL,
        _ => EXIT_CONFIG,
    }
}

fn run(cmd: Cmd) -> Result<(), (u8, String)> {
    match cmd {
        Cmd::Run { config } => {
            let cfg = io::load_config(&config).map_err(|e| (error_code(&e), e.to_string()))?;
            let root = std::env::var_os(io::OUTPUT_ROOT_ENV).map(PathBuf::from);
            let (out_dir, summary, _) = io::run_experiment(&cfg, root.as_deref())
                .map_err(|e| (error_code(&e), e.to_string()))?;
            println!("wrote {}", out_dir.display());
            println!("{}", summary.describe());
            Ok(())
        }
        Cmd::Verify { suite } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![Suite::parse(&suite).ok_or_else(|| {
                    (
                        EXIT_CONFIG,
                        format!(
                            "unknown suite \"{suite}\" (expected operators, solver-order, identities, scattering, dissipation, or all)"
                        ),
                    )
                })?]
            };
            let mut all_ok = true;
            for s in suites {
                let report = run_suite(s).map_err(|e| (error_code(&e), e.to_string()))?;
                for c in &report.checks {
                    println!(
                        "{}\t{}/{}\t{}",
                        if c.passed { "PASS" } else { "FAIL" },
                        report.suite,
                        c.name,
                        c.details
                    );
                }
                all_ok &= report.passed();
            }
            if all_ok {
                Ok(())
            } else {
                Err((EXIT_VERIFY_FAIL, "one or more checks failed".to_string()))
            }
        }
        Cmd::Export { snapshot, format } => {
            let snap = read_snapshot(&snapshot).map_err(|e| (EXIT_CONFIG, e.to_string()))?;
            match format {
                ExportFormat::Csv => print!("{}", io::csv::snapshot_csv(&snap)),
                ExportFormat::Text => print!("{}", io::csv::snapshot_text(&snap)),
            }
            Ok(())
        }
        Cmd::Describe { summary } => {
            let s = Summary::read(&summary).map_err(|e| (EXIT_CONFIG, e.to_string()))?;
            print!("{}", s.describe());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("kdnls: {msg}");
            ExitCode::from(code)
        }
    }
}

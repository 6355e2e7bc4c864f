use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use modspin_verify::config::{Format, Suite, SuiteConfig};
use modspin_verify::{run, Report};

/// Seeded numerical verification of modular and spin-statistics identities.
#[derive(Parser)]
#[command(name = "verify", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run suites and write a report
    Run(Box<RunArgs>),
    /// List suites, default tolerances and anchors
    List,
}

#[derive(Args)]
struct RunArgs {
    /// `all`, a suite name, or a comma-separated list
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Tolerance applied to every suite
    #[arg(long)]
    tol: Option<String>,
    /// Representation dimensions, e.g. `2..8`
    #[arg(long)]
    dims: Option<String>,
    /// Largest number of CAR modes
    #[arg(long)]
    modes: Option<String>,
    /// Momenta per sample set
    #[arg(long)]
    samples: Option<String>,
    /// Report path (stdout when omitted)
    #[arg(long)]
    out: Option<String>,
    /// `json` or `csv`
    #[arg(long)]
    format: Option<String>,
    /// File of `key = value` settings; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

fn build_config(args: &RunArgs) -> Result<SuiteConfig, modspin_verify::ConfigError> {
    let mut cfg = SuiteConfig::default();
    if let Some(path) = &args.config {
        cfg.apply_file(path)?;
    }
    let flags = [
        ("suite", &args.suite),
        ("seed", &args.seed),
        ("tol", &args.tol),
        ("dims", &args.dims),
        ("modes", &args.modes),
        ("samples", &args.samples),
        ("out", &args.out),
        ("format", &args.format),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_report(report: &Report, cfg: &SuiteConfig) -> io::Result<()> {
    let sink: Box<dyn Write> = match &cfg.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match cfg.format {
        Format::Json => report.write_json(&mut sink)?,
        Format::Csv => report.write_csv(&mut sink)?,
    }
    sink.flush()
}

fn list() {
    for suite in Suite::ALL {
        println!("{:<18} tol={:<8e} {}", suite.name(), suite.default_tol(), suite.description());
        for anchor in suite.anchors() {
            println!("    {anchor}");
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = match cli.command {
        Command::List => {
            list();
            return ExitCode::SUCCESS;
        }
        Command::Run(args) => args,
    };
    let cfg = match build_config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = run(&cfg);
    if let Err(e) = write_report(&report, &cfg) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(2);
    }
    eprintln!(
        "{} checks, {} passed, {} failed",
        report.summary.total, report.summary.passed, report.summary.failed
    );
    ExitCode::from(report.exit_code() as u8)
}

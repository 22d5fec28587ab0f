//! `tlcable`: runs the verification suites and prints the data tables.
//!
//! Exit codes: 0 all checks pass, 1 some check failed, 2 usage or configuration error,
//! 3 every decisive check was skipped for the tensor budget.

mod config;
mod tables;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use tlcable::diagrams::enumerate_diagrams;
use tlcable::report::VerificationReport;
use tlcable::suites::run;

use config::{resolve, Overrides, BUDGET_ENV};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "tlcable", version, about = "Checks for the 2-cabled Temperley-Lieb model of a quantum automorphism group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification suites and write a report.
    Verify(VerifyArgs),
    /// Print a data table.
    #[command(subcommand)]
    Table(TableCmd),
    /// Print the lower-bound constants.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Print every diagram of TL(k, l) as ASCII art.
    Diagrams {
        #[arg(long)]
        bottom: usize,
        #[arg(long)]
        top: usize,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Block sizes of B, e.g. 1,1,1,1,1 or 2,2; per-suite defaults otherwise.
    #[arg(long)]
    algebra: Option<String>,
    /// Comma-separated suites or `all`; an empty list gives an empty report.
    #[arg(long)]
    suites: Option<String>,
    /// Truncation level for the commutator suites.
    #[arg(short = 'K', long = "kmax")]
    kmax: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Largest tensor dimension; checks beyond it are skipped.
    #[arg(long)]
    budget: Option<usize>,
    /// Random trials per randomized check.
    #[arg(long)]
    trials: Option<usize>,
    /// Path of the JSON report; the text table always goes to stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Key-value config file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Suites run at once.
    #[arg(long)]
    jobs: Option<usize>,
    /// Print the JSON report to stdout instead of the text table.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum TableCmd {
    /// Representation dimensions `d_k = Pi_k(dim B)`.
    Dims {
        #[arg(long = "dimB")]
        dim_b: u64,
        #[arg(long)]
        kmax: usize,
        #[arg(long)]
        csv: bool,
    },
    /// The truncation schedule `t(n)` with its multiplier tail.
    Schedule {
        #[arg(long = "dimB")]
        dim_b: u64,
        #[arg(long, default_value_t = 400)]
        nmax: usize,
        #[arg(long, default_value_t = 50)]
        step: usize,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Subcommand, Debug)]
enum BoundsCmd {
    /// `f(delta)` and `C(q)` on a grid of integer `delta^2`.
    F {
        /// `lo:hi` in `delta^2`.
        #[arg(long, default_value = "8:100")]
        grid: String,
        #[arg(long)]
        csv: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Table(t) => table(t).map(|()| 0),
        Command::Bounds(b) => bounds(b).map(|()| 0),
        Command::Diagrams { bottom, top } => diagrams(bottom, top).map(|()| 0),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn verify(args: VerifyArgs) -> Result<u8> {
    let flags = Overrides {
        algebra: args.algebra,
        suites: args.suites,
        kmax: args.kmax,
        tol: args.tol,
        seed: args.seed,
        budget: args.budget,
        trials: args.trials,
        output: args.output,
        jobs: args.jobs,
    };
    let env = std::env::var(BUDGET_ENV).ok();
    let cfg = resolve(args.config.as_deref(), env.as_deref(), &flags)?;
    let report = run(&cfg.suite, &cfg.suites, cfg.jobs);
    let json = report.to_json()?;
    if let Some(path) = &cfg.output {
        write_file(path, &json)?;
    }
    let mut stdout = std::io::stdout().lock();
    if args.json {
        writeln!(stdout, "{json}")?;
    } else {
        write!(stdout, "{}", report.to_text())?;
    }
    Ok(exit_code(&report))
}

/// Failures win; a run where every decisive check was skipped reports a resource problem.
fn exit_code(report: &VerificationReport) -> u8 {
    let s = report.summary;
    if s.fail > 0 {
        EXIT_FAIL
    } else if s.skipped > 0 && s.pass == 0 {
        EXIT_RESOURCE
    } else {
        0
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn table(cmd: TableCmd) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match cmd {
        TableCmd::Dims { dim_b, kmax, csv } => tables::dims(dim_b, kmax).write(csv, &mut out),
        TableCmd::Schedule { dim_b, nmax, step, csv } => tables::schedule(dim_b, nmax, step)?.write(csv, &mut out),
    }
}

fn bounds(cmd: BoundsCmd) -> Result<()> {
    let BoundsCmd::F { grid, csv } = cmd;
    let (lo, hi) = tables::parse_grid(&grid)?;
    tables::lower_bound(lo, hi)?.write(csv, &mut std::io::stdout().lock())
}

fn diagrams(bottom: usize, top: usize) -> Result<()> {
    let mut out = std::io::stdout().lock();
    for (i, d) in enumerate_diagrams(bottom, top).iter().enumerate() {
        writeln!(out, "#{i} {}", d.to_json())?;
        writeln!(out, "{}", d.render_ascii())?;
    }
    Ok(())
}

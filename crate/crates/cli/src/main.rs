mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gessel_core::sampling::DEFAULT_SEED;

/// Verification workbench for Gessel walks in the quarter plane.
#[derive(Debug, Parser)]
#[command(name = "gessel", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every randomized sampler.
    #[arg(long, global = true, env = "GESSEL_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Replaces the tolerance of every numeric check (runtime budgets excepted).
    #[arg(long, global = true, value_parser = positive_f64)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Walk counts q(i,j;n) as CSV `i,j,n,count`, one row per nonzero entry.
    Count {
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Steps::Gessel)]
        steps: Steps,
        /// Write to a file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Periods, invariants, R and T1..T6 at one z in (0, 1/4).
    Periods {
        #[arg(long)]
        z: f64,
    },
    /// Signed orbit of a rational point under the Gessel group.
    Orbit {
        /// Rational, e.g. 3/7.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, value_enum, default_value_t = Steps::Gessel)]
        model: Steps,
    },
    /// Numeric and exact verification reports.
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
    /// Open conjectures on the excursion series.
    Conjectures {
        #[command(subcommand)]
        command: ConjectureCommand,
    },
    /// Every acceptance criterion, one PASS/FAIL line each.
    ReportAll {
        /// Smaller grids and sample counts.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Q(0,0;z) from the zeta form against the count series and the 2F1 form.
    Theorem31 {
        #[arg(long, default_value_t = 0.1)]
        z: f64,
    },
    /// r_y from the zeta form against the boundary series, plus its
    /// periodicity and continuation identities.
    Theorem32 {
        #[arg(long, default_value_t = 0.1)]
        z: f64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Residues of r_y at its eight poles.
    Table1 {
        #[arg(long, default_value_t = 0.1)]
        z: f64,
    },
    /// Excursion counts against the closed form, and the covering identity.
    Conjecture {
        #[arg(long, default_value_t = 25)]
        n_max: usize,
    },
    /// The four key identities and the hypergeometric relations on an x-grid.
    KeyIdentities {
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(2..=1000))]
        grid: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConjectureCommand {
    /// p_j(z): polynomial of degree 3j+2 with positive coefficients?
    New {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=12))]
        j: u32,
        #[arg(long, default_value_t = 15)]
        order: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Steps {
    Gessel,
    Simple,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(commands::CliError::Pipe) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gessel: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

/// Spherical cone metrics with cone angles (alpha, beta, alpha + beta, 4 pi).
///
/// All angles and lengths are in radians.
#[derive(Debug, Parser)]
#[command(name = "conelab", version)]
pub struct Cli {
    /// JSON run configuration; command-line flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Clone, Copy, clap::Args)]
pub struct FamilyArgs {
    #[arg(long, default_value_t = FRAC_PI_2, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = FRAC_PI_2, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = FRAC_PI_3, allow_negative_numbers = true)]
    pub t: f64,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Write the metric document of the glued football g_t.
    Construct(FamilyArgs),
    /// Validate a metric document and report its cone angles.
    Check { path: PathBuf },
    /// Multi-start Gauss-Newton rigidity scan around g_t.
    Rigidity {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Constraint residuals on a grid of lengths around g_t, as CSV.
    Scan {
        #[command(flatten)]
        family: FamilyArgs,
        /// Nodes per axis.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, value_enum, default_value_t = Closure::Apex)]
        closure: Closure,
        #[arg(long, allow_negative_numbers = true)]
        eps: Option<f64>,
        #[arg(long, value_enum, default_value_t = RegimeArg::Below)]
        regime: RegimeArg,
    },
    /// Triangle lemma suites.
    Lemmas {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Slit length for lemma2/step1 (replaces the grid) or side for lemma3.
        #[arg(long)]
        ell: Option<f64>,
        /// Apex angle for lemma1/lemma2, opposite angle for lemma3.
        #[arg(long = "beta-angle")]
        beta_angle: Option<f64>,
        /// Apex angles of the step1 suite.
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        /// Grid size of the selected suite.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Finite-difference eigenfunction check of cos r.
    Eigen {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Euler characteristic and odd-lattice distance of the cone angles.
    Admissible(FamilyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Closure {
    Apex,
    Dsplit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Below,
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemma1,
    Lemma2,
    Lemma3,
    Step1,
    All,
}

/// Why a command did not pass.
#[derive(Debug)]
pub enum Failure {
    /// Ran to completion but an assertion failed.
    Assertion,
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Assertion => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Assertion => {}
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Io(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

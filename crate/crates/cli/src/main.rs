//! `spherekit`: verification runs and artifact exports.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spherekit::suites::{Mode, Suite};

#[derive(Parser, Debug)]
#[command(name = "spherekit", version, about = "Constant-length Killing fields, δ-vectors and invariant metrics on round spheres")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Arithmetic: rationals only, or rationals plus floating point.
    #[arg(long, global = true, value_parser = parse_mode, default_value = "numeric")]
    pub mode: Mode,
    /// Seed for every sampled input.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: spherekit::Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: spherekit::Error| e.to_string())
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// so, u, su, sp, sp-split, sp-sp1 or spin9.
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run every verification suite; exit status 0 iff all checks pass.
    VerifyPaper {
        /// Keep only records of one family.
        #[arg(long)]
        family: Option<String>,
        /// Run a single suite: clifford, identities, killing, firey, table2.
        #[arg(long, value_parser = parse_suite)]
        only: Option<Suite>,
        /// Tangent vectors per family in the Killing suite.
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Build the constant-length Killing field through a tangent vector.
    ConstructKilling {
        #[command(flatten)]
        family: FamilyArgs,
        /// File with the vector, entries separated by commas.
        #[arg(long)]
        vector: std::path::PathBuf,
    },
    /// Evaluate the necessary δ-homogeneity conditions at one metric.
    DeltaCheck {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        t: String,
        #[arg(long)]
        s: Option<String>,
        /// Also sample Ad(a)W for this matrix W (numeric).
        #[arg(long)]
        matrix: Option<std::path::PathBuf>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Dual 2-mean combination of metrics or ellipsoids.
    Firey {
        #[command(subcommand)]
        what: FireyCmd,
    },
    /// The spin(9) ⊂ so(16) embedding.
    Spin9 {
        #[command(subcommand)]
        what: Spin9Cmd,
    },
    /// Necessary conditions over the (t, s) grid against the classified range.
    Table2 {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Write a text-format artifact.
    Export {
        what: ExportTarget,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum FireyCmd {
    /// Combine two diagonal metrics given as `t` or `t,s`.
    Combine {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        theta: String,
    },
    /// Dual 2-mean of two ellipsoids given as symmetric matrices.
    Ellipsoid {
        #[arg(long)]
        a: std::path::PathBuf,
        #[arg(long)]
        b: std::path::PathBuf,
        #[arg(long)]
        theta: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum Spin9Cmd {
    /// Exact spin(9) identities.
    Verify,
    /// Clifford–Wolf field through a tangent vector in ℝ¹⁶.
    Field {
        #[arg(long)]
        vector: std::path::PathBuf,
    },
    /// The 36 matrices θ(e_i e_j).
    DumpTheta {
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportTarget {
    ThetaBasis,
    Decomposition,
    OctonionTable,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

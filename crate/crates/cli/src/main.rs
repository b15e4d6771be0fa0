//! `circulant`: construct, classify, verify and sweep circulant graphs.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 numerical failure.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use circulant_core::{EigvecSelector, Limits};
use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Table;

#[derive(Parser, Debug)]
#[command(
    name = "circulant",
    version,
    about = "Spectra, eigenbases and equidistribution sweeps for circulant graphs"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write to PATH instead of stdout.
    #[arg(long, value_name = "PATH", global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, default_value_t = 1, global = true)]
    pub jobs: usize,
    /// Seed for every randomized choice.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Largest accepted graph order.
    #[arg(long, env = "CIRCULANT_MAX_N", default_value_t = 20_000, global = true)]
    pub max_n: usize,
    /// Largest order for dense output and the Jacobi oracle.
    #[arg(
        long,
        env = "CIRCULANT_ORACLE_MAX_N",
        default_value_t = 512,
        global = true
    )]
    pub oracle_max_n: usize,
}

impl GlobalOpts {
    pub fn limits(&self) -> Limits {
        Limits {
            max_n: self.max_n,
            oracle_max_n: self.oracle_max_n,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dense adjacency or Laplacian matrix.
    Adjacency(MatrixArgs),
    /// Closed-form eigenvalue of every index, with class ids.
    Spectrum(MatrixArgs),
    /// Exact eigenvalue-index classes for prime n and two offsets.
    Classes(GraphArgs),
    /// Closed-form classes checked against the Jacobi oracle.
    OracleCompare(OracleArgs),
    /// Measure of a tracked eigenvector on a subset, over a range of orders.
    DqueSweep(SweepArgs),
    /// Orthonormality and eigen-residuals of random eigenbases.
    BasisCheck(BasisCheckArgs),
}

#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    #[arg(long)]
    pub n: usize,
    /// Offsets, comma separated and strictly increasing.
    #[arg(long, value_delimiter = ',', required = true)]
    pub a: Vec<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Use the Laplacian D - A instead of A.
    #[arg(long)]
    pub laplacian: bool,
}

#[derive(Args, Debug, Clone)]
pub struct OracleArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Initial clustering tolerance, tightened tenfold up to four times until
    /// the gap audit passes.
    #[arg(long, default_value_t = 1e-6)]
    pub gap_tol: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisArg {
    Fourier,
    Canonical,
    Rotated,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetArg {
    Arc,
    ShiftedArc,
    Custom,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct OrderSource {
    /// Admissible primes up to N for the two offsets.
    #[arg(long, value_name = "N")]
    pub primes_for: Option<u64>,
    /// Explicit odd orders.
    #[arg(long, value_delimiter = ',')]
    pub orders: Option<Vec<usize>>,
    /// Every valid odd order up to N.
    #[arg(long, value_name = "N")]
    pub odd_up_to: Option<usize>,
}

#[derive(Args, Debug, Clone)]
#[group(multiple = false)]
pub struct ThetaSource {
    /// One angle in radians for every order.
    #[arg(
        long = "theta-rad",
        visible_alias = "theta",
        allow_hyphen_values = true
    )]
    pub theta_rad: Option<f64>,
    /// One angle in radians per order.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta_list: Option<Vec<f64>>,
    /// Uniform angles in [0, pi/2], one per order, drawn from --seed.
    #[arg(long)]
    pub theta_random: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// Offsets, comma separated and strictly increasing.
    #[arg(long, value_delimiter = ',', required = true)]
    pub a: Vec<usize>,
    #[command(flatten)]
    pub orders: OrderSource,
    #[arg(long, value_enum, default_value_t = BasisArg::Canonical)]
    pub basis: BasisArg,
    #[arg(long, value_enum, default_value_t = SubsetArg::Arc)]
    pub subset: SubsetArg,
    /// Subset density for arcs.
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
    /// Vertices of a custom subset.
    #[arg(long, value_delimiter = ',')]
    pub members: Vec<usize>,
    #[command(flatten)]
    pub theta: ThetaSource,
    /// witness, v0, v:J, c:J or s:J.
    #[arg(long, default_value = "witness", value_parser = parse_eigvec)]
    pub eigvec: EigvecSelector,
}

#[derive(Args, Debug, Clone)]
pub struct BasisCheckArgs {
    #[arg(long, default_value_t = 50)]
    pub draws: usize,
    /// Orders are drawn as odd numbers in [5, N].
    #[arg(long, value_name = "N", default_value_t = 201)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value_t = BasisArg::Rotated)]
    pub basis: BasisArg,
}

fn parse_eigvec(s: &str) -> Result<EigvecSelector, String> {
    let index = |t: &str| {
        t.parse::<usize>()
            .map_err(|e| format!("bad index in {s:?}: {e}"))
    };
    match s {
        "witness" => Ok(EigvecSelector::Witness),
        "v0" | "constant" => Ok(EigvecSelector::Constant),
        _ => match s.split_once(':') {
            Some(("v", j)) => Ok(EigvecSelector::Fourier(index(j)?)),
            Some(("c", j)) => Ok(EigvecSelector::Cosine(index(j)?)),
            Some(("s", j)) => Ok(EigvecSelector::Sine(index(j)?)),
            _ => Err(format!("expected witness, v0, v:J, c:J or s:J, got {s:?}")),
        },
    }
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }
}

impl From<circulant_core::Error> for CliError {
    fn from(e: circulant_core::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// A command's table plus an optional verdict that turns into exit code 3
/// after the table has been written.
pub struct Report {
    pub table: Table,
    pub failure: Option<String>,
}

impl From<Table> for Report {
    fn from(table: Table) -> Self {
        Report {
            table,
            failure: None,
        }
    }
}

fn emit(table: &Table, global: &GlobalOpts) -> Result<(), CliError> {
    let sink: Box<dyn Write> = match &global.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match global.format {
        Format::Csv => table.write_csv(sink)?,
        Format::Json => table.write_json(sink)?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let g = &cli.global;
    let report = match cli.command {
        Command::Adjacency(args) => commands::adjacency(&args, g)?.into(),
        Command::Spectrum(args) => commands::spectrum(&args, g)?.into(),
        Command::Classes(args) => commands::classes(&args, g)?.into(),
        Command::OracleCompare(args) => commands::oracle_compare(&args, g)?,
        Command::DqueSweep(args) => commands::dque_sweep(&args, g)?.into(),
        Command::BasisCheck(args) => commands::basis_check(&args, g)?,
    };
    emit(&report.table, g)?;
    match report.failure {
        Some(msg) => Err(CliError::Numerical(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "weyl", version, about = "Weyl-transform verification suites and divergence scans")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Directory for CSV/JSON artifacts.
    #[arg(long, global = true, env = "WEYL_OUT_DIR", default_value = ".")]
    pub out: PathBuf,

    /// Relative tolerance of the adaptive quadrature.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,

    /// Absolute tolerance of the adaptive quadrature.
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the damped Bessel identity and Gauss's value of 2F1 at 1 on fixed grids.
    SpecfunVerify,
    /// Run the finite-group transform identities and inequalities on seeded random inputs.
    FiniteVerify(FiniteVerifyArgs),
    /// Minimum of the Bessel moment over a beta grid and a range of upper limits.
    Lemma32(Lemma32Args),
    /// Log-spaced partial-integral scan with a divergence verdict.
    Scan(ScanArgs),
    /// Exact parameter window for a given q.
    Window(WindowArgs),
    /// Group factor and Euclidean verdict for a product with a finite group.
    ProductSpace(ProductArgs),
}

#[derive(Debug, Args)]
pub struct FiniteVerifyArgs {
    /// cyclic:N, dihedral:M or file:PATH
    #[arg(long)]
    pub group: String,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct Lemma32Args {
    #[arg(long)]
    pub n: u32,
    /// Comma-separated beta grid; defaults to five points inside (n/3, n/2).
    #[arg(long, value_delimiter = ',')]
    pub beta: Vec<f64>,
    #[arg(long, default_value_t = 5.0)]
    pub a0: f64,
    #[arg(long, default_value_t = 200.0)]
    pub a_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    M2,
    Mn,
    Hmg,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::M2 => "m2",
            Family::Mn => "mn",
            Family::Hmg => "hmg",
        }
    }
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub group: Family,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub xi: Option<f64>,
    #[arg(long)]
    pub q: f64,
    /// Dimension: n >= 3 for mn, n >= 1 for hmg.
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, default_value_t = 1.0)]
    pub a0: f64,
    #[arg(long, default_value_t = 1000.0)]
    pub a_max: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda0: f64,
    #[arg(long, default_value_t = 1000.0)]
    pub lambda_max: f64,
    /// Grid size; defaults to 200 points per decade.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[arg(long, value_enum)]
    pub group: Family,
    /// Exact decimal or p/q.
    #[arg(long)]
    pub q: String,
    #[arg(long)]
    pub n: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupFunctionKind {
    /// Indicator of the identity element.
    Delta,
    /// The constant function 1.
    Constant,
    /// Seeded complex Gaussian values.
    Random,
}

#[derive(Debug, Args)]
pub struct ProductArgs {
    /// cyclic:N, dihedral:M or file:PATH
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub q: f64,
    #[arg(long, value_enum, default_value_t = GroupFunctionKind::Delta)]
    pub function: GroupFunctionKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

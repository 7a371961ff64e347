use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use crt_core::montecarlo::{Family, Normalization};
use crt_core::{LawKind, SeriesMode, SeriesSpec};

#[derive(Debug, Parser)]
#[command(
    name = "crt",
    version,
    about = "Height and diameter laws of the Brownian tree"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one law at one point.
    Eval(EvalArgs),
    /// Tabulate one law on a uniform grid.
    Table(TableArgs),
    /// Quantile of a marginal law.
    Quantile(QuantileArgs),
    /// Inverse-cdf draws from a marginal law.
    Sample(SampleArgs),
    /// Monte Carlo convergence study against the limit laws.
    Mc(McArgs),
    /// Both sides of Jacobi's theta identity.
    CheckJacobi(JacobiArgs),
    /// Laplace transforms: quadrature against closed form.
    CheckLaplace(LaplaceArgs),
    /// Joint law: inclusion-exclusion and boundary reductions.
    CheckJoint(CheckJointArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Law {
    Height,
    Diameter,
    Szekeres,
    /// `P(D > y, Γ > z)` and friends; `--x` is `y`, `--z` is `z`.
    Joint,
}

impl Law {
    pub fn marginal(self) -> Option<LawKind> {
        match self {
            Law::Height => Some(LawKind::HeightGamma),
            Law::Diameter => Some(LawKind::DiameterD),
            Law::Szekeres => Some(LawKind::SzekeresDelta),
            Law::Joint => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum What {
    Sf,
    Cdf,
    Pdf,
    /// Joint law only: `P(D ≤ y or Γ ≤ z)`.
    Union,
}

impl What {
    pub fn name(self) -> &'static str {
        match self {
            What::Sf => "sf",
            What::Cdf => "cdf",
            What::Pdf => "pdf",
            What::Union => "union",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Auto,
    Direct,
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Labelled,
    Planar,
    Excursion,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Labelled => Family::LabelledTree,
            FamilyArg::Planar => Family::PlanarTree,
            FamilyArg::Excursion => Family::Excursion,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Standard,
    Paper,
}

impl From<NormArg> for Normalization {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Standard => Normalization::StandardIto,
            NormArg::Paper => Normalization::PaperSqrt2,
        }
    }
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got '{s}'")),
    }
}

fn at_least_one(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("expected an integer ≥ 1, got '{s}'")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct SeriesOpts {
    /// Series representation.
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    pub mode: Mode,
    /// Absolute truncation tolerance.
    #[arg(long, value_parser = positive, default_value_t = SeriesSpec::default().tol)]
    pub tol: f64,
    /// Maximum number of series terms.
    #[arg(long, value_parser = at_least_one, default_value_t = SeriesSpec::default().max_terms)]
    pub max_terms: usize,
}

impl SeriesOpts {
    pub fn spec(&self) -> SeriesSpec {
        let mode = match self.mode {
            Mode::Auto => SeriesMode::Auto,
            Mode::Direct => SeriesMode::Direct,
            Mode::Dual => SeriesMode::ThetaDual,
        };
        SeriesSpec {
            mode,
            tol: self.tol,
            max_terms: self.max_terms,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputOpts {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout; relative paths resolve
    /// against `CRT_OUTPUT_DIR` when it is set.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub law: Law,
    #[arg(long, value_enum)]
    pub what: What,
    /// Evaluation point (the diameter threshold `y` for the joint law).
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    /// Height threshold of the joint law.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<f64>,
    #[command(flatten)]
    pub series: SeriesOpts,
    #[command(flatten)]
    pub out: OutputOpts,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub law: Law,
    #[arg(long, value_enum)]
    pub what: What,
    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,
    /// Number of grid points, endpoints included.
    #[arg(long, value_parser = at_least_one, default_value_t = 101)]
    pub points: usize,
    /// Height threshold of the joint law.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<f64>,
    #[command(flatten)]
    pub series: SeriesOpts,
    #[command(flatten)]
    pub out: OutputOpts,
}

#[derive(Debug, Clone, Args)]
pub struct QuantileArgs {
    #[arg(long, value_enum)]
    pub law: Law,
    /// Probability levels in (0, 1).
    #[arg(long, num_args = 1.., required = true)]
    pub p: Vec<f64>,
    #[arg(long, value_parser = positive, default_value_t = 1e-10)]
    pub tol_x: f64,
    #[command(flatten)]
    pub series: SeriesOpts,
    #[command(flatten)]
    pub out: OutputOpts,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub law: Law,
    #[arg(long, value_parser = at_least_one)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub series: SeriesOpts,
    #[command(flatten)]
    pub out: OutputOpts,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Number of vertices, or grid size for excursions.
    #[arg(long, value_parser = at_least_one)]
    pub n: usize,
    /// Number of replicates.
    #[arg(long, value_parser = at_least_one)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_parser = at_least_one)]
    pub threads: Option<usize>,
    /// Excursion scaling.
    #[arg(long, value_enum, default_value_t = NormArg::Paper)]
    pub normalization: NormArg,
    /// Largest KS statistic counted as a pass.
    #[arg(long, value_parser = positive, default_value_t = 0.02)]
    pub ks_tol: f64,
    /// Largest joint-survival deviation counted as a pass.
    #[arg(long, value_parser = positive, default_value_t = 0.01)]
    pub joint_tol: f64,
    /// Also write the rescaled observations as CSV.
    #[arg(long)]
    pub samples: Option<std::path::PathBuf>,
    /// Output format of the report.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct JacobiArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub y: f64,
    #[arg(long, value_parser = at_least_one, default_value_t = 20)]
    pub terms: usize,
    /// Largest accepted `|lhs - rhs|`.
    #[arg(long, value_parser = positive, default_value_t = 1e-12)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutputOpts,
}

#[derive(Debug, Clone, Args)]
pub struct LaplaceArgs {
    /// Check only this λ (with `--y` and `--z`); defaults to the 27-point grid.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<f64>,
    /// Tolerance for quadrature against closed form.
    #[arg(long, value_parser = positive, default_value_t = 1e-6)]
    pub tol: f64,
    /// Tolerance for the excursion-measure identities.
    #[arg(long, value_parser = positive, default_value_t = 1e-8)]
    pub identity_tol: f64,
    #[command(flatten)]
    pub out: OutputOpts,
}

#[derive(Debug, Clone, Args)]
pub struct CheckJointArgs {
    /// Grid points per axis on [0.5, 6] x [0.1, 6].
    #[arg(long, value_parser = at_least_one, default_value_t = 20)]
    pub points: usize,
    #[arg(long, value_parser = positive, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutputOpts,
}

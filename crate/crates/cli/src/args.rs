use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lommel_core::series::DEFAULT_REL_TOL;

#[derive(Debug, Parser)]
#[command(name = "lommel", version, about = "Normalized Lommel/Struve/Bessel series and starlike/convex membership")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a normalized function or one of its derivatives at a point of the closed unit disk.
    Eval(EvalArgs),
    /// Decide class membership from the coefficient-sum criterion.
    Check(CheckArgs),
    /// Cross-validate the criterion against sampling on a disk grid.
    Verify(VerifyArgs),
    /// Sweep nu along a family line (or a Lommel mu x nu rectangle).
    Scan(ScanArgs),
    /// Locate the membership boundary along a family line by bisection.
    Bisect(BisectArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Bessel,
    Struve,
    Lommel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Auto,
    SType,
    TType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct FunctionArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Lommel only.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: f64,
    /// `auto` picks the kernel the class requires (no convolution for eval).
    #[arg(long, value_enum, default_value = "auto")]
    pub kernel: KernelArg,
}

#[derive(Debug, Args)]
pub struct ClassArgs {
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// One of s-star, k, t-star, c.
    #[arg(long = "class")]
    pub class: String,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "human")]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    #[arg(long, default_value_t = 0)]
    pub order: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub class: ClassArgs,
    /// Also evaluate the printed closed-form inequality and compare verdicts.
    #[arg(long)]
    pub compare_paper_rhs: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub class: ClassArgs,
    #[arg(long, default_value_t = 32)]
    pub radii: usize,
    #[arg(long, default_value_t = 256)]
    pub angles: usize,
    #[arg(long, default_value_t = 0.995)]
    pub r_max: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// `lo:hi:step`.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: String,
    /// Lommel rectangle: `lo:hi:step` for mu.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "offset")]
    pub mu: Option<String>,
    /// Lommel line: fixed `mu - nu`.
    #[arg(long, allow_hyphen_values = true)]
    pub offset: Option<f64>,
    #[command(flatten)]
    pub class: ClassArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BisectArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Lommel line: fixed `mu - nu`.
    #[arg(long, allow_hyphen_values = true)]
    pub offset: Option<f64>,
    /// `lo:hi` bracket on nu.
    #[arg(long, allow_hyphen_values = true)]
    pub bracket: String,
    #[arg(long, default_value_t = lommel_core::scan::DEFAULT_BISECT_TOL)]
    pub abs_tol: f64,
    #[command(flatten)]
    pub class: ClassArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

//! `rigd`: tables and data files for relatively inexact gradient descent.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod grammar;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use table::Format;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct F64List(pub Vec<f64>);

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct U32List(pub Vec<u32>);

fn f64_list(s: &str) -> Result<F64List, String> {
    grammar::parse_f64_list(s).map(F64List)
}

fn u32_list(s: &str) -> Result<U32List, String> {
    grammar::parse_u32_list(s).map(U32List)
}

#[derive(Debug, Parser)]
#[command(name = "rigd", version, about = "Worst-case rates of gradient descent with relatively inexact gradients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HMaxPolicy {
    /// `--h-max` is a multiple of `2/(1+δ)`.
    Fraction,
    /// `--h-max` is an absolute stepsize, clipped to `2/(1+δ)`.
    Absolute,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RatesArgs {
    /// Inexactness levels.
    #[arg(long, value_parser = f64_list, default_value = "0,0.1,0.5,0.8")]
    pub delta: F64List,
    /// Smallest stepsize of the grid.
    #[arg(long, default_value_t = 0.0)]
    pub h_min: f64,
    /// Largest stepsize of the grid, interpreted by `--h-max-policy`.
    #[arg(long, default_value_t = 1.0)]
    pub h_max: f64,
    #[arg(long, value_enum, default_value_t = HMaxPolicy::Fraction)]
    pub h_max_policy: HMaxPolicy,
    /// Number of grid points per inexactness level.
    #[arg(long, default_value_t = 500)]
    pub points: usize,
    /// Iteration counts for the N-step columns.
    #[arg(long, value_parser = u32_list, default_value = "1,5,20")]
    pub n: U32List,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CertifyArgs {
    #[arg(long, value_parser = f64_list, default_value = "0.1,0.5,0.8")]
    pub delta: F64List,
    /// Number of interior stepsizes per inexactness level.
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    /// PSD tolerance on the smallest eigenvalue.
    #[arg(long, default_value_t = 1e-8)]
    pub psd_tol: f64,
    /// Tolerance on the gap between the certified and closed-form rates.
    #[arg(long, default_value_t = 1e-8)]
    pub rate_tol: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceArg {
    Huber,
    Quadratic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleArg {
    Exact,
    /// `d = (1−δ)∇f`
    Shrink,
    /// `d = (1+δ)∇f`
    Grow,
    /// Saturating error rotated by +90° (two dimensions only).
    Orthogonal,
    /// Uniformly random admissible error.
    Random,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub instance: InstanceArg,
    /// Oracle; defaults to `shrink` for the Huber instance and `grow` for the quadratic.
    #[arg(long, value_enum)]
    pub oracle: Option<OracleArg>,
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub h: f64,
    #[arg(long, default_value_t = 10_000)]
    pub n: u32,
    /// Smoothness constant.
    #[arg(long, default_value_t = 1.0)]
    pub l: f64,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trace CSV; stdout when omitted.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionArg {
    ToFstar,
    ToF1,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SearchArgs {
    #[arg(long)]
    pub h: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, value_enum, default_value_t = CriterionArg::ToFstar)]
    pub criterion: CriterionArg,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Number of multi-start points.
    #[arg(long, default_value_t = 10_000)]
    pub budget: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Run both the one- and two-dimensional searches (to_fstar only).
    #[arg(long)]
    pub compare: bool,
    /// Candidate JSON; stdout when omitted.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HoptArgs {
    #[arg(long, value_parser = f64_list, default_value = "0.1:0.9:0.1")]
    pub delta: F64List,
    #[arg(long, value_parser = u32_list, default_value = "1,5,20,50")]
    pub n: U32List,
    /// Largest accepted ratio between the rate at the closed-form stepsize and the optimum.
    #[arg(long, default_value_t = 1.05)]
    pub tolerance: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HmaxArgs {
    #[arg(long, value_parser = f64_list, default_value = "0:0.99:0.01")]
    pub delta_grid: F64List,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Regimes, one-step and N-step rates and lower bounds over a stepsize grid.
    Rates(RatesArgs),
    /// Build and check the dual certificates over a stepsize grid.
    Certify(CertifyArgs),
    /// Run the method on a worst-case instance and write the trace.
    Simulate(SimulateArgs),
    /// Search for a one-step worst case.
    Search(SearchArgs),
    /// Optimal stepsize of the N-step bound versus its closed-form approximation.
    Hopt(HoptArgs),
    /// Largest convergent stepsize compared with the previously known one.
    Hmax(HmaxArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Rates(a) => commands::rates(a),
        Command::Certify(a) => commands::certify(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Search(a) => commands::search(a),
        Command::Hopt(a) => commands::hopt(a),
        Command::Hmax(a) => commands::hmax(a),
    };
    match outcome {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            let list = serde_json::json!({ "failures": failures });
            eprintln!("{list}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

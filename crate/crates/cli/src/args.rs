use clap::{Args, Parser, Subcommand};
use photoref::config::{InitSpec, Suite};
use photoref::{make_grid, GridSpec, Sign};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "photoref", version, about = "Photorefractive beam propagation and solitary-wave tools")]
#[command(subcommand_required = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Split-step propagation of the saturated NLS equation.
    #[command(allow_negative_numbers = true)]
    PropagateNls(NlsArgs),
    /// Split-step propagation of the Zozulya-Anderson system.
    #[command(allow_negative_numbers = true)]
    PropagateZa(ZaArgs),
    /// Solve the potential equation for a stored complex field.
    #[command(allow_negative_numbers = true)]
    SolvePotential(PotentialArgs),
    /// Construct or classify solitary waves.
    #[command(allow_negative_numbers = true)]
    Soliton(SolitonArgs),
    /// Run a self-checking property suite.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON run configuration; flags take precedence over its values.
    /// A manifest written by a previous run is accepted as well.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// `N,L` per axis, e.g. `512,40` or `128,20,128,20`.
pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.is_empty() || !parts.len().is_multiple_of(2) {
        return Err(format!("expected N,L per axis, got `{s}`"));
    }
    let mut points = Vec::new();
    let mut lengths = Vec::new();
    for pair in parts.chunks(2) {
        points.push(pair[0].parse::<usize>().map_err(|e| format!("bad point count `{}`: {e}", pair[0]))?);
        lengths.push(pair[1].parse::<f64>().map_err(|e| format!("bad length `{}`: {e}", pair[1]))?);
    }
    make_grid(points.len(), &points, &lengths).map_err(|e| e.to_string())
}

pub fn parse_sign(s: &str) -> Result<Sign, String> {
    match s {
        "1" | "+1" | "+" => Ok(Sign::Focusing),
        "-1" | "-" => Ok(Sign::Defocusing),
        _ => Err(format!("a must be +1 or -1, got `{s}`")),
    }
}

#[derive(Debug, Args)]
pub struct NlsArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<GridSpec>,
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    pub a: Option<Sign>,
    /// Saturation parameter.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Background intensity `|A_inf|^2`.
    #[arg(long)]
    pub binf: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long = "T")]
    pub t_final: Option<f64>,
    #[arg(long)]
    pub report_every: Option<usize>,
    /// `file:PATH`, `gaussian:AMP,WIDTH` or `bright:UM`.
    #[arg(long)]
    pub init: Option<InitSpec>,
    /// Final field (PRF1).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Conserved-quantity time series (CSV).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ZaArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<GridSpec>,
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    pub a: Option<Sign>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long = "T")]
    pub t_final: Option<f64>,
    #[arg(long)]
    pub eps_reg: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub report_every: Option<usize>,
    /// `file:PATH`, `gaussian:AMP,WIDTH` or `stripe:UM`.
    #[arg(long)]
    pub init: Option<InitSpec>,
    /// Replace the potential equation by its small-amplitude limit.
    #[arg(long)]
    pub ds_limit: bool,
    /// Final field (PRF1).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Mass and potential-bound time series (CSV).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PotentialArgs {
    #[command(flatten)]
    pub common: Common,
    /// Complex field `A` (PRF1).
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub eps_reg: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Potential `phi` (PRF1 real field).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Solver report (JSON).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolitonArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub kind: SolitonCmd,
    /// Profile samples (CSV).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Summary (JSON).
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SolitonCmd {
    /// Focusing bright profile with peak `um`.
    #[command(allow_negative_numbers = true)]
    Bright {
        #[arg(long)]
        um: f64,
        #[arg(long, default_value_t = 40.0)]
        x_max: f64,
        #[arg(long, default_value_t = 2048)]
        n: usize,
    },
    /// Defocusing dark profile on background `uinf`.
    #[command(allow_negative_numbers = true)]
    Dark {
        #[arg(long)]
        uinf: f64,
        #[arg(long, default_value_t = 40.0)]
        x_max: f64,
        #[arg(long, default_value_t = 2048)]
        n: usize,
    },
    /// Radial ground state by shooting.
    #[command(allow_negative_numbers = true)]
    Radial {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        omega: f64,
        /// Radial sample spacing.
        #[arg(long)]
        dr: Option<f64>,
    },
    /// Classify `(a, omega, dim)` against the nonexistence results.
    #[command(allow_negative_numbers = true)]
    Window {
        #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
        a: Sign,
        #[arg(long, allow_hyphen_values = true)]
        omega: f64,
        #[arg(long)]
        dim: usize,
    },
    /// Check the shooting hypotheses for the focusing nonlinearity.
    #[command(allow_negative_numbers = true)]
    Blp {
        #[arg(long)]
        omega: f64,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub suite: Option<Suite>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Report (JSON); the table always goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

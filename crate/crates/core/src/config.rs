//! Run configuration: JSON documents merged with command-line overrides.

use crate::field::ComplexField;
use crate::grid::{GridError, GridSpec};
use crate::model::{ModelParams, Sign};
use crate::potential::SolverConfig;
use crate::prf1::{self, Prf1Error};
use crate::soliton::{bright_profile, ShootingConfig, SolitonError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    PropagateNls,
    PropagateZa,
    SolvePotential,
    Soliton,
    Verify,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::PropagateNls => "propagate-nls",
            Command::PropagateZa => "propagate-za",
            Command::SolvePotential => "solve-potential",
            Command::Soliton => "soliton",
            Command::Verify => "verify",
        })
    }
}

/// Initial data: `file:PATH`, `gaussian:AMP,WIDTH` (`AMP exp(-|x|^2 / WIDTH^2)`),
/// `bright:UM` (1D bright profile) or `stripe:UM` (the bright profile along
/// `x`, constant along `y`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum InitSpec {
    File(PathBuf),
    Gaussian { amplitude: f64, width: f64 },
    Bright { u_m: f64 },
    Stripe { u_m: f64 },
}

impl fmt::Display for InitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitSpec::File(p) => write!(f, "file:{}", p.display()),
            InitSpec::Gaussian { amplitude, width } => write!(f, "gaussian:{amplitude:?},{width:?}"),
            InitSpec::Bright { u_m } => write!(f, "bright:{u_m:?}"),
            InitSpec::Stripe { u_m } => write!(f, "stripe:{u_m:?}"),
        }
    }
}

impl From<InitSpec> for String {
    fn from(s: InitSpec) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for InitSpec {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl FromStr for InitSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| format!("init `{s}` must look like KIND:ARGS"))?;
        let num = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| format!("init `{s}`: `{v}` is not a number"))
        };
        match kind {
            "file" if !rest.is_empty() => Ok(InitSpec::File(PathBuf::from(rest))),
            "gaussian" => {
                let (a, w) = rest
                    .split_once(',')
                    .ok_or_else(|| format!("init `{s}`: expected gaussian:AMP,WIDTH"))?;
                Ok(InitSpec::Gaussian {
                    amplitude: num(a)?,
                    width: num(w)?,
                })
            }
            "bright" => Ok(InitSpec::Bright { u_m: num(rest)? }),
            "stripe" => Ok(InitSpec::Stripe { u_m: num(rest)? }),
            _ => Err(format!(
                "init `{s}`: kind must be file, gaussian, bright or stripe"
            )),
        }
    }
}

#[derive(Debug, Error)]
pub enum InitError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Prf1(#[from] Prf1Error),
    #[error(transparent)]
    Soliton(#[from] SolitonError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

impl InitSpec {
    fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        match *self {
            InitSpec::Gaussian { amplitude, width } => {
                if !amplitude.is_finite() {
                    out.push(format!("init amplitude must be finite, got {amplitude}"));
                }
                if !(width.is_finite() && width > 0.0) {
                    out.push(format!("init width must be finite and > 0, got {width}"));
                }
            }
            InitSpec::Bright { u_m } | InitSpec::Stripe { u_m } => {
                if !(u_m.is_finite() && u_m > 0.0) {
                    out.push(format!("init peak must be finite and > 0, got {u_m}"));
                }
            }
            InitSpec::File(_) => {}
        }
        out
    }

    /// Samples the initial field on `grid`. Files must carry exactly `grid`.
    pub fn build(&self, grid: &GridSpec) -> Result<ComplexField, InitError> {
        match self {
            InitSpec::File(path) => {
                let f = prf1::read_path(path)?.into_complex()?;
                f.grid().ensure_same(grid)?;
                Ok(f)
            }
            &InitSpec::Gaussian { amplitude, width } => Ok(ComplexField::from_fn(grid, |x| {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                Complex64::new(amplitude * (-r2 / (width * width)).exp(), 0.0)
            })),
            &InitSpec::Bright { u_m } => {
                if grid.dim() != 1 {
                    return Err(InitError::Invalid(
                        "bright initial data needs a 1D grid (use stripe in 2D)".into(),
                    ));
                }
                let p = bright_profile(u_m, 0.5 * grid.lengths()[0], grid.points()[0])?;
                Ok(p.to_field())
            }
            &InitSpec::Stripe { u_m } => {
                let p = bright_profile(u_m, 0.5 * grid.lengths()[0], grid.points()[0])?;
                if grid.dim() == 1 {
                    return Ok(p.to_field());
                }
                let ny = grid.points()[1];
                let values = p
                    .u
                    .iter()
                    .flat_map(|&u| std::iter::repeat_n(Complex64::new(u, 0.0), ny))
                    .collect();
                Ok(ComplexField::new(grid.clone(), values).expect("finite profile"))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Numerics {
    pub dt: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub tol: f64,
    pub max_iter: Option<usize>,
    pub eps_reg: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_final: 1.0,
            tol: crate::potential::DEFAULT_TOL,
            max_iter: None,
            eps_reg: 0.0,
        }
    }
}

impl Numerics {
    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            tol: self.tol,
            max_iter: self.max_iter,
            eps_reg: self.eps_reg,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IoConfig {
    pub init: Option<InitSpec>,
    /// Input field (solve-potential).
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub report_every: usize,
}

impl Default for IoConfig {
    fn default() -> Self {
        Self {
            init: None,
            input: None,
            output: None,
            report: None,
            report_every: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "kebab-case")]
pub enum SolitonJob {
    Bright { u_m: f64, x_max: f64, n: usize },
    Dark { u_inf: f64, x_max: f64, n: usize },
    Radial { dim: usize, omega: f64, shooting: ShootingConfig },
    Window { a: Sign, omega: f64, dim: usize },
    Blp { omega: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    SpectralExactness,
    NlsConservation,
    ZaBound,
    SolitonIdentities,
    NonexistenceWindow,
    AppendixF,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::SpectralExactness,
        Suite::NlsConservation,
        Suite::ZaBound,
        Suite::SolitonIdentities,
        Suite::NonexistenceWindow,
        Suite::AppendixF,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SpectralExactness => "spectral-exactness",
            Suite::NlsConservation => "nls-conservation",
            Suite::ZaBound => "za-bound",
            Suite::SolitonIdentities => "soliton-identities",
            Suite::NonexistenceWindow => "nonexistence-window",
            Suite::AppendixF => "appendix-F",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s || x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
                format!("unknown suite `{s}`; expected one of {}", names.join(", "))
            })
    }
}

fn default_grid() -> GridSpec {
    GridSpec::line(512, 40.0).expect("valid default grid")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub model: ModelParams,
    #[serde(default = "default_grid")]
    pub grid: GridSpec,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub io: IoConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub soliton: Option<SolitonJob>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            model: ModelParams::default(),
            grid: default_grid(),
            numerics: Numerics::default(),
            io: IoConfig::default(),
            seed: 0,
            soliton: None,
            suite: None,
        }
    }

    /// Every violated constraint for the dispatched command.
    pub fn violations(&self) -> Vec<String> {
        let mut out: Vec<String> = self.model.violations().iter().map(|e| e.to_string()).collect();
        let n = &self.numerics;
        let propagates = matches!(self.command, Command::PropagateNls | Command::PropagateZa);
        if propagates {
            if !(n.dt.is_finite() && n.dt > 0.0) {
                out.push(format!("dt must be finite and > 0, got {}", n.dt));
            }
            if !(n.t_final.is_finite() && n.t_final > 0.0) {
                out.push(format!("T must be finite and > 0, got {}", n.t_final));
            }
            if n.dt > n.t_final {
                out.push(format!("dt = {} must not exceed T = {}", n.dt, n.t_final));
            }
            if self.io.report_every == 0 {
                out.push("report_every must be >= 1".into());
            }
            match &self.io.init {
                None => out.push("initial data (init) is required".into()),
                Some(init) => out.extend(init.violations()),
            }
        }
        if matches!(self.command, Command::PropagateZa | Command::SolvePotential) {
            if !(n.tol.is_finite() && n.tol > 0.0) {
                out.push(format!("tol must be finite and > 0, got {}", n.tol));
            }
            if n.max_iter == Some(0) {
                out.push("max_iter must be >= 1".into());
            }
            if !(n.eps_reg.is_finite() && n.eps_reg >= 0.0) {
                out.push(format!("eps_reg must be finite and >= 0, got {}", n.eps_reg));
            }
        }
        match self.command {
            Command::SolvePotential if self.io.input.is_none() => {
                out.push("input field path is required".into())
            }
            Command::Soliton if self.soliton.is_none() => out.push("soliton job is required".into()),
            Command::Verify if self.suite.is_none() => out.push("verify suite is required".into()),
            _ => {}
        }
        out
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub a: Option<Sign>,
    pub saturation: Option<f64>,
    pub background: Option<f64>,
    pub grid: Option<GridSpec>,
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub eps_reg: Option<f64>,
    pub init: Option<InitSpec>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub report_every: Option<usize>,
    pub seed: Option<u64>,
    pub soliton: Option<SolitonJob>,
    pub suite: Option<Suite>,
}

impl Overrides {
    pub fn apply(&self, c: &mut RunConfig) {
        if let Some(a) = self.a {
            c.model.a = a;
        }
        if let Some(e) = self.saturation {
            c.model.saturation = e;
        }
        if let Some(b) = self.background {
            c.model = c.model.with_background(b);
        }
        if let Some(g) = &self.grid {
            c.grid = g.clone();
        }
        let n = &mut c.numerics;
        n.dt = self.dt.unwrap_or(n.dt);
        n.t_final = self.t_final.unwrap_or(n.t_final);
        n.tol = self.tol.unwrap_or(n.tol);
        n.max_iter = self.max_iter.or(n.max_iter);
        n.eps_reg = self.eps_reg.unwrap_or(n.eps_reg);
        let io = &mut c.io;
        if self.init.is_some() {
            io.init = self.init.clone();
        }
        if self.input.is_some() {
            io.input = self.input.clone();
        }
        if self.output.is_some() {
            io.output = self.output.clone();
        }
        if self.report.is_some() {
            io.report = self.report.clone();
        }
        io.report_every = self.report_every.unwrap_or(io.report_every);
        c.seed = self.seed.unwrap_or(c.seed);
        if self.soliton.is_some() {
            c.soliton = self.soliton;
        }
        if self.suite.is_some() {
            c.suite = self.suite;
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("malformed configuration: {0}")]
    Parse(String),
    #[error("configuration is for `{found}`, not `{expected}`")]
    CommandMismatch { expected: Command, found: Command },
    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Invalid(Vec<String>),
}

/// Parses an optional JSON document, applies `overrides` and validates the
/// result, reporting every violation at once.
pub fn parse_config(
    command: Command,
    text: Option<&str>,
    overrides: &Overrides,
) -> Result<RunConfig, ConfigError> {
    let mut config = match text {
        Some(t) => {
            let c: RunConfig = serde_json::from_str(t).map_err(|e| ConfigError::Parse(e.to_string()))?;
            if c.command != command {
                return Err(ConfigError::CommandMismatch {
                    expected: command,
                    found: c.command,
                });
            }
            c
        }
        None => RunConfig::new(command),
    };
    overrides.apply(&mut config);
    let bad = config.violations();
    if bad.is_empty() {
        Ok(config)
    } else {
        Err(ConfigError::Invalid(bad))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn minimal_document_gets_defaults() {
        let c = parse_config(
            Command::PropagateNls,
            Some(r#"{"command": "propagate-nls", "io": {"init": "gaussian:1,2"}}"#),
            &Overrides::default(),
        )
        .unwrap();
        assert_eq!(c.numerics, Numerics::default());
        assert_eq!(c.grid, default_grid());
        assert_eq!(c.io.init, Some(InitSpec::Gaussian { amplitude: 1.0, width: 2.0 }));
    }

    #[test]
    fn negative_dt_is_named() {
        let o = Overrides {
            dt: Some(-1.0),
            init: Some(InitSpec::Bright { u_m: 1.0 }),
            ..Overrides::default()
        };
        match parse_config(Command::PropagateNls, None, &o) {
            Err(ConfigError::Invalid(v)) => assert!(v.iter().any(|m| m.starts_with("dt must"))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn violations_are_collected() {
        let text = r#"{"command": "propagate-za", "model": {"saturation": -1},
            "numerics": {"dt": 0, "T": -1, "tol": 0}, "io": {"report_every": 0}}"#;
        match parse_config(Command::PropagateZa, Some(text), &Overrides::default()) {
            Err(ConfigError::Invalid(v)) => assert!(v.len() >= 6, "{v:?}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn flags_override_file() {
        let text = r#"{"command": "propagate-nls", "numerics": {"dt": 0.01, "T": 2}, "io": {"init": "bright:1"}}"#;
        let o = Overrides {
            dt: Some(0.005),
            ..Overrides::default()
        };
        let c = parse_config(Command::PropagateNls, Some(text), &o).unwrap();
        assert_eq!(c.numerics.dt, 0.005);
        assert_eq!(c.numerics.t_final, 2.0);
    }

    #[test]
    fn unknown_keys_and_wrong_command_rejected() {
        let bad = r#"{"command": "verify", "suite": "za-bound", "colour": 1}"#;
        assert!(matches!(parse_config(Command::Verify, Some(bad), &Overrides::default()), Err(ConfigError::Parse(_))));
        let nested = r#"{"command": "verify", "suite": "za-bound", "numerics": {"dtt": 1}}"#;
        assert!(matches!(parse_config(Command::Verify, Some(nested), &Overrides::default()), Err(ConfigError::Parse(_))));
        let other = r#"{"command": "verify", "suite": "za-bound"}"#;
        assert!(matches!(
            parse_config(Command::Soliton, Some(other), &Overrides::default()),
            Err(ConfigError::CommandMismatch { .. })
        ));
    }

    #[test]
    fn init_spec_syntax() {
        assert_eq!("file:/tmp/a.prf1".parse::<InitSpec>().unwrap(), InitSpec::File("/tmp/a.prf1".into()));
        assert!("gaussian:1".parse::<InitSpec>().is_err());
        assert!("plane:1".parse::<InitSpec>().is_err());
        assert_eq!("stripe:0.5".parse::<InitSpec>().unwrap(), InitSpec::Stripe { u_m: 0.5 });
        assert_eq!("appendix-F".parse::<Suite>().unwrap(), Suite::AppendixF);
    }

    #[test]
    fn stripe_is_y_independent() {
        let g = GridSpec::square(64, 80.0).unwrap();
        let f = InitSpec::Stripe { u_m: 1.0 }.build(&g).unwrap();
        for row in f.values().chunks(64) {
            assert!(row.iter().all(|z| *z == row[0]));
        }
        assert!(InitSpec::Bright { u_m: 1.0 }.build(&g).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(
            dt in 1e-6f64..1.0,
            t in 1.0f64..100.0,
            eps in 1e-3f64..10.0,
            amp in -5.0f64..5.0,
            width in 1e-2f64..10.0,
            seed in any::<u64>(),
            len in 1.0f64..500.0,
        ) {
            let mut c = RunConfig::new(Command::PropagateNls);
            c.numerics.dt = dt;
            c.numerics.t_final = t;
            c.model.saturation = eps;
            c.grid = GridSpec::square(32, len).unwrap();
            c.io.init = Some(InitSpec::Gaussian { amplitude: amp, width });
            c.seed = seed;
            c.soliton = Some(SolitonJob::Radial { dim: 2, omega: dt, shooting: ShootingConfig::default() });
            let text = serde_json::to_string(&c).unwrap();
            let back: RunConfig = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
        }
    }
}

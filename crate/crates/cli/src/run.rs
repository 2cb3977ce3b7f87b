use crate::args::{Cli, Cmd, NlsArgs, PotentialArgs, SolitonArgs, SolitonCmd, VerifyArgs, ZaArgs};
use photoref::config::{parse_config, Command, ConfigError, Overrides, RunConfig, SolitonJob};
use photoref::nls::{propagate_nls, PropagationError};
use photoref::potential::{PotentialError, PotentialSolver};
use photoref::soliton::{
    blp_check, bright_profile, dark_profile, decay_check, existence_window, identity_residuals,
    shoot_radial, ShootingConfig, SolitonError,
};
use photoref::verify::run_verify;
use photoref::za::{propagate_za_with, PotentialModel};
use photoref::{prf1, Sign};
use serde_json::{json, Value};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

/// Exit 1 for usage and I/O problems, 2 for numerical failures.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numerical(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Numerical(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<PropagationError> for Failure {
    fn from(e: PropagationError) -> Self {
        match e {
            PropagationError::InvalidArgument(m) => Failure::Usage(m),
            other => Failure::Numerical(other.to_string()),
        }
    }
}

impl From<PotentialError> for Failure {
    fn from(e: PotentialError) -> Self {
        match e {
            PotentialError::InvalidArgument(m) => Failure::Usage(m),
            other => Failure::Numerical(other.to_string()),
        }
    }
}

impl From<SolitonError> for Failure {
    fn from(e: SolitonError) -> Self {
        match e {
            SolitonError::InvalidArgument(_) | SolitonError::Grid(_) => Failure::Usage(e.to_string()),
            other => Failure::Numerical(other.to_string()),
        }
    }
}

fn io_err(path: &Path, e: impl fmt::Display) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

/// Reads a run configuration, or the `config` member of a manifest.
fn load_config_text(path: Option<&Path>) -> Result<Option<String>, Failure> {
    let Some(path) = path else { return Ok(None) };
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    if let Ok(Value::Object(map)) = serde_json::from_str::<Value>(&text) {
        if map.contains_key("manifest_version") {
            if let Some(inner) = map.get("config") {
                return Ok(Some(inner.to_string()));
            }
        }
    }
    Ok(Some(text))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn manifest_path(config: &RunConfig) -> Option<PathBuf> {
    let base = config.io.output.as_ref().or(config.io.report.as_ref())?;
    let mut s = base.clone().into_os_string();
    s.push(".manifest.json");
    Some(PathBuf::from(s))
}

/// Everything needed to repeat the run: the validated configuration,
/// the tool version and the outcome.
fn write_manifest(config: &RunConfig, outcome: &Result<(), Failure>) -> Result<(), Failure> {
    let status = match outcome {
        Ok(()) => json!({ "status": "ok", "exit_code": 0 }),
        Err(f) => json!({ "status": "failed", "exit_code": f.code(), "message": f.to_string() }),
    };
    let manifest = json!({
        "manifest_version": 1,
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "command": config.command,
        "seed": config.seed,
        "config": config,
        "outcome": status,
    });
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    match manifest_path(config) {
        Some(p) => write_text(&p, &text),
        None => {
            eprintln!("{text}");
            Ok(())
        }
    }
}

pub fn execute(cli: Cli) -> Result<(), Failure> {
    let (config, job): (RunConfig, Job) = match cli.command {
        Cmd::PropagateNls(a) => (nls_config(&a)?, Job::Nls),
        Cmd::PropagateZa(a) => {
            let ds = a.ds_limit;
            (za_config(&a)?, Job::Za { ds })
        }
        Cmd::SolvePotential(a) => (potential_config(&a)?, Job::Potential),
        Cmd::Soliton(a) => (soliton_config(&a)?, Job::Soliton),
        Cmd::Verify(a) => (verify_config(&a)?, Job::Verify),
    };
    let outcome = match job {
        Job::Nls => run_nls(&config),
        Job::Za { ds } => run_za(&config, ds),
        Job::Potential => run_potential(&config),
        Job::Soliton => run_soliton(&config),
        Job::Verify => run_verify_cmd(&config),
    };
    write_manifest(&config, &outcome)?;
    outcome
}

enum Job {
    Nls,
    Za { ds: bool },
    Potential,
    Soliton,
    Verify,
}

fn nls_config(a: &NlsArgs) -> Result<RunConfig, Failure> {
    let text = load_config_text(a.common.config.as_deref())?;
    let o = Overrides {
        a: a.a,
        saturation: a.eps,
        background: a.binf,
        grid: a.grid.clone(),
        dt: a.dt,
        t_final: a.t_final,
        init: a.init.clone(),
        output: a.out.clone(),
        report: a.report.clone(),
        report_every: a.report_every,
        ..Overrides::default()
    };
    Ok(parse_config(Command::PropagateNls, text.as_deref(), &o)?)
}

fn za_config(a: &ZaArgs) -> Result<RunConfig, Failure> {
    let text = load_config_text(a.common.config.as_deref())?;
    let o = Overrides {
        a: a.a,
        grid: a.grid.clone(),
        dt: a.dt,
        t_final: a.t_final,
        tol: a.tol,
        max_iter: a.max_iter,
        eps_reg: a.eps_reg,
        init: a.init.clone(),
        output: a.out.clone(),
        report: a.report.clone(),
        report_every: a.report_every,
        ..Overrides::default()
    };
    Ok(parse_config(Command::PropagateZa, text.as_deref(), &o)?)
}

fn potential_config(a: &PotentialArgs) -> Result<RunConfig, Failure> {
    let text = load_config_text(a.common.config.as_deref())?;
    let o = Overrides {
        tol: a.tol,
        max_iter: a.max_iter,
        eps_reg: a.eps_reg,
        input: a.input.clone(),
        output: a.out.clone(),
        report: a.report.clone(),
        ..Overrides::default()
    };
    Ok(parse_config(Command::SolvePotential, text.as_deref(), &o)?)
}

fn soliton_config(a: &SolitonArgs) -> Result<RunConfig, Failure> {
    let text = load_config_text(a.common.config.as_deref())?;
    let base = match &text {
        Some(t) => parse_config(Command::Soliton, Some(t), &Overrides {
            soliton: Some(SolitonJob::Blp { omega: 0.5 }),
            ..Overrides::default()
        })
        .ok()
        .and_then(|c| c.soliton),
        None => None,
    };
    let job = match a.kind {
        SolitonCmd::Bright { um, x_max, n } => SolitonJob::Bright { u_m: um, x_max, n },
        SolitonCmd::Dark { uinf, x_max, n } => SolitonJob::Dark { u_inf: uinf, x_max, n },
        SolitonCmd::Radial { dim, omega, dr } => {
            let mut shooting = match base {
                Some(SolitonJob::Radial { shooting, .. }) => shooting,
                _ => ShootingConfig::default(),
            };
            if let Some(dr) = dr {
                shooting.dr = dr;
            }
            SolitonJob::Radial { dim, omega, shooting }
        }
        SolitonCmd::Window { a, omega, dim } => SolitonJob::Window { a, omega, dim },
        SolitonCmd::Blp { omega } => SolitonJob::Blp { omega },
    };
    let o = Overrides {
        soliton: Some(job),
        output: a.out.clone(),
        report: a.report.clone(),
        ..Overrides::default()
    };
    Ok(parse_config(Command::Soliton, text.as_deref(), &o)?)
}

fn verify_config(a: &VerifyArgs) -> Result<RunConfig, Failure> {
    let text = load_config_text(a.common.config.as_deref())?;
    let o = Overrides {
        suite: a.suite,
        seed: a.seed,
        report: a.out.clone(),
        ..Overrides::default()
    };
    Ok(parse_config(Command::Verify, text.as_deref(), &o)?)
}

fn initial_field(config: &RunConfig) -> Result<photoref::ComplexField, Failure> {
    let init = config.io.init.as_ref().expect("validated config has init");
    init.build(&config.grid).map_err(|e| Failure::Usage(format!("initial data: {e}")))
}

fn write_field(path: &Path, f: &photoref::ComplexField) -> Result<(), Failure> {
    prf1::write_complex_path(path, f).map_err(|e| io_err(path, e))
}

fn run_nls(config: &RunConfig) -> Result<(), Failure> {
    let a0 = initial_field(config)?;
    let n = &config.numerics;
    let run = propagate_nls(&a0, &config.model, n.t_final, n.dt, config.io.report_every)?;
    let mut csv = String::from("time,mass,energy,grad_sq,h1_ok\n");
    for r in &run.reports {
        csv.push_str(&format!("{},{},{},{},{}\n", r.time, r.mass, r.energy, r.grad_sq, r.h1_bound_ok));
    }
    emit_csv(config.io.report.as_deref(), &csv)?;
    if let Some(p) = &config.io.output {
        write_field(p, &run.field)?;
    }
    if run.reports.iter().all(|r| r.h1_bound_ok) {
        Ok(())
    } else {
        Err(Failure::Numerical("H1 bound violated; see the report".into()))
    }
}

fn run_za(config: &RunConfig, ds: bool) -> Result<(), Failure> {
    let a0 = initial_field(config)?;
    let n = &config.numerics;
    let model = if ds {
        PotentialModel::DaveyStewartson
    } else {
        PotentialModel::ZozulyaAnderson(n.solver())
    };
    let run = propagate_za_with(&a0, config.model.a, model, n.t_final, n.dt, config.io.report_every)?;
    let mut csv = String::from("time,mass,bound_lhs,bound_rhs,solver_iters,residual\n");
    for r in &run.reports {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.time, r.mass, r.bound_lhs, r.bound_rhs, r.solver_iters, r.residual
        ));
    }
    emit_csv(config.io.report.as_deref(), &csv)?;
    if let Some(p) = &config.io.output {
        write_field(p, &run.state.field)?;
    }
    if ds || run.reports.iter().all(|r| r.bound_ok) {
        Ok(())
    } else {
        Err(Failure::Numerical("potential bound violated; see the report".into()))
    }
}

fn emit_csv(path: Option<&Path>, csv: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write_text(p, csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn emit_json(path: Option<&Path>, v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("report serializes");
    match path {
        Some(p) => write_text(p, &text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run_potential(config: &RunConfig) -> Result<(), Failure> {
    let path = config.io.input.as_ref().expect("validated config has input");
    let field = prf1::read_path(path)
        .and_then(|f| f.into_complex())
        .map_err(|e| io_err(path, e))?;
    let (phi, report) = PotentialSolver::new(config.numerics.solver()).solve(&field, None)?;
    emit_json(config.io.report.as_deref(), &serde_json::to_value(report).expect("serializes"))?;
    if let Some(p) = &config.io.output {
        prf1::write_real_path(p, &phi).map_err(|e| io_err(p, e))?;
    }
    Ok(())
}

fn profile_csv(header: &str, samples: impl Iterator<Item = (f64, f64)>) -> String {
    let mut csv = format!("{header},u\n");
    for (x, u) in samples {
        csv.push_str(&format!("{x},{u}\n"));
    }
    csv
}

fn run_soliton(config: &RunConfig) -> Result<(), Failure> {
    let job = config.soliton.expect("validated config has a job");
    let out = config.io.output.as_deref();
    let report = match job {
        SolitonJob::Bright { u_m, x_max, n } => {
            let p = bright_profile(u_m, x_max, n)?;
            if let Some(o) = out {
                write_text(o, &profile_csv("x", p.samples()))?;
            }
            let (energy, pohozaev) = identity_residuals(&p, p.omega, Sign::Focusing, 1);
            let decay = decay_check(&p, p.omega).ok();
            json!({
                "kind": "bright",
                "u_m": u_m,
                "omega": p.omega,
                "ode_residual": p.ode_residual,
                "first_integral_defect": p.first_integral_defect,
                "tail": p.tail,
                "energy_residual": energy,
                "pohozaev_residual": pohozaev,
                "decay_rate": decay.map(|d| d.fit.rate),
                "decay": decay,
                "window": existence_window(Sign::Focusing, p.omega, 1),
            })
        }
        SolitonJob::Dark { u_inf, x_max, n } => {
            let p = dark_profile(u_inf, x_max, n)?;
            if let Some(o) = out {
                write_text(o, &profile_csv("x", p.samples()))?;
            }
            json!({
                "kind": "dark",
                "u_inf": u_inf,
                "ode_residual": p.ode_residual,
                "first_integral_defect": p.first_integral_defect,
                "tail": p.tail,
            })
        }
        SolitonJob::Radial { dim, omega, shooting } => {
            let s = shoot_radial(dim, omega, shooting)?;
            if let Some(o) = out {
                write_text(o, &profile_csv("r", s.samples()))?;
            }
            let (energy, pohozaev) = identity_residuals(&s, omega, Sign::Focusing, dim);
            let decay = decay_check(&s, omega).ok();
            json!({
                "kind": "radial",
                "dim": dim,
                "omega": omega,
                "zeta_star": s.zeta_star,
                "certified": s.certified(),
                "bracket": s.bracket,
                "certificate": s.certificate,
                "join_radius": s.join_radius,
                "join_slope_defect": s.join_slope_defect,
                "ode_residual": s.ode_residual,
                "energy_residual": energy,
                "pohozaev_residual": pohozaev,
                "decay_rate": decay.map(|d| d.fit.rate),
                "decay": decay,
                "window": existence_window(Sign::Focusing, omega, dim),
                "blp": blp_check(omega).ok(),
            })
        }
        SolitonJob::Window { a, omega, dim } => json!({
            "kind": "window",
            "a": a,
            "omega": omega,
            "dim": dim,
            "window": existence_window(a, omega, dim),
        }),
        SolitonJob::Blp { omega } => {
            let b = blp_check(omega)?;
            json!({ "kind": "blp", "all_ok": b.all_ok(), "report": b })
        }
    };
    emit_json(config.io.report.as_deref(), &report)
}

fn run_verify_cmd(config: &RunConfig) -> Result<(), Failure> {
    let suite = config.suite.expect("validated config has a suite");
    let report = run_verify(suite, config.seed);
    print!("{}", report.to_table());
    if let Some(p) = &config.io.report {
        write_text(p, &report.to_json())?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("suite {} failed", report.suite)))
    }
}

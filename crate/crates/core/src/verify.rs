//! Self-checking property suites with deterministic, seedable reports.

use crate::config::Suite;
use crate::field::{ComplexField, RealField};
use crate::grid::GridSpec;
use crate::model::{ModelParams, Sign};
use crate::nls::propagate_nls;
use crate::potential::{solve_potential, SolverConfig, BOUND_TOL};
use crate::soliton::{
    appendix_F, appendix_Fprime_negative, blp_check, bright_profile, dark_profile, decay_check,
    existence_window, identity_residuals, shoot_radial, ExclusionClause, ShootingConfig,
    SolitonError, WindowClass,
};
use crate::spectral;
use crate::za::propagate_za;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub measured: f64,
    /// Threshold the measured value is compared against.
    pub tolerance: f64,
    /// The identity, bound or window the check exercises.
    pub anchor: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub status: Status,
    pub checks: Vec<CheckRecord>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(4).max(4);
        let mut out = String::new();
        let _ = writeln!(out, "suite {} (seed {}): {:?}", self.suite, self.seed, self.status);
        let _ = writeln!(out, "{:<width$}  {:<4}  {:>12}  {:>12}  anchor", "name", "ok", "measured", "tolerance");
        for c in &self.checks {
            let ok = if c.status == Status::Pass { "pass" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{:<width$}  {:<4}  {:>12.4e}  {:>12.4e}  {}",
                c.name, ok, c.measured, c.tolerance, c.anchor
            );
        }
        out
    }
}

#[derive(Default)]
struct Checks(Vec<CheckRecord>);

impl Checks {
    /// Passes when `measured <= tolerance`.
    fn at_most(&mut self, name: impl Into<String>, measured: f64, tolerance: f64, anchor: &str) {
        let ok = measured <= tolerance;
        self.push(name, ok, measured, tolerance, anchor);
    }

    /// Passes when `measured >= tolerance`.
    fn at_least(&mut self, name: impl Into<String>, measured: f64, tolerance: f64, anchor: &str) {
        let ok = measured >= tolerance;
        self.push(name, ok, measured, tolerance, anchor);
    }

    fn holds(&mut self, name: impl Into<String>, ok: bool, anchor: &str) {
        self.push(name, ok, if ok { 1.0 } else { 0.0 }, 1.0, anchor);
    }

    fn push(&mut self, name: impl Into<String>, ok: bool, measured: f64, tolerance: f64, anchor: &str) {
        self.0.push(CheckRecord {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured,
            tolerance,
            anchor: anchor.into(),
        });
    }
}

pub fn run_verify(suite: Suite, seed: u64) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Checks::default();
    match suite {
        Suite::SpectralExactness => spectral_suite(&mut checks, &mut rng),
        Suite::NlsConservation => nls_suite(&mut checks, &mut rng),
        Suite::ZaBound => za_suite(&mut checks, &mut rng),
        Suite::SolitonIdentities => soliton_suite(&mut checks, &mut rng),
        Suite::NonexistenceWindow => window_suite(&mut checks),
        Suite::AppendixF => appendix_suite(&mut checks),
    }
    let status = if checks.0.iter().all(|c| c.status == Status::Pass) {
        Status::Pass
    } else {
        Status::Fail
    };
    VerifyReport {
        suite: suite.name().into(),
        seed,
        status,
        checks: checks.0,
    }
}

fn rel_linf(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

fn spectral_suite(c: &mut Checks, rng: &mut ChaCha8Rng) {
    let l = 2.0 * PI * rng.gen_range(0.5..3.0);
    let g = GridSpec::square(32, l).unwrap();
    let k0 = 2.0 * PI / l;
    let modes: Vec<(i32, i32, f64, f64)> = (0..6)
        .map(|_| (rng.gen_range(-10..=10), rng.gen_range(-10..=10), rng.gen_range(-1.0..1.0), rng.gen_range(0.0..2.0 * PI)))
        .collect();
    let eval = |x: &[f64], d: usize| -> f64 {
        modes
            .iter()
            .map(|&(p, q, a, ph)| {
                let (kx, ky) = (k0 * p as f64, k0 * q as f64);
                let arg = kx * x[0] + ky * x[1] + ph;
                match d {
                    0 => a * arg.cos(),
                    1 => -a * kx * arg.sin(),
                    _ => -a * (kx * kx + ky * ky) * arg.cos(),
                }
            })
            .sum()
    };
    let f = RealField::from_fn(&g, |x| eval(x, 0));
    let dx = RealField::from_fn(&g, |x| eval(x, 1));
    let lap = RealField::from_fn(&g, |x| eval(x, 2));
    c.at_most("d/dx of trigonometric polynomial", rel_linf(spectral::gradient_x(&f).values(), dx.values()), 1e-12, "spectral exactness");
    c.at_most("Laplacian of trigonometric polynomial", rel_linf(spectral::laplacian(&f).values(), lap.values()), 1e-12, "spectral exactness");
    let mut data: Vec<Complex64> = f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let physical: f64 = data.iter().map(|z| z.norm_sqr()).sum::<f64>() * g.cell_volume();
    spectral::forward(&g, &mut data);
    let spectral_sum: f64 = data.iter().map(|z| z.norm_sqr()).sum::<f64>() * g.cell_volume() / g.len() as f64;
    c.at_most("Parseval", (physical - spectral_sum).abs() / physical.max(1e-300), 1e-12, "spectral exactness");
    let zero_mean = lap.clone();
    match spectral::inverse_laplacian_zero_mean(&zero_mean) {
        Ok(back) => {
            let mean = f.mean();
            let expect: Vec<f64> = f.values().iter().map(|v| v - mean).collect();
            c.at_most("inverse Laplacian round trip", rel_linf(back.values(), &expect), 1e-11, "spectral exactness");
        }
        Err(_) => c.holds("inverse Laplacian round trip", false, "spectral exactness"),
    }
}

fn nls_suite(c: &mut Checks, rng: &mut ChaCha8Rng) {
    let g = GridSpec::line(256, 40.0).unwrap();
    for a in [Sign::Focusing, Sign::Defocusing] {
        let amp = rng.gen_range(0.5..1.5);
        let width = rng.gen_range(1.0..3.0);
        let a0 = ComplexField::from_fn(&g, |x| Complex64::new(amp * (-(x[0] * x[0]) / (width * width)).exp(), 0.0));
        let params = ModelParams::new(a);
        match propagate_nls(&a0, &params, 0.2, 1e-3, 20) {
            Ok(run) => {
                let r0 = run.reports[0];
                let mass = run.reports.iter().map(|r| ((r.mass - r0.mass) / r0.mass).abs()).fold(0.0, f64::max);
                let energy = run
                    .reports
                    .iter()
                    .map(|r| ((r.energy - r0.energy) / r0.energy.abs().max(1e-300)).abs())
                    .fold(0.0, f64::max);
                c.at_most(format!("mass drift, a = {a}"), mass, 1e-10, "mass conservation");
                c.at_most(format!("energy drift, a = {a}"), energy, 1e-6, "energy conservation");
                c.holds(format!("H1 bound at every report, a = {a}"), run.reports.iter().all(|r| r.h1_bound_ok), "H1 bound");
            }
            Err(_) => c.holds(format!("propagation, a = {a}"), false, "mass conservation"),
        }
    }
}

/// Smooth random field: a few Gaussians with random centers, widths and phases.
pub fn random_field(grid: &GridSpec, rng: &mut impl Rng, max_amp: f64) -> ComplexField {
    let l = grid.lengths()[0];
    let bumps: Vec<(f64, f64, f64, f64, f64)> = (0..4)
        .map(|_| {
            (
                rng.gen_range(-0.2 * l..0.2 * l),
                rng.gen_range(-0.2 * l..0.2 * l),
                rng.gen_range(0.05 * l..0.15 * l),
                rng.gen_range(0.0..max_amp),
                rng.gen_range(0.0..2.0 * PI),
            )
        })
        .collect();
    ComplexField::from_fn(grid, |x| {
        bumps
            .iter()
            .map(|&(cx, cy, w, a, ph)| {
                let y = if x.len() > 1 { x[1] - cy } else { 0.0 };
                let r2 = (x[0] - cx).powi(2) + y * y;
                Complex64::from_polar(a * (-r2 / (w * w)).exp(), ph)
            })
            .sum()
    })
}

fn za_suite(c: &mut Checks, rng: &mut ChaCha8Rng) {
    let g = GridSpec::square(32, 20.0).unwrap();
    let mut worst_margin = f64::INFINITY;
    let mut worst_residual = 0.0f64;
    for _ in 0..10 {
        let f = random_field(&g, rng, 2.0);
        match solve_potential(&f, 1e-10, 2000) {
            Ok((_, rep)) => {
                worst_margin = worst_margin.min(rep.bound_rhs - rep.bound_lhs);
                worst_residual = worst_residual.max(rep.residual);
            }
            Err(_) => worst_margin = f64::NEG_INFINITY,
        }
    }
    c.at_least("potential bound margin over 10 random fields", worst_margin, -BOUND_TOL, "potential bound");
    c.at_most("worst solver residual", worst_residual, 1e-10, "potential equation");
    for a in [Sign::Focusing, Sign::Defocusing] {
        let a0 = random_field(&g, rng, 1.0);
        match propagate_za(&a0, a, 0.05, 1e-2, SolverConfig::default(), 1) {
            Ok(run) => {
                let m0 = run.reports[0].mass;
                let drift = run.reports.iter().map(|r| ((r.mass - m0) / m0).abs()).fold(0.0, f64::max);
                c.at_most(format!("ZA mass drift, a = {a}"), drift, 1e-9, "ZA mass conservation");
                c.holds(format!("ZA potential bound at every report, a = {a}"), run.reports.iter().all(|r| r.bound_ok), "ZA potential bound");
            }
            Err(_) => c.holds(format!("ZA propagation, a = {a}"), false, "ZA mass conservation"),
        }
    }
}

fn soliton_suite(c: &mut Checks, rng: &mut ChaCha8Rng) {
    for u_m in [0.5, 1.0, 2.0] {
        let w = crate::soliton::bright_frequency(u_m).unwrap();
        match bright_profile(u_m, 30.0 / w.sqrt(), 4096) {
            Ok(p) => {
                c.at_most(format!("bright u_m = {u_m}: first integral"), p.first_integral_defect, 1e-10, "bright first integral");
                c.at_most(format!("bright u_m = {u_m}: ODE defect"), p.ode_residual, 1e-8, "bright profile equation");
                let (e, q) = identity_residuals(&p, p.omega, Sign::Focusing, 1);
                c.at_most(format!("bright u_m = {u_m}: energy identity"), e.abs(), 1e-8, "energy identity");
                c.at_most(format!("bright u_m = {u_m}: Pohozaev identity"), q.abs(), 1e-8, "Pohozaev identity");
            }
            Err(_) => c.holds(format!("bright u_m = {u_m}: construction"), false, "bright first integral"),
        }
    }
    for u_inf in [0.5, 1.0] {
        match dark_profile(u_inf, 50.0, 4096) {
            Ok(p) => {
                c.at_most(format!("dark u_inf = {u_inf}: first integral"), p.first_integral_defect, 1e-10, "dark first integral");
                c.at_most(format!("dark u_inf = {u_inf}: ODE defect"), p.ode_residual, 1e-8, "dark profile equation");
            }
            Err(_) => c.holds(format!("dark u_inf = {u_inf}: construction"), false, "dark first integral"),
        }
    }
    let omega = (rng.gen_range(20..=80) as f64) / 100.0;
    match shoot_radial(2, omega, ShootingConfig::default()) {
        Ok(s) => {
            c.holds(format!("radial d = 2, omega = {omega}: bisection certificate"), s.certified(), "ground-state separatrix");
            match blp_check(omega) {
                Ok(b) => {
                    c.holds(format!("omega = {omega}: BLP hypotheses"), b.all_ok(), "BLP hypotheses");
                    c.at_least(format!("radial d = 2, omega = {omega}: zeta* - zeta0"), s.zeta_star - b.zeta0, f64::MIN_POSITIVE, "BLP shooting interval");
                }
                Err(_) => c.holds("BLP hypotheses", false, "BLP hypotheses"),
            }
            let (e, q) = identity_residuals(&s, omega, Sign::Focusing, 2);
            c.at_most(format!("radial d = 2, omega = {omega}: energy identity"), e.abs(), 1e-4, "energy identity");
            c.at_most(format!("radial d = 2, omega = {omega}: Pohozaev identity"), q.abs(), 1e-4, "Pohozaev identity");
            c.at_most(format!("radial d = 2, omega = {omega}: ODE defect"), s.ode_residual, 1e-6, "radial profile equation");
            match decay_check(&s, omega) {
                Ok(d) => {
                    c.holds(format!("radial d = 2, omega = {omega}: weighted tail bounded"), d.bounded(), "exponential decay");
                    c.at_least(format!("radial d = 2, omega = {omega}: fitted rate"), d.fit.rate, omega / 2.0, "exponential decay");
                }
                Err(_) => c.holds("tail resolution", false, "exponential decay"),
            }
        }
        Err(_) => c.holds(format!("radial d = 2, omega = {omega}: shooting"), false, "ground-state separatrix"),
    }
}

/// Classification written out clause by clause, independent of the library
/// dispatch order.
fn expected_window(a: Sign, omega: f64, dim: usize) -> WindowClass {
    use ExclusionClause::*;
    let d = dim as f64;
    let focusing = a == Sign::Focusing;
    if !focusing && omega >= 0.0 {
        WindowClass::Excluded(EnergyDefocusing)
    } else if focusing && omega >= 1.0 {
        WindowClass::Excluded(EnergyFocusing)
    } else if !focusing && omega <= -1.0 {
        WindowClass::Excluded(CombinedDefocusing)
    } else if focusing
        && ((omega <= 0.0 && (dim == 3 || dim == 4)) || (dim >= 5 && omega <= -(d - 4.0) / 4.0))
    {
        WindowClass::Excluded(CombinedFocusing)
    } else if focusing && omega <= 0.0 && dim <= 2 {
        WindowClass::Excluded(PohozaevLowDimension)
    } else if focusing && omega > 0.0 && omega < 1.0 {
        WindowClass::Possible
    } else {
        WindowClass::ExcludedConditional(EmbeddedEigenvalue)
    }
}

fn window_suite(c: &mut Checks) {
    let mut mismatches = 0usize;
    let mut total = 0usize;
    for a in [Sign::Focusing, Sign::Defocusing] {
        for k in 0..=80 {
            let omega = (k as f64 - 40.0) / 20.0;
            for dim in 1..=6 {
                total += 1;
                if existence_window(a, omega, dim) != expected_window(a, omega, dim) {
                    mismatches += 1;
                }
            }
        }
    }
    c.at_most(format!("window classification mismatches over {total} cases"), mismatches as f64, 0.0, "existence window");
    let possible_exactly = (0..=400).all(|k| {
        let omega = -2.0 + k as f64 * 0.01;
        (existence_window(Sign::Focusing, omega, 2) == WindowClass::Possible) == (omega > 0.0 && omega < 1.0)
    });
    c.holds("focusing window is exactly (0, 1)", possible_exactly, "existence window");
    for omega in [1.0, 1.2] {
        let none = matches!(shoot_radial(2, omega, ShootingConfig::default()), Err(SolitonError::NoGroundState { .. }));
        c.holds(format!("no shooting bracket at d = 2, omega = {omega}"), none, "existence window");
    }
}

/// Parameter sets `(a, omega, dim)` covered by the combined-identity argument.
pub fn appendix_ranges() -> Vec<(Sign, f64, usize)> {
    let mut out = Vec::new();
    for dim in 1..=6 {
        for k in 0..=20 {
            out.push((Sign::Defocusing, -1.0 - 0.05 * k as f64, dim));
        }
    }
    for dim in [3, 4] {
        for k in 0..=40 {
            out.push((Sign::Focusing, -0.05 * k as f64, dim));
        }
    }
    for dim in 5..=8 {
        let edge = -(dim as f64 - 4.0) / 4.0;
        for k in 0..=20 {
            out.push((Sign::Focusing, edge - 0.05 * k as f64, dim));
        }
    }
    out
}

fn appendix_suite(c: &mut Checks) {
    let ranges = appendix_ranges();
    let failing = ranges.iter().filter(|&&(a, w, d)| !appendix_Fprime_negative(w, a, d)).count();
    c.at_most(format!("F' < 0 failures over {} parameter sets", ranges.len()), failing as f64, 0.0, "combined identity F");
    let f0 = ranges
        .iter()
        .map(|&(a, w, d)| appendix_F(0.0, w, a, d).map(f64::abs).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    c.at_most("F(0) = 0", f0, 0.0, "combined identity F");
    let changes_sign = {
        let v: Vec<f64> = crate::soliton::appendix_x_grid()
            .into_iter()
            .map(|x| appendix_F(x, 0.5, Sign::Focusing, 2).unwrap())
            .collect();
        v.iter().any(|&x| x > 0.0) && v.iter().any(|&x| x < 0.0)
    };
    c.holds("F changes sign at omega = 0.5, d = 2 (no exclusion)", changes_sign, "combined identity F");
}

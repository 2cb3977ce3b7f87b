//! Propagation of the Zozulya-Anderson system
//! `i A_t + Lap A = -a A d_x phi`, `div((1 + |A|^2) grad phi) = d_x |A|^2`.

use crate::field::{integrate, ComplexField, RealField};
use crate::model::Sign;
use crate::nls::{step_size, validate_times, PropagationError};
use crate::potential::{
    ds_potential, bound_terms, EllipticSolveReport, PotentialSolver, SolverConfig, BOUND_TOL,
};
use crate::spectral::{self, Wavenumbers};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone)]
pub struct ZaState {
    pub time: f64,
    pub field: ComplexField,
    pub phi: RealField,
    pub last_solve: EllipticSolveReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZaReport {
    pub time: f64,
    pub mass: f64,
    pub bound_lhs: f64,
    /// `int |A0|^2 / 2`.
    pub bound_rhs: f64,
    pub bound_ok: bool,
    pub solver_iters: usize,
    pub residual: f64,
}

/// How the potential is computed from `|A|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialModel {
    ZozulyaAnderson(SolverConfig),
    /// Replaces the coefficient `1 + |A|^2` by 1.
    DaveyStewartson,
}

#[derive(Debug, Clone)]
pub struct ZaRun {
    pub state: ZaState,
    pub reports: Vec<ZaReport>,
    pub steps: usize,
}

/// Exact flow of `i A_t = -a A d_x phi` over `dt` for frozen `phi`.
pub fn za_nonlinear_step(field: &ComplexField, phi: &RealField, dt: f64, a: Sign) -> ComplexField {
    let dphi = spectral::gradient_x(phi);
    let mut out = field.clone();
    rotate(out.values_mut(), dphi.values(), dt, a);
    out
}

fn rotate(values: &mut [Complex64], dphi: &[f64], dt: f64, a: Sign) {
    let av = a.value();
    for (z, d) in values.iter_mut().zip(dphi) {
        *z *= Complex64::from_polar(1.0, av * dt * d);
    }
}

/// Integral identities for a candidate solitary wave `(U, phi)` with
/// `-Lap U + omega U = a U d_x phi`:
///
/// * `r1 = int |grad U|^2 + omega int |U|^2 - a int |U|^2 d_x phi`
/// * `r2 = int (1 + |U|^2) |grad phi|^2 - int |U|^2 d_x phi`
/// * `r3 = int |grad U|^2 + omega int |U|^2 - a int (1 + |U|^2) |grad phi|^2`
///
/// `r2` vanishes whenever `phi` solves the potential equation for `U`, and
/// `r3 = r1 - a r2` identically.
pub fn za_sw_residuals(u: &ComplexField, phi: &RealField, omega: f64, a: Sign) -> (f64, f64, f64) {
    let s = u.intensity();
    let grad_u = spectral::gradient_norm_sq(u);
    let mass = integrate(&s);
    let dphi = spectral::gradient(phi);
    let coupling = integrate(&s.zip_map(&dphi[0], |si, d| si * d).expect("same grid"));
    let mut weighted = 0.0;
    for g in &dphi {
        weighted += integrate(&s.zip_map(g, |si, d| (1.0 + si) * d * d).expect("same grid"));
    }
    let av = a.value();
    let r1 = grad_u + omega * mass - av * coupling;
    let r2 = weighted - coupling;
    let r3 = grad_u + omega * mass - av * weighted;
    (r1, r2, r3)
}

struct ZaStepper {
    a: Sign,
    model: PotentialModel,
    wavenumbers: Wavenumbers,
    linear: Option<(f64, Vec<Complex64>)>,
}

impl ZaStepper {
    fn potential(
        &self,
        field: &ComplexField,
        guess: Option<&RealField>,
        step: usize,
    ) -> Result<(RealField, EllipticSolveReport), PropagationError> {
        match self.model {
            PotentialModel::ZozulyaAnderson(cfg) => PotentialSolver::new(cfg)
                .solve(field, guess)
                .map_err(|source| PropagationError::Potential { step, source }),
            PotentialModel::DaveyStewartson => {
                let phi = ds_potential(field);
                let s = field.intensity();
                let (bound_lhs, bound_rhs) = bound_terms(&s, &phi, 0.0);
                let report = EllipticSolveReport {
                    iterations: 0,
                    residual: 0.0,
                    bound_lhs,
                    bound_rhs,
                    bound_ok: bound_lhs <= bound_rhs + BOUND_TOL,
                    regularizer: 0.0,
                };
                Ok((phi, report))
            }
        }
    }

    fn linear(&mut self, field: &mut ComplexField, dt: f64) {
        if self.linear.as_ref().map(|c| c.0) != Some(dt) {
            let m = self
                .wavenumbers
                .norm_sq()
                .into_iter()
                .map(|k2| Complex64::from_polar(1.0, -k2 * dt))
                .collect();
            self.linear = Some((dt, m));
        }
        let mult = &self.linear.as_ref().expect("cached").1;
        let grid = field.grid().clone();
        let data = field.values_mut();
        spectral::forward(&grid, data);
        data.iter_mut().zip(mult).for_each(|(z, m)| *z *= m);
        spectral::inverse(&grid, data);
    }

    /// Half phase, linear step, potential re-solve, half phase. On entry
    /// `state.phi` must be the potential of `state.field`; on exit it is
    /// the potential of the new field.
    fn step(&mut self, state: &mut ZaState, dt: f64, step: usize) -> Result<(), PropagationError> {
        let dphi = spectral::gradient_x(&state.phi);
        rotate(state.field.values_mut(), dphi.values(), 0.5 * dt, self.a);
        self.linear(&mut state.field, dt);
        if state.field.first_non_finite().is_some() {
            return Err(PropagationError::Diverged {
                step,
                time: state.time + dt,
            });
        }
        let (phi, report) = self.potential(&state.field, Some(&state.phi), step)?;
        let dphi = spectral::gradient_x(&phi);
        rotate(state.field.values_mut(), dphi.values(), 0.5 * dt, self.a);
        state.phi = phi;
        state.last_solve = report;
        Ok(())
    }
}

/// Propagates the Zozulya-Anderson system with the default potential solver.
pub fn propagate_za(
    initial: &ComplexField,
    a: Sign,
    t_final: f64,
    dt: f64,
    solver: SolverConfig,
    report_every: usize,
) -> Result<ZaRun, PropagationError> {
    propagate_za_with(
        initial,
        a,
        PotentialModel::ZozulyaAnderson(solver),
        t_final,
        dt,
        report_every,
    )
}

/// Strang-split propagation with a selectable potential model. Reports are
/// emitted at `t = 0`, every `report_every` steps and at the final time.
pub fn propagate_za_with(
    initial: &ComplexField,
    a: Sign,
    model: PotentialModel,
    t_final: f64,
    dt: f64,
    report_every: usize,
) -> Result<ZaRun, PropagationError> {
    if report_every == 0 {
        return Err(PropagationError::InvalidArgument(
            "report cadence must be at least 1".into(),
        ));
    }
    let steps = validate_times(t_final, dt)?;
    let mut stepper = ZaStepper {
        a,
        model,
        wavenumbers: Wavenumbers::full(initial.grid()),
        linear: None,
    };
    let (phi, last_solve) = stepper.potential(initial, None, 0)?;
    let mut state = ZaState {
        time: 0.0,
        field: initial.clone(),
        phi,
        last_solve,
    };
    let half_mass0 = 0.5 * initial.mass();
    let report = |s: &ZaState| ZaReport {
        time: s.time,
        mass: s.field.mass(),
        bound_lhs: s.last_solve.bound_lhs,
        bound_rhs: half_mass0,
        bound_ok: s.last_solve.bound_lhs <= half_mass0 + BOUND_TOL,
        solver_iters: s.last_solve.iterations,
        residual: s.last_solve.residual,
    };
    let mut reports = vec![report(&state)];
    for step in 0..steps {
        let h = step_size(step, steps, t_final, dt);
        stepper.step(&mut state, h, step + 1)?;
        state.time = if step + 1 == steps { t_final } else { state.time + h };
        if state.field.first_non_finite().is_some() {
            return Err(PropagationError::Diverged {
                step: step + 1,
                time: state.time,
            });
        }
        if (step + 1) % report_every == 0 || step + 1 == steps {
            reports.push(report(&state));
        }
    }
    Ok(ZaRun {
        state,
        reports,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::potential::solve_potential;
    use std::f64::consts::PI;

    fn gaussian2d(g: &GridSpec, amp: f64) -> ComplexField {
        ComplexField::from_fn(g, |x| {
            Complex64::new(amp * (-(x[0] * x[0] + x[1] * x[1]) / 4.0).exp(), 0.0)
        })
    }

    #[test]
    fn phase_step_examples() {
        let g = GridSpec::square(32, 2.0 * PI).unwrap();
        let a = gaussian2d(&g, 1.0);
        let k = 2.0;
        let phi = RealField::from_fn(&g, |x| (k * x[0]).sin() / k * 0.3);
        assert_eq!(za_nonlinear_step(&a, &phi, 0.0, Sign::Focusing), a);
        let dt = 0.7;
        let out = za_nonlinear_step(&a, &phi, dt, Sign::Defocusing);
        let mut idx = 0;
        g.for_each_node(|i, x| {
            let expect = a.values()[i] * Complex64::from_polar(1.0, -dt * 0.3 * (k * x[0]).cos());
            assert!((out.values()[i] - expect).norm() < 1e-13);
            assert!((out.values()[i].norm() - a.values()[i].norm()).abs() < 1e-15);
            idx += 1;
        });
        assert_eq!(idx, g.len());
    }

    #[test]
    fn zero_data_stays_zero() {
        let g = GridSpec::square(16, 10.0).unwrap();
        let run = propagate_za(&ComplexField::zeros(&g), Sign::Focusing, 0.1, 0.05, SolverConfig::default(), 1).unwrap();
        assert_eq!(run.state.field.max_abs(), 0.0);
        assert_eq!(run.state.phi.max_abs(), 0.0);
        assert!(run.reports.iter().all(|r| r.bound_ok));
    }

    #[test]
    fn residual_identities() {
        let g = GridSpec::square(32, 20.0).unwrap();
        assert_eq!(
            za_sw_residuals(&ComplexField::zeros(&g), &RealField::zeros(&g), 1.0, Sign::Focusing),
            (0.0, 0.0, 0.0)
        );
        let u = ComplexField::from_fn(&g, |x| {
            Complex64::new((-(x[0] * x[0] + 0.5 * x[1] * x[1]) / 3.0).exp(), 0.2 * (-(x[1] * x[1]) / 5.0).exp() * x[0].tanh())
        });
        let (phi, rep) = solve_potential(&u, 1e-12, 400).unwrap();
        let (r1, r2, r3) = za_sw_residuals(&u, &phi, 1.0, Sign::Focusing);
        assert!(r2.abs() < 1e-10, "{r2} {rep:?}");
        assert!((r3 - (r1 - r2)).abs() < 1e-12 * (1.0 + r1.abs()));
    }

    #[test]
    fn short_run_conserves_mass() {
        let g = GridSpec::square(32, 16.0).unwrap();
        let a0 = gaussian2d(&g, 1.0);
        let run = propagate_za(&a0, Sign::Focusing, 0.05, 0.01, SolverConfig::default(), 1).unwrap();
        let m0 = a0.mass();
        for r in &run.reports {
            assert!((r.mass - m0).abs() < 1e-10 * m0);
            assert!(r.bound_ok);
        }
        assert_eq!(run.reports.len(), 6);
    }
}

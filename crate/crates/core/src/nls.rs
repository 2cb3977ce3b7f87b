//! Strang-split propagation of the saturated NLS equation
//! `i A_t + Lap A = -a (|A|^2 - |A_inf|^2) / (1 + eps |A|^2) A`.

use crate::field::{compensated_sum, integrate, ComplexField, RealField};
use crate::model::ModelParams;
use crate::spectral::{self, gradient_norm_sq, Wavenumbers};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative slack allowed in the H1 bound check.
pub const H1_BOUND_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PropagationError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("non-finite sample at step {step} (t = {time})")]
    Diverged { step: usize, time: f64 },
    #[error("potential solve failed at step {step}: {source}")]
    Potential {
        step: usize,
        #[source]
        source: crate::potential::PotentialError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservedReport {
    pub time: f64,
    pub mass: f64,
    pub energy: f64,
    pub grad_sq: f64,
    pub h1_bound_ok: bool,
}

/// Which local nonlinearity drives the phase rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Nonlinearity {
    #[default]
    Saturated,
    /// Unsaturated cubic limit `a (|A|^2 - |A_inf|^2)`.
    Cubic,
}

/// How `|A_inf|^2` enters the nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Background {
    /// Use `ModelParams::background_intensity`.
    #[default]
    Fixed,
    /// Choose the constant at every nonlinear sub-step so that
    /// `(|A|^2 - C)/(1 + eps|A|^2)` has zero mean, i.e. the potential
    /// derivative of the 1D reduction is periodic.
    PeriodicCompatible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NlsScheme {
    pub nonlinearity: Nonlinearity,
    pub background: Background,
}

#[derive(Debug, Clone)]
pub struct NlsRun {
    pub field: ComplexField,
    pub reports: Vec<ConservedReport>,
    pub steps: usize,
}

fn phase_rate(s: f64, b: f64, p: &ModelParams, kind: Nonlinearity) -> f64 {
    match kind {
        Nonlinearity::Saturated => p.a.value() * (s - b) / (1.0 + p.saturation * s),
        Nonlinearity::Cubic => p.a.value() * (s - b),
    }
}

/// Background constant making `(s - C)/(1 + eps s)` zero-mean on the grid.
pub fn compatible_background(intensity: &RealField, saturation: f64) -> f64 {
    let num = compensated_sum(intensity.values().iter().map(|&s| s / (1.0 + saturation * s)));
    let den = compensated_sum(intensity.values().iter().map(|&s| 1.0 / (1.0 + saturation * s)));
    num / den
}

/// Pointwise `a (|A|^2 - |A_inf|^2) / (1 + eps |A|^2) A`.
pub fn nls_nonlinearity(field: &ComplexField, p: &ModelParams) -> ComplexField {
    let values = field
        .values()
        .iter()
        .map(|z| z * phase_rate(z.norm_sqr(), p.background_intensity, p, Nonlinearity::Saturated))
        .collect();
    ComplexField::from_parts(field.grid().clone(), values)
}

fn rotate_phase(values: &mut [Complex64], dt: f64, b: f64, p: &ModelParams, kind: Nonlinearity) {
    for z in values.iter_mut() {
        let theta = dt * phase_rate(z.norm_sqr(), b, p, kind);
        *z *= Complex64::from_polar(1.0, theta);
    }
}

/// Exact flow of `i A_t = -a N(|A|^2) A` over `dt`; `|A|` is unchanged.
pub fn nonlinear_phase_step(field: &ComplexField, dt: f64, p: &ModelParams) -> ComplexField {
    let mut out = field.clone();
    rotate_phase(out.values_mut(), dt, p.background_intensity, p, Nonlinearity::Saturated);
    out
}

fn linear_multiplier(wn: &Wavenumbers, dt: f64) -> Vec<Complex64> {
    wn.norm_sq()
        .into_iter()
        .map(|k2| Complex64::from_polar(1.0, -k2 * dt))
        .collect()
}

/// Exact flow of `i A_t + Lap A = 0` over `dt` (spectral multiplier
/// `exp(-i |k|^2 dt)`).
pub fn linear_step(field: &ComplexField, dt: f64) -> ComplexField {
    let m = linear_multiplier(&Wavenumbers::full(field.grid()), dt);
    spectral::apply_multiplier(field, &m)
}

/// Conserved Hamiltonian
/// `int |grad A|^2 + a (1 + eps b)/eps^2 int ln(1 + eps |A|^2)`,
/// which is `int |grad A|^2 + a ln(1 + |A|^2)` for `eps = 1`, `b = 0`.
pub fn nls_energy(field: &ComplexField, p: &ModelParams) -> f64 {
    gradient_norm_sq(field) + potential_energy(field, p)
}

fn potential_energy(field: &ComplexField, p: &ModelParams) -> f64 {
    let eps = p.saturation;
    let coeff = p.a.value() * (1.0 + eps * p.background_intensity) / (eps * eps);
    let logs = field.intensity().map(|s| (eps * s).ln_1p());
    coeff * integrate(&logs)
}

/// Right-hand side of the H1 bound: `int |grad A0|^2 + (1 + eps b)/eps int |A0|^2`.
pub fn h1_bound_rhs(mass0: f64, grad_sq0: f64, p: &ModelParams) -> f64 {
    let eps = p.saturation;
    grad_sq0 + (1.0 + eps * p.background_intensity) / eps * mass0
}

pub(crate) fn validate_times(t_final: f64, dt: f64) -> Result<usize, PropagationError> {
    if !(t_final.is_finite() && t_final > 0.0) {
        return Err(PropagationError::InvalidArgument(format!(
            "final time must be positive, got {t_final}"
        )));
    }
    if !(dt.is_finite() && dt > 0.0 && dt <= t_final) {
        return Err(PropagationError::InvalidArgument(format!(
            "time step must satisfy 0 < dt <= T, got dt = {dt}, T = {t_final}"
        )));
    }
    // Tolerate T/dt landing a hair above an integer through rounding.
    let ratio = t_final / dt;
    let steps = (ratio - 1e-9 * ratio.max(1.0)).ceil().max(1.0) as usize;
    Ok(steps)
}

pub(crate) fn step_size(step: usize, steps: usize, t_final: f64, dt: f64) -> f64 {
    if step + 1 < steps {
        dt
    } else {
        t_final - dt * (steps - 1) as f64
    }
}

/// Strang-splitting integrator with cached linear multipliers.
pub struct NlsPropagator {
    params: ModelParams,
    scheme: NlsScheme,
    wavenumbers: Wavenumbers,
    cached: Option<(f64, Vec<Complex64>)>,
}

impl NlsPropagator {
    pub fn new(grid: &crate::grid::GridSpec, params: ModelParams, scheme: NlsScheme) -> Self {
        Self {
            params,
            scheme,
            wavenumbers: Wavenumbers::full(grid),
            cached: None,
        }
    }

    fn background(&self, values: &[Complex64], grid: &crate::grid::GridSpec) -> f64 {
        match self.scheme.background {
            Background::Fixed => self.params.background_intensity,
            Background::PeriodicCompatible => {
                let s = RealField::from_parts(grid.clone(), values.iter().map(|z| z.norm_sqr()).collect());
                compatible_background(&s, self.params.saturation)
            }
        }
    }

    /// One Strang step: half phase, full linear, half phase.
    pub fn step(&mut self, field: &mut ComplexField, dt: f64) {
        let grid = field.grid().clone();
        let kind = self.scheme.nonlinearity;
        let b = self.background(field.values(), &grid);
        rotate_phase(field.values_mut(), 0.5 * dt, b, &self.params, kind);

        if self.cached.as_ref().map(|c| c.0) != Some(dt) {
            self.cached = Some((dt, linear_multiplier(&self.wavenumbers, dt)));
        }
        let mult = &self.cached.as_ref().expect("multiplier cached").1;
        let data = field.values_mut();
        spectral::forward(&grid, data);
        data.iter_mut().zip(mult).for_each(|(z, m)| *z *= m);
        spectral::inverse(&grid, data);

        let b = self.background(field.values(), &grid);
        rotate_phase(field.values_mut(), 0.5 * dt, b, &self.params, kind);
    }
}

struct Diagnostics {
    params: ModelParams,
    h1_rhs: f64,
}

impl Diagnostics {
    fn report(&self, field: &ComplexField, time: f64) -> ConservedReport {
        let grad_sq = gradient_norm_sq(field);
        ConservedReport {
            time,
            mass: field.mass(),
            energy: grad_sq + potential_energy(field, &self.params),
            grad_sq,
            h1_bound_ok: grad_sq <= self.h1_rhs * (1.0 + H1_BOUND_TOL) + H1_BOUND_TOL,
        }
    }
}

/// Propagates `initial` to `t_final` with the saturated nonlinearity and a
/// fixed background.
pub fn propagate_nls(
    initial: &ComplexField,
    params: &ModelParams,
    t_final: f64,
    dt: f64,
    report_every: usize,
) -> Result<NlsRun, PropagationError> {
    propagate_nls_with(initial, params, NlsScheme::default(), t_final, dt, report_every)
}

/// Like [`propagate_nls`] with an explicit nonlinearity/background scheme.
///
/// Reports are emitted at `t = 0`, after every `report_every` steps, and at
/// the final time. The last step is shortened when `T/dt` is not integral.
pub fn propagate_nls_with(
    initial: &ComplexField,
    params: &ModelParams,
    scheme: NlsScheme,
    t_final: f64,
    dt: f64,
    report_every: usize,
) -> Result<NlsRun, PropagationError> {
    params
        .validate()
        .map_err(|e| PropagationError::InvalidArgument(e.to_string()))?;
    if report_every == 0 {
        return Err(PropagationError::InvalidArgument(
            "report cadence must be at least 1".into(),
        ));
    }
    let steps = validate_times(t_final, dt)?;

    let mass0 = initial.mass();
    let grad0 = gradient_norm_sq(initial);
    let diag = Diagnostics {
        params: *params,
        h1_rhs: h1_bound_rhs(mass0, grad0, params),
    };

    let mut field = initial.clone();
    let mut prop = NlsPropagator::new(initial.grid(), *params, scheme);
    let mut reports = vec![diag.report(&field, 0.0)];
    let mut time = 0.0;
    for step in 0..steps {
        let h = step_size(step, steps, t_final, dt);
        prop.step(&mut field, h);
        time = if step + 1 == steps { t_final } else { time + h };
        if field.first_non_finite().is_some() {
            return Err(PropagationError::Diverged {
                step: step + 1,
                time,
            });
        }
        if (step + 1) % report_every == 0 || step + 1 == steps {
            reports.push(diag.report(&field, time));
        }
    }
    Ok(NlsRun {
        field,
        reports,
        steps,
    })
}

//! The space-charge potential equation `div((1 + |A|^2) grad phi) = d_x |A|^2`
//! and its regularized and Davey-Stewartson variants.
//!
//! The discrete operator is `L phi = sum_a D_a^T (c D_a phi)` with `D_a` the
//! Nyquist-free spectral derivative and `c = 1 + |A|^2`. `L` is symmetric
//! positive semidefinite; its null space (constants and the Nyquist modes)
//! is projected out, which fixes the zero-mean gauge. It is solved with
//! conjugate gradients preconditioned by the inverse constant-coefficient
//! operator.

use crate::field::{compensated_sum, integrate, ComplexField, RealField};
use crate::grid::GridSpec;
use crate::nls::compatible_background;
use crate::spectral::{self, SpectralError, Wavenumbers, SOLVABILITY_TOL};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute slack in the energy-bound checks.
pub const BOUND_TOL: f64 = 1e-8;
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error("no convergence after {iterations} iterations (relative residual {residual:e})")]
    NotConverged {
        best: Box<RealField>,
        residual: f64,
        iterations: usize,
    },
    #[error("invalid solver argument: {0}")]
    InvalidArgument(String),
    #[error("constant C = {constant} is incompatible with periodic data: mean(d_x phi) = {mean:e}")]
    Incompatible { constant: f64, mean: f64 },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticSolveReport {
    pub iterations: usize,
    /// Relative L2 residual of the discrete equation.
    pub residual: f64,
    /// `eps int |Lap grad phi|^2 + int (1 + |A|^2/2) |grad phi|^2`.
    pub bound_lhs: f64,
    /// `int |A|^2 / 2`.
    pub bound_rhs: f64,
    pub bound_ok: bool,
    /// The regularizer contribution `eps int |Lap grad phi|^2` (0 if unregularized).
    pub regularizer: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub tol: f64,
    /// Iteration cap; `None` means `10 * max(points per axis)`.
    pub max_iter: Option<usize>,
    pub eps_reg: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: None,
            eps_reg: 0.0,
        }
    }
}

impl SolverConfig {
    pub fn new(tol: f64, max_iter: usize) -> Self {
        Self {
            tol,
            max_iter: Some(max_iter),
            eps_reg: 0.0,
        }
    }

    pub fn regularized(mut self, eps_reg: f64) -> Self {
        self.eps_reg = eps_reg;
        self
    }

    fn validate(&self) -> Result<(), PotentialError> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(PotentialError::InvalidArgument(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if !(self.eps_reg.is_finite() && self.eps_reg >= 0.0) {
            return Err(PotentialError::InvalidArgument(format!(
                "regularization must be >= 0, got {}",
                self.eps_reg
            )));
        }
        Ok(())
    }

    fn iteration_cap(&self, grid: &GridSpec) -> usize {
        self.max_iter
            .unwrap_or_else(|| 10 * grid.points().iter().copied().max().unwrap_or(8))
    }
}

/// `d_x |A|^2`.
pub fn za_rhs(field: &ComplexField) -> RealField {
    spectral::gradient_x(&field.intensity())
}

/// Davey-Stewartson potential: the zero-mean solution of `Lap phi = d_x |A|^2`.
pub fn ds_potential(field: &ComplexField) -> RealField {
    let rhs = za_rhs(field);
    let m: Vec<Complex64> = Wavenumbers::full(field.grid())
        .norm_sq()
        .into_iter()
        .map(|k2| {
            if k2 == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(-1.0 / k2, 0.0)
            }
        })
        .collect();
    spectral::apply_multiplier(&rhs, &m)
}

/// Pointwise `d_x phi = (|A|^2 - C) / (1 + |A|^2)` of the 1D reduction.
pub fn potential_gradient_1d(field: &ComplexField, constant: f64) -> RealField {
    field.intensity().map(|s| (s - constant) / (1.0 + s))
}

/// Zero-mean `phi` of the 1D reduction with boundary constant `C`.
/// Fails when `d_x phi` has a non-negligible mean, since `phi` would then
/// not be periodic.
pub fn solve_potential_1d(field: &ComplexField, constant: f64) -> Result<RealField, PotentialError> {
    if field.grid().dim() != 1 {
        return Err(SpectralError::Dimension {
            expected: 1,
            got: field.grid().dim(),
        }
        .into());
    }
    let dphi = potential_gradient_1d(field, constant);
    let mean = dphi.mean();
    let rms = (compensated_sum(dphi.values().iter().map(|v| v * v)) / dphi.values().len() as f64).sqrt();
    if mean.abs() > SOLVABILITY_TOL * rms.max(f64::MIN_POSITIVE) && mean != 0.0 {
        return Err(PotentialError::Incompatible { constant, mean });
    }
    Ok(spectral::antiderivative_zero_mean(&dphi)?)
}

/// Solves the potential equation for `A` (2D, or closed form in 1D).
pub fn solve_potential(
    field: &ComplexField,
    tol: f64,
    max_iter: usize,
) -> Result<(RealField, EllipticSolveReport), PotentialError> {
    PotentialSolver::new(SolverConfig::new(tol, max_iter)).solve(field, None)
}

/// Solves `div((1 + eps Lap^2 + |A|^2) grad phi) = d_x |A|^2`.
pub fn regularized_solve_potential(
    field: &ComplexField,
    eps_reg: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(RealField, EllipticSolveReport), PotentialError> {
    PotentialSolver::new(SolverConfig::new(tol, max_iter).regularized(eps_reg)).solve(field, None)
}

/// Discrete operator `phi -> -div(c grad phi) - eps div(Lap^2 grad phi)`.
pub struct PotentialOperator {
    grid: GridSpec,
    coeff: Vec<f64>,
    k: Vec<Vec<f64>>,
    /// Symbol `|k_d|^2 * eps |k|^4` of the regularizer.
    reg_symbol: Vec<f64>,
    /// Inverse of `|k_d|^2 (1 + eps |k|^4)`, zero on the null space.
    precond: Vec<f64>,
}

impl PotentialOperator {
    pub fn new(intensity: &RealField, eps_reg: f64) -> Self {
        let grid = intensity.grid().clone();
        let dwn = Wavenumbers::derivative(&grid);
        let kd2 = dwn.norm_sq();
        let kf2 = Wavenumbers::full(&grid).norm_sq();
        let reg_symbol: Vec<f64> = kd2
            .iter()
            .zip(&kf2)
            .map(|(d, f)| d * eps_reg * f * f)
            .collect();
        let precond = kd2
            .iter()
            .zip(&reg_symbol)
            .map(|(&d, &r)| if d == 0.0 { 0.0 } else { 1.0 / (d + r) })
            .collect();
        Self {
            coeff: intensity.values().iter().map(|s| 1.0 + s).collect(),
            k: (0..grid.dim()).map(|a| dwn.component(a)).collect(),
            grid,
            reg_symbol,
            precond,
        }
    }

    fn to_spectrum(&self, v: &[f64]) -> Vec<Complex64> {
        let mut data: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        spectral::forward(&self.grid, &mut data);
        data
    }

    fn real_from_spectrum(&self, mut data: Vec<Complex64>) -> Vec<f64> {
        spectral::inverse(&self.grid, &mut data);
        data.into_iter().map(|z| z.re).collect()
    }

    pub fn apply(&self, phi: &[f64]) -> Vec<f64> {
        let phi_hat = self.to_spectrum(phi);
        let mut acc: Vec<Complex64> = phi_hat
            .iter()
            .zip(&self.reg_symbol)
            .map(|(z, r)| z * r)
            .collect();
        for k in &self.k {
            let mut g: Vec<Complex64> = phi_hat
                .iter()
                .zip(k)
                .map(|(z, &kk)| z * Complex64::new(0.0, kk))
                .collect();
            spectral::inverse(&self.grid, &mut g);
            for (z, c) in g.iter_mut().zip(&self.coeff) {
                *z = Complex64::new(z.re * c, 0.0);
            }
            spectral::forward(&self.grid, &mut g);
            for ((a, z), &kk) in acc.iter_mut().zip(&g).zip(k) {
                *a -= z * Complex64::new(0.0, kk);
            }
        }
        self.real_from_spectrum(acc)
    }

    pub fn precondition(&self, r: &[f64]) -> Vec<f64> {
        let mut data = self.to_spectrum(r);
        data.iter_mut().zip(&self.precond).for_each(|(z, p)| *z *= p);
        self.real_from_spectrum(data)
    }

    /// Removes the null-space components (mean and Nyquist modes).
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        let mut data = self.to_spectrum(v);
        data.iter_mut()
            .zip(&self.precond)
            .for_each(|(z, &p)| if p == 0.0 { *z = Complex64::new(0.0, 0.0) });
        self.real_from_spectrum(data)
    }

    /// `eps int |Lap grad phi|^2` via Parseval.
    pub fn regularizer_energy(&self, phi: &[f64]) -> f64 {
        let data = self.to_spectrum(phi);
        let n = data.len() as f64;
        self.grid.cell_volume() / n
            * compensated_sum(data.iter().zip(&self.reg_symbol).map(|(z, r)| r * z.norm_sqr()))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    compensated_sum(a.iter().zip(b).map(|(x, y)| x * y))
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Bound quantities for a solved potential.
pub fn bound_terms(intensity: &RealField, phi: &RealField, regularizer: f64) -> (f64, f64) {
    let grads = spectral::gradient(phi);
    let mut g2 = vec![0.0; phi.values().len()];
    for g in &grads {
        for (acc, v) in g2.iter_mut().zip(g.values()) {
            *acc += v * v;
        }
    }
    let weighted = RealField::from_parts(
        phi.grid().clone(),
        g2.iter()
            .zip(intensity.values())
            .map(|(g, s)| (1.0 + 0.5 * s) * g)
            .collect(),
    );
    let lhs = regularizer + integrate(&weighted);
    let rhs = 0.5 * integrate(intensity);
    (lhs, rhs)
}

/// Preconditioned CG solver for the potential equation.
#[derive(Debug, Clone, Copy, Default)]
pub struct PotentialSolver {
    pub config: SolverConfig,
}

impl PotentialSolver {
    pub fn new(config: SolverConfig) -> Self {
        Self { config }
    }

    /// Solves for the potential of `A` starting from `guess` (zero if absent).
    pub fn solve(
        &self,
        field: &ComplexField,
        guess: Option<&RealField>,
    ) -> Result<(RealField, EllipticSolveReport), PotentialError> {
        self.config.validate()?;
        if field.grid().dim() == 1 && self.config.eps_reg == 0.0 {
            return self.solve_closed_form_1d(field);
        }
        let rhs = za_rhs(field);
        self.solve_with_rhs(field, &rhs, guess)
    }

    fn solve_closed_form_1d(
        &self,
        field: &ComplexField,
    ) -> Result<(RealField, EllipticSolveReport), PotentialError> {
        let s = field.intensity();
        let constant = compatible_background(&s, 1.0);
        let phi = solve_potential_1d(field, constant)?;
        let rhs = za_rhs(field);
        let op = PotentialOperator::new(&s, 0.0);
        let residual = relative_residual(&op, phi.values(), &rhs);
        Ok((phi.clone(), self.report(&s, &phi, &op, 0, residual)))
    }

    /// Solves `div((1 + eps Lap^2 + |A|^2) grad phi) = rhs`. The part of
    /// `rhs` in the operator's null space is discarded.
    pub fn solve_with_rhs(
        &self,
        field: &ComplexField,
        rhs: &RealField,
        guess: Option<&RealField>,
    ) -> Result<(RealField, EllipticSolveReport), PotentialError> {
        self.config.validate()?;
        field.grid().ensure_same(rhs.grid()).map_err(|e| {
            PotentialError::InvalidArgument(e.to_string())
        })?;
        let s = field.intensity();
        let op = PotentialOperator::new(&s, self.config.eps_reg);
        let grid = field.grid();
        // L phi = -rhs
        let b: Vec<f64> = op.project(&rhs.values().iter().map(|v| -v).collect::<Vec<_>>());
        let b_norm = norm(&b);
        let n = b.len();
        let cap = self.config.iteration_cap(grid);

        if b_norm == 0.0 {
            let phi = RealField::zeros(grid);
            let report = self.report(&s, &phi, &op, 0, 0.0);
            return Ok((phi, report));
        }

        let mut x = match guess {
            Some(g) => {
                grid.ensure_same(g.grid())
                    .map_err(|e| PotentialError::InvalidArgument(e.to_string()))?;
                op.project(g.values())
            }
            None => vec![0.0; n],
        };

        let tol = self.config.tol;
        let mut iterations = 0;
        let mut residual;
        // Restart loop: recursive residuals can drift from the true one.
        loop {
            let ax = op.apply(&x);
            let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
            residual = norm(&r) / b_norm;
            if residual <= tol || iterations >= cap {
                break;
            }
            let mut z = op.precondition(&r);
            let mut p = z.clone();
            let mut rz = dot(&r, &z);
            let restart_at = iterations;
            while iterations < cap {
                let ap = op.apply(&p);
                let pap = dot(&p, &ap);
                if pap <= 0.0 {
                    break;
                }
                let alpha = rz / pap;
                x.iter_mut().zip(&p).for_each(|(xi, pi)| *xi += alpha * pi);
                r.iter_mut().zip(&ap).for_each(|(ri, ai)| *ri -= alpha * ai);
                iterations += 1;
                if norm(&r) / b_norm <= 0.5 * tol {
                    break;
                }
                z = op.precondition(&r);
                let rz_new = dot(&r, &z);
                let beta = rz_new / rz;
                rz = rz_new;
                p.iter_mut().zip(&z).for_each(|(pi, zi)| *pi = zi + beta * *pi);
            }
            if iterations == restart_at {
                // breakdown without progress; report the current residual
                let ax = op.apply(&x);
                let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
                residual = norm(&r) / b_norm;
                break;
            }
        }

        let phi = RealField::from_parts(grid.clone(), x);
        if residual > tol || residual.is_nan() {
            return Err(PotentialError::NotConverged {
                best: Box::new(phi),
                residual,
                iterations,
            });
        }
        let report = self.report(&s, &phi, &op, iterations, residual);
        Ok((phi, report))
    }

    fn report(
        &self,
        intensity: &RealField,
        phi: &RealField,
        op: &PotentialOperator,
        iterations: usize,
        residual: f64,
    ) -> EllipticSolveReport {
        let regularizer = if self.config.eps_reg > 0.0 {
            op.regularizer_energy(phi.values())
        } else {
            0.0
        };
        let (bound_lhs, bound_rhs) = bound_terms(intensity, phi, regularizer);
        EllipticSolveReport {
            iterations,
            residual,
            bound_lhs,
            bound_rhs,
            bound_ok: bound_lhs <= bound_rhs + BOUND_TOL,
            regularizer,
        }
    }
}

fn relative_residual(op: &PotentialOperator, phi: &[f64], rhs: &RealField) -> f64 {
    let b: Vec<f64> = op.project(&rhs.values().iter().map(|v| -v).collect::<Vec<_>>());
    let b_norm = norm(&b);
    let ax = op.apply(phi);
    let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    if b_norm == 0.0 {
        norm(&r)
    } else {
        norm(&r) / b_norm
    }
}

/// Discrete weak-form residual `int c grad phi . grad psi - int |A|^2 d_x psi`.
pub fn weak_form_residual(field: &ComplexField, phi: &RealField, psi: &RealField) -> f64 {
    let s = field.intensity();
    let gphi = spectral::gradient(phi);
    let gpsi = spectral::gradient(psi);
    let n = s.values().len();
    let mut integrand = vec![0.0; n];
    for (a, b) in gphi.iter().zip(&gpsi) {
        for (i, acc) in integrand.iter_mut().enumerate() {
            *acc += (1.0 + s.values()[i]) * a.values()[i] * b.values()[i];
        }
    }
    for (i, acc) in integrand.iter_mut().enumerate() {
        *acc -= s.values()[i] * gpsi[0].values()[i];
    }
    integrate(&RealField::from_parts(phi.grid().clone(), integrand))
}

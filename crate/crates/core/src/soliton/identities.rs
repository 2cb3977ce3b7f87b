//! Energy and Pohozaev identities satisfied by every solitary wave of
//! `-Lap U + omega U = a |U|^2 U / (1 + |U|^2)`.

use super::bright::BrightProfile;
use super::ode::x_minus_log1p;
use super::radial::RadialSoliton;
use crate::field::{integrate, ComplexField};
use crate::model::Sign;
use crate::spectral;
use serde::Serialize;

/// Integrals entering the identities, with `s = |U|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct IdentityIntegrals {
    pub grad_sq: f64,
    pub mass: f64,
    /// `int s^2 / (1 + s)`.
    pub saturated: f64,
    /// `int (s - ln(1 + s))`.
    pub log_excess: f64,
}

pub trait SolitaryWave {
    fn identity_integrals(&self) -> IdentityIntegrals;
}

impl SolitaryWave for ComplexField {
    fn identity_integrals(&self) -> IdentityIntegrals {
        let s = self.intensity();
        IdentityIntegrals {
            grad_sq: spectral::gradient_norm_sq(self),
            mass: integrate(&s),
            saturated: integrate(&s.map(|s| s * s / (1.0 + s))),
            log_excess: integrate(&s.map(x_minus_log1p)),
        }
    }
}

impl SolitaryWave for BrightProfile {
    fn identity_integrals(&self) -> IdentityIntegrals {
        self.to_field().identity_integrals()
    }
}

/// Composite Simpson rule on a uniform grid with an even number of
/// intervals (the last interval falls back to the trapezoid rule otherwise).
pub(crate) fn simpson(h: f64, f: &[f64]) -> f64 {
    let n = f.len();
    if n < 2 {
        return 0.0;
    }
    let m = if (n - 1).is_multiple_of(2) { n } else { n - 1 };
    let mut acc = 0.0;
    for k in (0..m - 1).step_by(2) {
        acc += f[k] + 4.0 * f[k + 1] + f[k + 2];
    }
    let mut total = acc * h / 3.0;
    if m < n {
        total += 0.5 * h * (f[n - 2] + f[n - 1]);
    }
    total
}

/// Radial integrals without the sphere area, which cancels in the
/// normalized residuals.
impl SolitaryWave for RadialSoliton {
    fn identity_integrals(&self) -> IdentityIntegrals {
        let h = self.r[1] - self.r[0];
        let p = (self.dim - 1) as i32;
        let weighted = |f: &dyn Fn(usize) -> f64| -> f64 {
            let vals: Vec<f64> = (0..self.r.len()).map(|k| f(k) * self.r[k].powi(p)).collect();
            simpson(h, &vals)
        };
        let s = |k: usize| self.u[k] * self.u[k];
        IdentityIntegrals {
            grad_sq: weighted(&|k| self.du[k] * self.du[k]),
            mass: weighted(&|k| s(k)),
            saturated: weighted(&|k| s(k) * s(k) / (1.0 + s(k))),
            log_excess: weighted(&|k| x_minus_log1p(s(k))),
        }
    }
}

/// Normalized residuals `(energy, pohozaev)`:
///
/// * energy: `int |grad U|^2 + omega int |U|^2 - a int |U|^4 / (1 + |U|^2)`
/// * Pohozaev: `(d - 2) int |grad U|^2 + d omega int |U|^2 - a d int (|U|^2 - ln(1 + |U|^2))`
///
/// both divided by `int |grad U|^2 + int |U|^2`.
pub fn identity_residuals(u: &impl SolitaryWave, omega: f64, a: Sign, dim: usize) -> (f64, f64) {
    residuals_from(&u.identity_integrals(), omega, a, dim)
}

pub fn residuals_from(i: &IdentityIntegrals, omega: f64, a: Sign, dim: usize) -> (f64, f64) {
    let norm = i.grad_sq + i.mass;
    if norm == 0.0 {
        return (0.0, 0.0);
    }
    let a = a.value();
    let d = dim as f64;
    let energy = i.grad_sq + omega * i.mass - a * i.saturated;
    let pohozaev = (d - 2.0) * i.grad_sq + d * omega * i.mass - a * d * i.log_excess;
    (energy / norm, pohozaev / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::soliton::bright_profile;
    use num_complex::Complex64;

    #[test]
    fn zero_field() {
        let g = GridSpec::square(16, 10.0).unwrap();
        assert_eq!(identity_residuals(&ComplexField::zeros(&g), 0.5, Sign::Focusing, 2), (0.0, 0.0));
    }

    #[test]
    fn simpson_is_exact_on_cubics() {
        let f: Vec<f64> = (0..=10).map(|k| (k as f64 * 0.1).powi(3)).collect();
        assert!((simpson(0.1, &f) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn bright_profile_satisfies_both() {
        let p = bright_profile(1.0, 40.0, 2048).unwrap();
        let (e, q) = identity_residuals(&p, p.omega, Sign::Focusing, 1);
        assert!(e.abs() < 1e-12 && q.abs() < 1e-12, "{e} {q}");
        // A perturbed profile is detected.
        let bumped = ComplexField::from_fn(&p.grid(), |x| {
            let i = ((x[0] + 40.0) / p.grid().spacing(0)).round() as usize;
            Complex64::new(p.u[i] * (1.0 + 0.1 * (-(x[0] - 1.0).powi(2)).exp()), 0.0)
        });
        let (e, q) = identity_residuals(&bumped, p.omega, Sign::Focusing, 1);
        assert!(e.abs() > 1e-3 && q.abs() > 1e-3, "{e} {q}");
    }
}

//! Dark solitary waves `A = u(x)` of the defocusing saturated NLS on the
//! background `|A_inf|^2 = u_inf^2`: `u'' = (u^2 - u_inf^2) u / (1 + u^2)`.

use super::bright::check_grid;
use super::ode::{x_minus_log1p, Dopri};
use super::{SolitonError, TAIL_TOL};
use crate::field::{ComplexField, RealField};
use crate::grid::GridSpec;
use crate::spectral;
use num_complex::Complex64;
use serde::Serialize;

/// `[u']^2 = u^2 - u_inf^2 - (1 + u_inf^2) ln((1 + u^2) / (1 + u_inf^2))`,
/// evaluated as `(1 + u_inf^2)(q - ln(1 + q))` with
/// `q = (u^2 - u_inf^2) / (1 + u_inf^2)`.
pub fn dark_first_integral(u: f64, u_inf: f64) -> f64 {
    let t_inf = u_inf * u_inf;
    let q = (u - u_inf) * (u + u_inf) / (1.0 + t_inf);
    (1.0 + t_inf) * x_minus_log1p(q)
}

#[derive(Debug, Clone, Serialize)]
pub struct DarkProfile {
    pub u_inf: f64,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub ode_residual: f64,
    pub first_integral_defect: f64,
    /// `|u(x_max) - u_inf| / |u_inf|`.
    pub tail: f64,
}

impl DarkProfile {
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.x.iter().copied().zip(self.u.iter().copied())
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec::line(self.x.len(), -2.0 * self.x[0]).expect("validated on construction")
    }

    pub fn to_field(&self) -> ComplexField {
        let values = self.u.iter().map(|&u| Complex64::new(u, 0.0)).collect();
        ComplexField::new(self.grid(), values).expect("finite samples")
    }
}

/// Odd dark profile through `u(0) = 0` with `u -> +-u_inf` as `x -> +-inf`,
/// sampled on the periodic grid of `n` points over `[-x_max, x_max)`.
pub fn dark_profile(u_inf: f64, x_max: f64, n: usize) -> Result<DarkProfile, SolitonError> {
    if !(u_inf.is_finite() && u_inf != 0.0) {
        return Err(SolitonError::InvalidArgument(format!(
            "background amplitude must be finite and nonzero, got {u_inf}"
        )));
    }
    check_grid(x_max, n)?;
    let sign = u_inf.signum();
    let a = u_inf.abs();
    let t_inf = a * a;
    let dx = 2.0 * x_max / n as f64;

    // y = ln(a - u) keeps relative accuracy as u approaches the background.
    let rate = move |_x: f64, y: &[f64; 1]| {
        let w = y[0].exp();
        let q = -w * (2.0 * a - w) / (1.0 + t_inf);
        let root = ((1.0 + t_inf) * x_minus_log1p(q)).max(0.0).sqrt();
        let ratio = if w == 0.0 {
            a * (2.0 / (1.0 + t_inf)).sqrt()
        } else {
            root / w
        };
        [-ratio]
    };
    let half_len = n / 2 + 1;
    let mut half = Vec::with_capacity(half_len);
    half.push(0.0);
    let mut ode = Dopri::new(1e-13, 0.25 * dx);
    let mut x = 0.0;
    let mut y = [a.ln()];
    for k in 1..half_len {
        ode.advance(rate, &mut x, &mut y, k as f64 * dx, |_, _| false)?;
        half.push(a - y[0].exp());
    }
    let tail = (a - half[n / 2]) / a;
    if tail > TAIL_TOL {
        return Err(SolitonError::TailNotDecayed {
            tail,
            threshold: TAIL_TOL,
        });
    }
    let xs: Vec<f64> = (0..n).map(|j| -x_max + j as f64 * dx).collect();
    let u: Vec<f64> = (0..n)
        .map(|j| {
            let v = half[j.abs_diff(n / 2)];
            sign * if j < n / 2 { -v } else { v }
        })
        .collect();

    // The odd profile is not periodic; differentiate its deviation from
    // u_inf tanh(c x), which is, and add the reference analytically.
    let c = a / (2.0 * (1.0 + t_inf)).sqrt();
    let grid = GridSpec::line(n, 2.0 * x_max)?;
    let reference: Vec<f64> = xs.iter().map(|&x| u_inf * (c * x).tanh()).collect();
    let deviation = RealField::new(
        grid,
        u.iter().zip(&reference).map(|(u, r)| u - r).collect(),
    )?;
    let ddev = spectral::derivative(&deviation, 0);
    let d2dev = spectral::laplacian(&deviation);
    let mut ode_residual = 0.0f64;
    let mut first_integral_defect = 0.0f64;
    for i in 0..n {
        let th = (c * xs[i]).tanh();
        let sech2 = 1.0 - th * th;
        let du = ddev.values()[i] + u_inf * c * sech2;
        let d2u = d2dev.values()[i] - 2.0 * u_inf * c * c * th * sech2;
        let ui = u[i];
        let r = d2u - (ui * ui - t_inf) * ui / (1.0 + ui * ui);
        ode_residual = ode_residual.max(r.abs());
        let d = du * du - dark_first_integral(ui, u_inf);
        first_integral_defect = first_integral_defect.max(d.abs());
    }
    Ok(DarkProfile {
        u_inf,
        x: xs,
        u,
        ode_residual,
        first_integral_defect,
        tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_background() {
        let p = dark_profile(1.0, 40.0, 4096).unwrap();
        let mid = 2048;
        assert_eq!(p.u[mid], 0.0);
        for k in 1..2048 {
            assert_eq!(p.u[mid + k], -p.u[mid - k]);
            assert!(p.u[mid + k] >= p.u[mid + k - 1]);
            assert!(p.u[mid + k] > p.u[mid + k - 1] || p.u[mid + k] > 1.0 - 1e-14);
            assert!(p.u[mid + k] <= 1.0);
        }
        assert!((p.u[4095] - 1.0).abs() < 1e-12);
        assert!((p.u[0] + 1.0).abs() < 1e-12);
        assert!(p.ode_residual <= 1e-8, "{}", p.ode_residual);
        assert!(p.first_integral_defect <= 1e-10, "{}", p.first_integral_defect);
    }

    #[test]
    fn negative_background_flips_sign() {
        let p = dark_profile(0.5, 50.0, 2048).unwrap();
        let m = dark_profile(-0.5, 50.0, 2048).unwrap();
        for (a, b) in p.u.iter().zip(&m.u) {
            assert_eq!(*a, -*b);
        }
        assert!(m.u[1500] < 0.0 && m.u[1500] >= -0.5);
        assert!(m.ode_residual <= 1e-8);
    }

    #[test]
    fn first_integral_vanishes_on_background() {
        assert_eq!(dark_first_integral(0.7, 0.7), 0.0);
        assert!(dark_first_integral(0.0, 0.7) > 0.0);
        assert!(dark_profile(0.0, 40.0, 64).is_err());
        assert!(matches!(dark_profile(1.0, 3.0, 64), Err(SolitonError::TailNotDecayed { .. })));
    }
}

//! Solitary waves of `-Lap U + omega U = |U|^2 U / (1 + eps |U|^2)`.
//!
//! With `U(x) = W(x / sqrt(eps)) / sqrt(eps)`, `W` solves the unit problem at
//! frequency `eps omega`, so everything delegates to the `eps = 1` routines.

use super::radial::{shoot_radial, RadialSoliton, ShootingConfig};
use super::window::{existence_window, WindowClass};
use super::{bright_frequency, SolitonError};
use crate::model::Sign;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationScaling {
    eps: f64,
}

impl SaturationScaling {
    pub fn new(eps: f64) -> Result<Self, SolitonError> {
        if eps.is_finite() && eps > 0.0 {
            Ok(Self { eps })
        } else {
            Err(SolitonError::InvalidArgument(format!(
                "saturation must be finite and > 0, got {eps}"
            )))
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn unit_frequency(&self, omega: f64) -> f64 {
        self.eps * omega
    }

    /// Classification of `(a, omega)`; the focusing window is `(0, 1/eps)`.
    pub fn window(&self, a: Sign, omega: f64, dim: usize) -> WindowClass {
        existence_window(a, self.unit_frequency(omega), dim)
    }

    /// Frequency of the 1D bright wave with peak `u_m`.
    pub fn bright_frequency(&self, u_m: f64) -> Result<f64, SolitonError> {
        Ok(bright_frequency(self.eps.sqrt() * u_m)? / self.eps)
    }

    /// Radial ground state, mapped back from the unit problem. `cfg.dr` and
    /// the radii in `cfg` refer to the unit problem.
    pub fn radial(&self, dim: usize, omega: f64, cfg: ShootingConfig) -> Result<RadialSoliton, SolitonError> {
        let mut s = shoot_radial(dim, self.unit_frequency(omega), cfg)?;
        let root = self.eps.sqrt();
        s.omega = omega;
        s.zeta_star /= root;
        s.r.iter_mut().for_each(|r| *r *= root);
        s.u.iter_mut().for_each(|u| *u /= root);
        s.du.iter_mut().for_each(|d| *d /= self.eps);
        s.join_radius *= root;
        s.bracket = (s.bracket.0 / root, s.bracket.1 / root);
        s.decay_delta = s.decay_delta.map(|d| d / root);
        Ok(s)
    }
}

//! Radial ground states of `-u'' - (d-1)/r u' + omega u = u^3 / (1 + u^2)` by
//! shooting on `zeta = u(0)`.

use super::blp::{g, g_prime, G};
use super::decay::{fit_decay, DecayingProfile};
use super::ode::Dopri;
use super::SolitonError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ShootingConfig {
    pub rtol: f64,
    /// Largest `u(0)` tried when looking for a crossing trajectory.
    pub zeta_max: f64,
    /// Classification horizon; defaults to `200 / sqrt(omega)`.
    pub r_max: Option<f64>,
    /// Extent of the returned profile; defaults to `40 / sqrt(omega)`.
    pub r_out: Option<f64>,
    pub dr: f64,
    /// Radius of the series start.
    pub r0: f64,
    /// The shot trajectory is replaced by the backward-integrated decaying
    /// solution once `u < match_level * zeta`.
    pub match_level: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            zeta_max: 1e4,
            r_max: None,
            r_out: None,
            dr: 0.05,
            r0: 1e-3,
            match_level: 1e-4,
        }
    }
}

impl ShootingConfig {
    fn validate(&self) -> Result<(), SolitonError> {
        let mut bad = Vec::new();
        if !(self.rtol > 0.0 && self.rtol <= 1e-3) {
            bad.push(format!("rtol must lie in (0, 1e-3], got {}", self.rtol));
        }
        if !(self.zeta_max.is_finite() && self.zeta_max > 0.0) {
            bad.push(format!("zeta_max must be finite and > 0, got {}", self.zeta_max));
        }
        for (name, v) in [("r_max", self.r_max), ("r_out", self.r_out)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    bad.push(format!("{name} must be finite and > 0, got {v}"));
                }
            }
        }
        if !(self.dr.is_finite() && self.dr > 0.0) {
            bad.push(format!("dr must be finite and > 0, got {}", self.dr));
        }
        if !(self.r0.is_finite() && self.r0 > 0.0 && self.r0 <= 0.1) {
            bad.push(format!("r0 must lie in (0, 0.1], got {}", self.r0));
        }
        if !(self.match_level > 0.0 && self.match_level < 0.1) {
            bad.push(format!("match_level must lie in (0, 0.1), got {}", self.match_level));
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(SolitonError::InvalidArgument(bad.join("; ")))
        }
    }
}

/// Fate of a single shot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShotOutcome {
    /// `u` became negative.
    Crossing { r: f64 },
    /// `u'` turned positive while `u` was still positive.
    Rebound { r: f64 },
    /// Undecided at the horizon with negative energy `u'^2/2 + G(u)`.
    Trapped,
    /// Undecided at the horizon with nonnegative energy.
    Escaping,
}

impl ShotOutcome {
    /// Whether the shot lies below the ground-state separatrix.
    pub fn is_low(self) -> bool {
        matches!(self, ShotOutcome::Rebound { .. } | ShotOutcome::Trapped)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RadialSoliton {
    pub dim: usize,
    pub omega: f64,
    pub zeta_star: f64,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    /// Max defect of the radial ODE with 8th-order finite differences.
    pub ode_residual: f64,
    /// Radius where the shot is joined to the backward tail.
    pub join_radius: f64,
    /// Relative mismatch of `u'` at the join.
    pub join_slope_defect: f64,
    pub bracket: (f64, f64),
    /// Outcomes at `zeta_star (1 -+ 1e-8)`.
    pub certificate: (ShotOutcome, ShotOutcome),
    pub decay_delta: Option<f64>,
}

impl RadialSoliton {
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.r.iter().copied().zip(self.u.iter().copied())
    }

    pub fn certified(&self) -> bool {
        self.certificate.0.is_low() && !self.certificate.1.is_low()
    }
}

impl DecayingProfile for RadialSoliton {
    fn half_line(&self) -> (Vec<f64>, Vec<f64>) {
        (self.r.clone(), self.u.clone())
    }
}

struct Shooter {
    dim: usize,
    omega: f64,
    cfg: ShootingConfig,
    r_max: f64,
}

impl Shooter {
    fn rhs(&self) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] {
        let damping = (self.dim - 1) as f64;
        let omega = self.omega;
        move |r, y| [y[1], -g(y[0], omega) - damping / r * y[1]]
    }

    /// `u = zeta + c2 r^2 + c4 r^4` at small `r`.
    fn series(&self, zeta: f64, r: f64) -> [f64; 2] {
        let d = self.dim as f64;
        let gz = g(zeta, self.omega);
        let c2 = -gz / (2.0 * d);
        let c4 = g_prime(zeta, self.omega) * gz / (8.0 * d * (d + 2.0));
        let r2 = r * r;
        [zeta + c2 * r2 + c4 * r2 * r2, 2.0 * c2 * r + 4.0 * c4 * r2 * r]
    }

    fn classify(&self, zeta: f64) -> Result<ShotOutcome, SolitonError> {
        let r0 = self.cfg.r0;
        let mut y = self.series(zeta, r0);
        let mut r = r0;
        let mut ode = Dopri::new(self.cfg.rtol, r0);
        let mut outcome = None;
        let tiny = 1e-12 * zeta;
        let floor = 1e-6 * zeta;
        ode.advance(self.rhs(), &mut r, &mut y, self.r_max, |r, y| {
            if y[0] < -tiny {
                outcome = Some(ShotOutcome::Crossing { r });
            } else if y[1] > tiny && y[0] > floor {
                outcome = Some(ShotOutcome::Rebound { r });
            }
            outcome.is_some()
        })?;
        Ok(outcome.unwrap_or_else(|| {
            if 0.5 * y[1] * y[1] + G(y[0], self.omega) < 0.0 {
                ShotOutcome::Trapped
            } else {
                ShotOutcome::Escaping
            }
        }))
    }

    fn bracket(&self) -> Result<(f64, f64), SolitonError> {
        let omega = self.omega;
        let mut candidates = Vec::new();
        let mut start = 1e-3;
        if omega > 0.0 && omega < 1.0 {
            let alpha = super::blp::blp_alpha(omega)?;
            let zeta0 = super::blp::blp_zeta0(omega)?;
            candidates.push(0.5 * (alpha + zeta0));
            start = zeta0;
        }
        while start <= self.cfg.zeta_max {
            candidates.push(start);
            start *= 2.0;
        }
        let mut low = None;
        for &z in &candidates {
            if self.classify(z)?.is_low() {
                low = Some(z);
            } else if let Some(lo) = low {
                return Ok((lo, z));
            }
        }
        Err(SolitonError::NoGroundState {
            omega,
            zeta_max: self.cfg.zeta_max,
            reason: if low.is_some() {
                "every trial amplitude rebounds".into()
            } else {
                "no trial amplitude rebounds".into()
            },
        })
    }

    /// Samples the shot on `r_k = k dr`, `k < count`.
    fn trajectory(&self, zeta: f64, dr: f64, count: usize) -> Result<Vec<[f64; 2]>, SolitonError> {
        let r0 = self.cfg.r0;
        let mut out = Vec::with_capacity(count);
        let mut ode = Dopri::new(self.cfg.rtol, r0);
        let mut r = r0;
        let mut y = self.series(zeta, r0);
        let rhs = self.rhs();
        for k in 0..count {
            let rk = k as f64 * dr;
            if rk <= r0 {
                out.push(self.series(zeta, rk));
            } else {
                ode.advance(&rhs, &mut r, &mut y, rk, |_, _| false)?;
                out.push(y);
            }
        }
        Ok(out)
    }

    /// Decaying solution integrated from `r_end` back to `r_join`, scaled so
    /// that `u(r_join) = u_join`. Entries are for `k = k_join..=k_end`.
    fn backward_tail(
        &self,
        u_join: f64,
        k_join: usize,
        k_end: usize,
        dr: f64,
    ) -> Result<Vec<[f64; 2]>, SolitonError> {
        let rate = self.omega.sqrt();
        let r_end = k_end as f64 * dr;
        let r_join = k_join as f64 * dr;
        let slope = rate + (self.dim - 1) as f64 / (2.0 * r_end);
        let rhs = self.rhs();
        let run = |c: f64| -> Result<Vec<[f64; 2]>, SolitonError> {
            let mut out = vec![[0.0; 2]; k_end - k_join + 1];
            let mut y = [c, -slope * c];
            let mut r = r_end;
            out[k_end - k_join] = y;
            let mut ode = Dopri::new(self.cfg.rtol, 0.5 * dr);
            for k in (k_join..k_end).rev() {
                ode.advance(&rhs, &mut r, &mut y, k as f64 * dr, |_, _| false)?;
                out[k - k_join] = y;
            }
            Ok(out)
        };
        let decay_factor = (self.dim - 1) as f64 / 2.0;
        let mut c = u_join * (-rate * (r_end - r_join)).exp() * (r_join / r_end).powf(decay_factor);
        for _ in 0..40 {
            let tail = run(c)?;
            let ratio = u_join / tail[0][0];
            if !(ratio.is_finite() && ratio > 0.0) {
                break;
            }
            if (ratio - 1.0).abs() < 1e-12 {
                return Ok(tail);
            }
            c *= ratio;
        }
        Err(SolitonError::Integration(
            "tail amplitude did not converge at the join".into(),
        ))
    }
}

const D1: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
const D2: [f64; 5] = [-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];

/// Max defect of the radial ODE on a uniform grid, using the even extension
/// of `u` across `r = 0`.
pub fn radial_ode_residual(dim: usize, omega: f64, dr: f64, u: &[f64]) -> f64 {
    let at = |k: isize| u[k.unsigned_abs()];
    let damping = (dim - 1) as f64;
    let mut worst = 0.0f64;
    for k in 0..u.len().saturating_sub(4) {
        let k = k as isize;
        let mut d1 = 0.0;
        let mut d2 = D2[0] * at(k);
        for j in 1..5 {
            let (p, m) = (at(k + j as isize), at(k - j as isize));
            d2 += D2[j] * (p + m);
            d1 += D1[j - 1] * (p - m);
        }
        d1 /= dr;
        d2 /= dr * dr;
        let uk = at(k);
        let transport = if k == 0 { damping * d2 } else { damping / (k as f64 * dr) * d1 };
        let res = -d2 - transport + omega * uk - uk * uk * uk / (1.0 + uk * uk);
        worst = worst.max(res.abs());
    }
    worst
}

/// Ground state in dimension `dim` (1 gives the unsaturated-geometry check
/// against the bright profile).
pub fn shoot_radial(dim: usize, omega: f64, cfg: ShootingConfig) -> Result<RadialSoliton, SolitonError> {
    if dim == 0 {
        return Err(SolitonError::InvalidArgument("dimension must be >= 1".into()));
    }
    if !omega.is_finite() {
        return Err(SolitonError::InvalidArgument(format!("frequency must be finite, got {omega}")));
    }
    cfg.validate()?;
    let scale = omega.max(1e-2).sqrt();
    let shooter = Shooter {
        dim,
        omega,
        cfg,
        r_max: cfg.r_max.unwrap_or(200.0 / scale),
    };
    let (mut lo, mut hi) = shooter.bracket()?;
    let bracket = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if shooter.classify(mid)?.is_low() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let zeta_star = 0.5 * (lo + hi);
    let certificate = (
        shooter.classify(zeta_star * (1.0 - 1e-8))?,
        shooter.classify(zeta_star * (1.0 + 1e-8))?,
    );

    let dr = cfg.dr;
    let r_out = cfg.r_out.unwrap_or(40.0 / scale);
    let intervals = 2 * ((r_out / (2.0 * dr)).ceil() as usize).max(4);
    let count = intervals + 1;
    let below = shooter.trajectory(lo, dr, count)?;
    let above = shooter.trajectory(hi, dr, count)?;
    let mut k_join = None;
    for k in 1..count {
        let u = 0.5 * (below[k][0] + above[k][0]);
        let du = 0.5 * (below[k][1] + above[k][1]);
        let spread = (below[k][0] - above[k][0]).abs();
        if u < cfg.match_level * zeta_star || spread > 1e-6 * u.abs() || du >= 0.0 || u <= 0.0 {
            k_join = Some(k);
            break;
        }
    }
    let k_join = match k_join {
        Some(k) if k + 8 < count => k,
        _ => {
            return Err(SolitonError::Integration(
                "shot never reached the tail before r_out".into(),
            ))
        }
    };
    let u_join = 0.5 * (below[k_join][0] + above[k_join][0]);
    let du_join = 0.5 * (below[k_join][1] + above[k_join][1]);
    if !(u_join > 0.0 && du_join < 0.0 && g(u_join, omega) < 0.0) {
        return Err(SolitonError::Integration(format!(
            "shot left the monotone tail before r = {}",
            k_join as f64 * dr
        )));
    }
    let tail = shooter.backward_tail(u_join, k_join, intervals, dr)?;
    let mut u = Vec::with_capacity(count);
    let mut du = Vec::with_capacity(count);
    for k in 0..count {
        if k < k_join {
            u.push(0.5 * (below[k][0] + above[k][0]));
            du.push(0.5 * (below[k][1] + above[k][1]));
        } else {
            u.push(tail[k - k_join][0]);
            du.push(tail[k - k_join][1]);
        }
    }
    let join_slope_defect = ((tail[0][1] - du_join) / du_join).abs();
    let r: Vec<f64> = (0..count).map(|k| k as f64 * dr).collect();
    let ode_residual = radial_ode_residual(dim, omega, dr, &u);
    let mut out = RadialSoliton {
        dim,
        omega,
        zeta_star,
        r,
        u,
        du,
        ode_residual,
        join_radius: k_join as f64 * dr,
        join_slope_defect,
        bracket,
        certificate,
        decay_delta: None,
    };
    out.decay_delta = fit_decay(&out).ok().map(|f| f.rate);
    Ok(out)
}

//! Hypotheses of the Berestycki-Lions-Peletier existence theorem for
//! `g(u) = -omega u + u^3 / (1 + u^2)`.

use super::ode::x_minus_log1p;
use super::SolitonError;
use serde::Serialize;

/// Growth exponent used for the last hypothesis: `g(s) / s^l -> 0`.
/// Admissible for every `d < 10`.
pub const GROWTH_EXPONENT: f64 = 1.5;

pub fn g(u: f64, omega: f64) -> f64 {
    -omega * u + u * u * u / (1.0 + u * u)
}

pub fn g_prime(u: f64, omega: f64) -> f64 {
    let t = u * u;
    -omega + t * (3.0 + t) / ((1.0 + t) * (1.0 + t))
}

/// Antiderivative of `g` vanishing at 0:
/// `G(u) = (1 - omega) u^2 / 2 - ln(1 + u^2) / 2`.
#[allow(non_snake_case)]
pub fn G(u: f64, omega: f64) -> f64 {
    let t = u * u;
    0.5 * (x_minus_log1p(t) - omega * t)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlpReport {
    pub omega: f64,
    pub alpha: f64,
    pub zeta0: f64,
    pub slope_at_alpha: f64,
    pub beta_infinite: bool,
    pub growth_exponent: f64,
    pub hypotheses_ok: [bool; 5],
}

impl BlpReport {
    pub fn all_ok(&self) -> bool {
        self.hypotheses_ok.iter().all(|&b| b)
    }
}

pub(crate) fn check_frequency(omega: f64) -> Result<(), SolitonError> {
    if omega.is_finite() && omega > 0.0 && omega < 1.0 {
        Ok(())
    } else {
        Err(SolitonError::InvalidArgument(format!(
            "frequency must lie in (0, 1), got {omega}"
        )))
    }
}

/// `sqrt(omega / (1 - omega))`, the positive zero of `g`.
pub fn blp_alpha(omega: f64) -> Result<f64, SolitonError> {
    check_frequency(omega)?;
    Ok((omega / (1.0 - omega)).sqrt())
}

/// First positive root of `G`, by bisection to machine precision.
pub fn blp_zeta0(omega: f64) -> Result<f64, SolitonError> {
    let alpha = blp_alpha(omega)?;
    let mut lo = alpha;
    let mut hi = 2.0 * alpha;
    while G(hi, omega) <= 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if G(mid, omega) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn blp_check(omega: f64) -> Result<BlpReport, SolitonError> {
    let alpha = blp_alpha(omega)?;
    let zeta0 = blp_zeta0(omega)?;
    let slope = 2.0 * omega * (1.0 - omega);
    let samples = 400;

    let h1 = alpha > 0.0
        && g(alpha, omega).abs() <= 1e-12 * alpha
        && (1..samples).all(|k| g(alpha * k as f64 / samples as f64, omega) < 0.0);
    let h2 = G(2.0 * zeta0, omega) > 0.0 && zeta0 > alpha;
    let step = 1e-6 * alpha;
    let h3 = slope > 0.0 && ((g(alpha + step, omega) / step) / slope - 1.0).abs() < 1e-3;
    let h4 = (1..=samples).all(|k| {
        let s = alpha + (zeta0 - alpha) * k as f64 / samples as f64;
        g(s, omega) > 0.0
    });
    // beta = +inf: G stays positive on a logarithmic ray beyond zeta0.
    let beta_infinite = (1..=samples).all(|k| {
        let s = zeta0 * (1.0 + 1e-6) * 1e8f64.powf(k as f64 / samples as f64);
        G(s, omega) > 0.0
    });
    let ratio = |s: f64| g(s, omega) / s.powf(GROWTH_EXPONENT);
    let h5 = beta_infinite
        && ratio(1e12) < 1e-5
        && (6..12).all(|e| ratio(10f64.powi(e + 1)) < ratio(10f64.powi(e)));
    Ok(BlpReport {
        omega,
        alpha,
        zeta0,
        slope_at_alpha: slope,
        beta_infinite,
        growth_exponent: GROWTH_EXPONENT,
        hypotheses_ok: [h1, h2, h3, h4, h5],
    })
}

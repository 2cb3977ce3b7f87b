//! Exponential decay of solitary-wave tails.

use super::bright::BrightProfile;
use super::SolitonError;
use serde::Serialize;

/// Profiles that can be read as samples `(r, u(r))` on `r >= 0`, starting at
/// the maximum.
pub trait DecayingProfile {
    fn half_line(&self) -> (Vec<f64>, Vec<f64>);
}

impl DecayingProfile for BrightProfile {
    fn half_line(&self) -> (Vec<f64>, Vec<f64>) {
        let mid = self.x.len() / 2;
        (self.x[mid..].to_vec(), self.u[mid..].to_vec())
    }
}

/// Fit window for `u / u(0)`.
pub const FIT_WINDOW: (f64, f64) = (1e-10, 1e-4);
/// Minimum number of decades the window must span.
pub const MIN_DECADES: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    /// Least-squares slope of `-ln u` against `r`.
    pub rate: f64,
    pub decades: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayReport {
    pub fit: DecayFit,
    /// Weight exponent `delta` used for `e^{delta r} u(r)`.
    pub delta: f64,
    pub weighted_sup: f64,
    /// `e^{delta r} u(r)` is non-increasing across the fit window.
    pub weighted_tail_decreasing: bool,
}

impl DecayReport {
    pub fn bounded(&self) -> bool {
        self.weighted_tail_decreasing && self.weighted_sup.is_finite()
    }
}

fn window(r: &[f64], u: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let peak = u[0];
    let (lo, hi) = (FIT_WINDOW.0 * peak, FIT_WINDOW.1 * peak);
    r.iter()
        .zip(u)
        .filter(|(_, &v)| v >= lo && v <= hi)
        .map(|(&r, &v)| (r, v))
        .unzip()
}

pub fn fit_decay(profile: &impl DecayingProfile) -> Result<DecayFit, SolitonError> {
    let (r, u) = profile.half_line();
    if u.first().is_none_or(|&v| v.is_nan() || v <= 0.0) {
        return Err(SolitonError::InvalidArgument("profile must start at a positive maximum".into()));
    }
    let (rw, uw) = window(&r, &u);
    let decades = match (uw.iter().cloned().reduce(f64::max), uw.iter().cloned().reduce(f64::min)) {
        (Some(a), Some(b)) if uw.len() >= 3 => (a / b).log10(),
        _ => 0.0,
    };
    if decades < MIN_DECADES {
        return Err(SolitonError::UnresolvedTail { decades });
    }
    let n = rw.len() as f64;
    let ys: Vec<f64> = uw.iter().map(|v| v.ln()).collect();
    let mr = rw.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in rw.iter().zip(&ys) {
        sxy += (x - mr) * (y - my);
        sxx += (x - mr) * (x - mr);
    }
    Ok(DecayFit {
        rate: -sxy / sxx,
        decades,
        points: rw.len(),
    })
}

/// Fits the tail rate and checks that `e^{0.49 omega r} u(r)` stays bounded.
pub fn decay_check(profile: &impl DecayingProfile, omega: f64) -> Result<DecayReport, SolitonError> {
    let fit = fit_decay(profile)?;
    let delta = 0.49 * omega;
    let (r, u) = profile.half_line();
    let weighted: Vec<f64> = r.iter().zip(&u).map(|(r, u)| (delta * r).exp() * u).collect();
    let weighted_sup = weighted.iter().cloned().fold(0.0, f64::max);
    let (lo, hi) = (FIT_WINDOW.0 * u[0], FIT_WINDOW.1 * u[0]);
    let tail: Vec<f64> = weighted
        .iter()
        .zip(&u)
        .filter(|(_, &v)| v >= lo && v <= hi)
        .map(|(w, _)| *w)
        .collect();
    let weighted_tail_decreasing = tail.windows(2).all(|p| p[1] <= p[0]);
    Ok(DecayReport {
        fit,
        delta,
        weighted_sup,
        weighted_tail_decreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::soliton::bright_profile;

    struct Exp(f64);

    impl DecayingProfile for Exp {
        fn half_line(&self) -> (Vec<f64>, Vec<f64>) {
            let r: Vec<f64> = (0..2000).map(|k| k as f64 * 0.05).collect();
            let u = r.iter().map(|r| (-self.0 * r).exp()).collect();
            (r, u)
        }
    }

    #[test]
    fn exact_exponential() {
        let f = fit_decay(&Exp(0.7)).unwrap();
        assert!((f.rate - 0.7).abs() < 1e-12);
        assert!(f.decades > 5.9);
        assert!(matches!(fit_decay(&Exp(0.05)), Err(SolitonError::UnresolvedTail { .. })));
    }

    #[test]
    fn bright_tail() {
        let w = 1.0 - 2f64.ln();
        let p = bright_profile(1.0, 40.0, 4096).unwrap();
        let r = decay_check(&p, w).unwrap();
        assert!(r.bounded());
        assert!(r.fit.rate >= w / 2.0);
        assert!((r.fit.rate - w.sqrt()).abs() < 1e-3 * w.sqrt(), "{}", r.fit.rate);
        let wide = bright_profile(1.0, 80.0, 8192).unwrap();
        let r2 = decay_check(&wide, w).unwrap();
        assert!((r2.fit.rate / r.fit.rate - 1.0).abs() < 0.01);
    }
}

//! Frequency windows outside which no solitary wave can exist.

use super::SolitonError;
use crate::model::Sign;
use serde::Serialize;

/// The argument that rules a configuration out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionClause {
    /// Energy identity, defocusing with `omega >= 0`.
    EnergyDefocusing,
    /// Energy identity, focusing with `omega >= 1`.
    EnergyFocusing,
    /// Combined energy-Pohozaev function `F`, defocusing with `omega <= -1`.
    CombinedDefocusing,
    /// Combined function `F`, focusing with `omega <= 0` (`d = 3, 4`) or
    /// `omega <= -(d - 4)/4` (`d >= 5`).
    CombinedFocusing,
    /// Pohozaev identity, focusing with `omega <= 0` in `d = 1, 2`.
    PohozaevLowDimension,
    /// Absence of embedded eigenvalues; needs `|U|^2 / (1 + |U|^2)` to decay
    /// faster than `1/|x|`.
    EmbeddedEigenvalue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "class", content = "clause", rename_all = "snake_case")]
pub enum WindowClass {
    Possible,
    Excluded(ExclusionClause),
    ExcludedConditional(ExclusionClause),
}

pub fn existence_window(a: Sign, omega: f64, dim: usize) -> WindowClass {
    use ExclusionClause::*;
    use WindowClass::*;
    let d = dim as f64;
    match a {
        Sign::Defocusing if omega >= 0.0 => Excluded(EnergyDefocusing),
        Sign::Defocusing if omega <= -1.0 => Excluded(CombinedDefocusing),
        Sign::Defocusing => ExcludedConditional(EmbeddedEigenvalue),
        Sign::Focusing if omega >= 1.0 => Excluded(EnergyFocusing),
        Sign::Focusing if omega > 0.0 => Possible,
        Sign::Focusing if dim <= 2 => Excluded(PohozaevLowDimension),
        Sign::Focusing if dim <= 4 => Excluded(CombinedFocusing),
        Sign::Focusing if omega <= -(d - 4.0) / 4.0 => Excluded(CombinedFocusing),
        Sign::Focusing => ExcludedConditional(EmbeddedEigenvalue),
    }
}

/// `F(X) = (2 omega + (d - 2) a X / (1 + X)) X - a d (X - ln(1 + X))`; the
/// identities force `int F(|U|^2) = 0`.
#[allow(non_snake_case)]
pub fn appendix_F(x: f64, omega: f64, a: Sign, dim: usize) -> Result<f64, SolitonError> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(SolitonError::InvalidArgument(format!("X must be finite and >= 0, got {x}")));
    }
    let a = a.value();
    let d = dim as f64;
    Ok((2.0 * omega + (d - 2.0) * a * x / (1.0 + x)) * x - a * d * super::ode::x_minus_log1p(x))
}

#[allow(non_snake_case)]
pub fn appendix_Fprime(x: f64, omega: f64, a: Sign, dim: usize) -> f64 {
    let a = a.value();
    let d = dim as f64;
    (2.0 * x * x * (omega - a) + x * (4.0 * omega - (4.0 - d) * a) + 2.0 * omega) / ((1.0 + x) * (1.0 + x))
}

/// Sample grid on `[0, 1e3]`: `X = 0` plus 2000 log-spaced points.
pub fn appendix_x_grid() -> Vec<f64> {
    let mut xs = vec![0.0];
    xs.extend((0..=2000).map(|k| 10f64.powf(-6.0 + 9.0 * k as f64 / 2000.0)));
    xs
}

/// `F'(X) < 0` on every sampled `X > 0`, and `F'(0) <= 0` (equality only at
/// `omega = 0`, where `F` is still strictly decreasing).
#[allow(non_snake_case)]
pub fn appendix_Fprime_negative(omega: f64, a: Sign, dim: usize) -> bool {
    appendix_x_grid().into_iter().all(|x| {
        let f = appendix_Fprime(x, omega, a, dim);
        if x == 0.0 {
            f <= 0.0
        } else {
            f < 0.0
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ExclusionClause::*;
    use WindowClass::*;

    #[test]
    fn examples() {
        assert_eq!(existence_window(Sign::Focusing, 0.5, 2), Possible);
        assert_eq!(existence_window(Sign::Defocusing, 0.3, 2), Excluded(EnergyDefocusing));
        assert_eq!(existence_window(Sign::Focusing, -0.1, 3), Excluded(CombinedFocusing));
        assert_eq!(existence_window(Sign::Focusing, 1.0, 2), Excluded(EnergyFocusing));
        assert_eq!(existence_window(Sign::Focusing, 0.0, 2), Excluded(PohozaevLowDimension));
        assert_eq!(existence_window(Sign::Focusing, -0.2, 6), ExcludedConditional(EmbeddedEigenvalue));
        assert_eq!(existence_window(Sign::Focusing, -0.5, 6), Excluded(CombinedFocusing));
        assert_eq!(existence_window(Sign::Defocusing, -0.5, 2), ExcludedConditional(EmbeddedEigenvalue));
        assert_eq!(existence_window(Sign::Defocusing, -1.0, 2), Excluded(CombinedDefocusing));
    }

    #[test]
    fn f_properties() {
        for d in 1..7 {
            for &a in &[Sign::Focusing, Sign::Defocusing] {
                assert_eq!(appendix_F(0.0, 0.3, a, d).unwrap(), 0.0);
            }
        }
        assert!(appendix_F(-1.0, 0.3, Sign::Focusing, 2).is_err());
        assert!(appendix_Fprime_negative(-0.5, Sign::Focusing, 3));
        assert!(!appendix_Fprime_negative(0.5, Sign::Focusing, 2));
        let values: Vec<f64> = appendix_x_grid()
            .into_iter()
            .map(|x| appendix_F(x, 0.5, Sign::Focusing, 2).unwrap())
            .collect();
        assert!(values.iter().any(|&v| v > 0.0) && values.iter().any(|&v| v < 0.0));
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        for &(w, a, d) in &[(-0.5, Sign::Focusing, 3), (0.3, Sign::Defocusing, 5), (0.7, Sign::Focusing, 1)] {
            for &x in &[0.1, 1.0, 7.0, 300.0] {
                let h = 1e-6 * x;
                let fd = (appendix_F(x + h, w, a, d).unwrap() - appendix_F(x - h, w, a, d).unwrap()) / (2.0 * h);
                assert!((fd - appendix_Fprime(x, w, a, d)).abs() < 1e-6 * (1.0 + fd.abs()));
            }
        }
    }
}

//! Model parameters shared by the propagators and the solitary-wave tools.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("nonlinearity sign must be +1 or -1, got {0}")]
    Sign(i64),
    #[error("saturation must be finite and > 0, got {0}")]
    Saturation(f64),
    #[error("background intensity must be finite and >= 0, got {0}")]
    Background(f64),
    #[error("boundary constant must be finite and >= 0, got {0}")]
    BoundaryConstant(f64),
}

/// Sign `a` of the nonlinearity: `+1` focusing, `-1` defocusing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum Sign {
    Focusing,
    Defocusing,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Focusing => 1.0,
            Sign::Defocusing => -1.0,
        }
    }
}

impl TryFrom<i64> for Sign {
    type Error = ParamError;

    fn try_from(v: i64) -> Result<Self, ParamError> {
        match v {
            1 => Ok(Sign::Focusing),
            -1 => Ok(Sign::Defocusing),
            other => Err(ParamError::Sign(other)),
        }
    }
}

impl From<Sign> for i64 {
    fn from(s: Sign) -> i64 {
        match s {
            Sign::Focusing => 1,
            Sign::Defocusing => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Focusing => "+1",
            Sign::Defocusing => "-1",
        })
    }
}

/// Parameters of the saturated nonlinearity
/// `a (|A|^2 - |A_inf|^2) / (1 + eps |A|^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelParams {
    pub a: Sign,
    pub saturation: f64,
    pub background_intensity: f64,
    /// Constant `C` of the 1D reduction `(1+|A|^2) phi_x = |A|^2 - C`.
    pub boundary_constant: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            a: Sign::Focusing,
            saturation: 1.0,
            background_intensity: 0.0,
            boundary_constant: 0.0,
        }
    }
}

impl ModelParams {
    pub fn new(a: Sign) -> Self {
        Self {
            a,
            ..Self::default()
        }
    }

    pub fn with_saturation(mut self, eps: f64) -> Self {
        self.saturation = eps;
        self
    }

    /// Sets `|A_inf|^2`; the boundary constant follows it, as required by
    /// the dark-wave reduction.
    pub fn with_background(mut self, intensity: f64) -> Self {
        self.background_intensity = intensity;
        self.boundary_constant = intensity;
        self
    }

    /// Every violated constraint, in field order.
    pub fn violations(&self) -> Vec<ParamError> {
        let mut out = Vec::new();
        if !(self.saturation.is_finite() && self.saturation > 0.0) {
            out.push(ParamError::Saturation(self.saturation));
        }
        if !(self.background_intensity.is_finite() && self.background_intensity >= 0.0) {
            out.push(ParamError::Background(self.background_intensity));
        }
        if !(self.boundary_constant.is_finite() && self.boundary_constant >= 0.0) {
            out.push(ParamError::BoundaryConstant(self.boundary_constant));
        }
        out
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        match self.violations().into_iter().next() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

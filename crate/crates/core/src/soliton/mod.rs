//! Solitary waves of the saturated NLS: 1D bright and dark profiles,
//! radial ground states, their integral identities, decay, and the
//! frequency windows where they cannot exist.

mod blp;
mod bright;
mod dark;
mod decay;
mod identities;
pub(crate) mod ode;
mod radial;
mod scaling;
mod window;

pub use blp::{blp_alpha, blp_check, blp_zeta0, g, g_prime, BlpReport, G, GROWTH_EXPONENT};
pub use bright::{bright_first_integral, bright_frequency, bright_profile, BrightProfile};
pub use dark::{dark_first_integral, dark_profile, DarkProfile};
pub use decay::{decay_check, fit_decay, DecayFit, DecayReport, DecayingProfile, FIT_WINDOW, MIN_DECADES};
pub use identities::{identity_residuals, residuals_from, IdentityIntegrals, SolitaryWave};
pub use radial::{radial_ode_residual, shoot_radial, RadialSoliton, ShootingConfig, ShotOutcome};
pub use scaling::SaturationScaling;
pub use window::{
    appendix_F, appendix_Fprime, appendix_Fprime_negative, appendix_x_grid, existence_window,
    ExclusionClause, WindowClass,
};

use crate::field::FieldError;
use crate::grid::GridError;
use thiserror::Error;

/// Largest admissible `u(x_max) / u_m` (bright) or `|u(x_max) - u_inf| / |u_inf|`
/// (dark).
pub const TAIL_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolitonError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain too short: tail value {tail:e} exceeds {threshold:e}")]
    TailNotDecayed { tail: f64, threshold: f64 },
    #[error("no ground state detected at omega = {omega} below zeta_max = {zeta_max}: {reason}")]
    NoGroundState { omega: f64, zeta_max: f64, reason: String },
    #[error("tail resolved over only {decades:.2} decades")]
    UnresolvedTail { decades: f64 },
    #[error("integration failed: {0}")]
    Integration(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

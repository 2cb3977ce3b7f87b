//! Numerical models of light propagation in photorefractive media: the
//! saturated nonlinear Schrödinger equation, the Zozulya-Anderson
//! envelope/potential system, and tools that construct and validate their
//! solitary waves.

pub mod config;
pub mod field;
pub mod grid;
pub mod model;
pub mod nls;
pub mod potential;
pub mod prf1;
pub mod soliton;
pub mod spectral;
pub mod verify;
pub mod za;

pub use field::{integrate, ComplexField, RealField};
pub use grid::{make_grid, GridSpec};
pub use model::{ModelParams, Sign};

//! Sampled real and complex fields on a [`GridSpec`].

use crate::grid::{GridError, GridSpec};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("field has {got} samples but grid has {expected} nodes")]
    Length { expected: usize, got: usize },
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Neumaier-compensated sum in index order.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: GridSpec,
    values: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl ComplexField {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self, FieldError> {
        if values.len() != grid.len() {
            return Err(FieldError::Length {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(FieldError::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    /// Internal constructor for values already known to be consistent.
    pub(crate) fn from_parts(grid: GridSpec, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        Self { grid, values }
    }

    pub fn zeros(grid: &GridSpec) -> Self {
        Self::from_parts(grid.clone(), vec![Complex64::new(0.0, 0.0); grid.len()])
    }

    /// Samples `f` at every node. Panics if `f` returns a non-finite value.
    pub fn from_fn(grid: &GridSpec, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        grid.for_each_node(|i, x| values[i] = f(x));
        Self::new(grid.clone(), values).expect("sampled function must be finite")
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Index of the first non-finite sample, if any.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.values
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
    }

    /// Pointwise `|A|^2`.
    pub fn intensity(&self) -> RealField {
        RealField::from_parts(
            self.grid.clone(),
            self.values.iter().map(|z| z.norm_sqr()).collect(),
        )
    }

    /// Pointwise modulus `|A|`.
    pub fn modulus(&self) -> RealField {
        RealField::from_parts(
            self.grid.clone(),
            self.values.iter().map(|z| z.norm()).collect(),
        )
    }

    pub fn real_part(&self) -> RealField {
        RealField::from_parts(self.grid.clone(), self.values.iter().map(|z| z.re).collect())
    }

    pub fn conj(&self) -> Self {
        Self::from_parts(self.grid.clone(), self.values.iter().map(|z| z.conj()).collect())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_parts(self.grid.clone(), self.values.iter().map(|z| z * c).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `integral |A|^2`.
    pub fn mass(&self) -> f64 {
        integrate(&self.intensity())
    }

    /// Discrete L2 norm `sqrt(integral |A|^2)`.
    pub fn norm_l2(&self) -> f64 {
        self.mass().sqrt()
    }

    /// `||self - other||_2`; grids must match.
    pub fn distance_l2(&self, other: &ComplexField) -> Result<f64, FieldError> {
        self.grid.ensure_same(&other.grid)?;
        let diff = compensated_sum(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (a - b).norm_sqr()),
        );
        Ok((diff * self.grid.cell_volume()).sqrt())
    }
}

impl RealField {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self, FieldError> {
        if values.len() != grid.len() {
            return Err(FieldError::Length {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(FieldError::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_parts(grid: GridSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        Self { grid, values }
    }

    pub fn zeros(grid: &GridSpec) -> Self {
        Self::from_parts(grid.clone(), vec![0.0; grid.len()])
    }

    /// Samples `f` at every node. Panics if `f` returns a non-finite value.
    pub fn from_fn(grid: &GridSpec, mut f: impl FnMut(&[f64]) -> f64) -> Self {
        let mut values = vec![0.0; grid.len()];
        grid.for_each_node(|i, x| values[i] = f(x));
        Self::new(grid.clone(), values).expect("sampled function must be finite")
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn to_complex(&self) -> ComplexField {
        ComplexField::from_parts(
            self.grid.clone(),
            self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_parts(self.grid.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_map(&self, other: &RealField, f: impl Fn(f64, f64) -> f64) -> Result<Self, FieldError> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Self::from_parts(
            self.grid.clone(),
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// Grid mean `(1/N) sum values`.
    pub fn mean(&self) -> f64 {
        compensated_sum(self.values.iter().copied()) / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Discrete L2 norm `sqrt(integral f^2)`.
    pub fn norm_l2(&self) -> f64 {
        (compensated_sum(self.values.iter().map(|v| v * v)) * self.grid.cell_volume()).sqrt()
    }

    pub fn distance_l2(&self, other: &RealField) -> Result<f64, FieldError> {
        self.grid.ensure_same(&other.grid)?;
        let diff = compensated_sum(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (a - b) * (a - b)),
        );
        Ok((diff * self.grid.cell_volume()).sqrt())
    }
}

/// Rectangle rule on the periodic grid: `h^d * sum f`, summed in index order
/// with compensation.
pub fn integrate(f: &RealField) -> f64 {
    f.grid().cell_volume() * compensated_sum(f.values().iter().copied())
}

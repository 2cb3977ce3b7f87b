//! Periodic uniform grids on `[-L/2, L/2)` per axis.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid dimension must be 1 or 2, got {0}")]
    Dimension(usize),
    #[error("expected {expected} per-axis entries, got {got}")]
    AxisCount { expected: usize, got: usize },
    #[error("points per axis must be a power of two >= 8, got {0}")]
    Points(usize),
    #[error("domain length must be finite and positive, got {0}")]
    Length(f64),
    #[error("grids differ: {0:?} vs {1:?}")]
    Mismatch(GridSpec, GridSpec),
}

/// A periodic, uniformly spaced grid in one or two dimensions.
///
/// Samples are stored row-major: the first axis (`x`) is the slow index, the
/// last axis the fast one. Node `j` on an axis sits at `-L/2 + j*h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct GridSpec {
    points: Vec<usize>,
    lengths: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridRepr {
    points: Vec<usize>,
    lengths: Vec<f64>,
}

impl TryFrom<GridRepr> for GridSpec {
    type Error = GridError;

    fn try_from(r: GridRepr) -> Result<Self, GridError> {
        make_grid(r.points.len(), &r.points, &r.lengths)
    }
}

impl From<GridSpec> for GridRepr {
    fn from(g: GridSpec) -> Self {
        GridRepr {
            points: g.points,
            lengths: g.lengths,
        }
    }
}

/// Builds a validated grid.
pub fn make_grid(dim: usize, points: &[usize], lengths: &[f64]) -> Result<GridSpec, GridError> {
    if !(1..=2).contains(&dim) {
        return Err(GridError::Dimension(dim));
    }
    if points.len() != dim {
        return Err(GridError::AxisCount {
            expected: dim,
            got: points.len(),
        });
    }
    if lengths.len() != dim {
        return Err(GridError::AxisCount {
            expected: dim,
            got: lengths.len(),
        });
    }
    for &n in points {
        if n < 8 || !n.is_power_of_two() {
            return Err(GridError::Points(n));
        }
    }
    for &l in lengths {
        if !(l.is_finite() && l > 0.0) {
            return Err(GridError::Length(l));
        }
    }
    Ok(GridSpec {
        points: points.to_vec(),
        lengths: lengths.to_vec(),
    })
}

impl GridSpec {
    pub fn line(points: usize, length: f64) -> Result<Self, GridError> {
        make_grid(1, &[points], &[length])
    }

    pub fn square(points: usize, length: f64) -> Result<Self, GridError> {
        make_grid(2, &[points, points], &[length, length])
    }

    pub fn dim(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    /// Total number of nodes.
    pub fn len(&self) -> usize {
        self.points.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.lengths[axis] / self.points[axis] as f64
    }

    /// Volume element `h_1 * ... * h_d`.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).product()
    }

    /// Domain measure `L_1 * ... * L_d`.
    pub fn volume(&self) -> f64 {
        self.lengths.iter().product()
    }

    /// Node coordinates along one axis.
    pub fn coords(&self, axis: usize) -> Vec<f64> {
        let n = self.points[axis];
        let h = self.spacing(axis);
        let half = 0.5 * self.lengths[axis];
        (0..n).map(|j| -half + j as f64 * h).collect()
    }

    /// Angular wavenumbers `2*pi*m/L` in transform order
    /// (`m = 0, 1, ..., N/2-1, -N/2, ..., -1`).
    pub fn wavenumbers(&self, axis: usize) -> Vec<f64> {
        let n = self.points[axis];
        let scale = 2.0 * PI / self.lengths[axis];
        (0..n)
            .map(|j| {
                let m = if j < n / 2 { j as i64 } else { j as i64 - n as i64 };
                scale * m as f64
            })
            .collect()
    }

    /// Wavenumbers for first derivatives: identical to [`Self::wavenumbers`]
    /// except that the Nyquist mode is zeroed so real fields stay real.
    pub fn derivative_wavenumbers(&self, axis: usize) -> Vec<f64> {
        let mut k = self.wavenumbers(axis);
        k[self.points[axis] / 2] = 0.0;
        k
    }

    /// Calls `f(flat_index, coordinates)` for every node in storage order.
    pub fn for_each_node(&self, mut f: impl FnMut(usize, &[f64])) {
        match self.dim() {
            1 => {
                for (i, x) in self.coords(0).into_iter().enumerate() {
                    f(i, &[x]);
                }
            }
            _ => {
                let xs = self.coords(0);
                let ys = self.coords(1);
                let ny = ys.len();
                for (i, &x) in xs.iter().enumerate() {
                    for (j, &y) in ys.iter().enumerate() {
                        f(i * ny + j, &[x, y]);
                    }
                }
            }
        }
    }

    pub fn ensure_same(&self, other: &GridSpec) -> Result<(), GridError> {
        if self == other {
            Ok(())
        } else {
            Err(GridError::Mismatch(self.clone(), other.clone()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_circle_grid() {
        let g = make_grid(1, &[8], &[2.0 * PI]).unwrap();
        assert_eq!(g.spacing(0), 2.0 * PI / 8.0);
        let k = g.wavenumbers(0);
        let expect = [0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0];
        for (a, b) in k.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
        assert_eq!(g.derivative_wavenumbers(0)[4], 0.0);
        assert_eq!(g.coords(0)[0], -PI);
    }

    #[test]
    fn square_grid() {
        let g = make_grid(2, &[16, 16], &[40.0, 40.0]).unwrap();
        assert_eq!(g.len(), 256);
        assert_eq!(g.spacing(0), 2.5);
        assert_eq!(g.spacing(1), 2.5);
        assert_eq!(g.spacing(0) * 16.0, 40.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(make_grid(1, &[12], &[10.0]), Err(GridError::Points(12)));
        assert_eq!(make_grid(1, &[4], &[10.0]), Err(GridError::Points(4)));
        assert_eq!(make_grid(3, &[8, 8, 8], &[1.0; 3]), Err(GridError::Dimension(3)));
        assert_eq!(make_grid(1, &[8], &[0.0]), Err(GridError::Length(0.0)));
        assert!(make_grid(1, &[8], &[f64::NAN]).is_err());
        assert!(make_grid(2, &[8], &[1.0]).is_err());
    }

    #[test]
    fn serde_validates() {
        let g = GridSpec::square(32, 10.0).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<GridSpec>(&s).unwrap(), g);
        assert!(serde_json::from_str::<GridSpec>(r#"{"points":[12],"lengths":[1.0]}"#).is_err());
    }
}

//! Fourier transforms and spectral differential operators on periodic grids.

use crate::field::{ComplexField, FieldError, RealField};
use crate::grid::GridSpec;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::sync::Arc;
use thiserror::Error;

/// Relative mean allowed in the right-hand side of a periodic Poisson problem.
pub const SOLVABILITY_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("right-hand side has mean {mean:e} (rms {rms:e}); no periodic solution exists")]
    NonZeroMean { mean: f64, rms: f64 },
    #[error("operation requires a {expected}D grid, got {got}D")]
    Dimension { expected: usize, got: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

fn transform(grid: &GridSpec, data: &mut [Complex64], inverse: bool) {
    match grid.dim() {
        1 => plan(data.len(), inverse).process(data),
        _ => {
            let (nx, ny) = (grid.points()[0], grid.points()[1]);
            plan(ny, inverse).process(data);
            let mut cols = vec![Complex64::new(0.0, 0.0); nx * ny];
            for i in 0..nx {
                for j in 0..ny {
                    cols[j * nx + i] = data[i * ny + j];
                }
            }
            plan(nx, inverse).process(&mut cols);
            for i in 0..nx {
                for j in 0..ny {
                    data[i * ny + j] = cols[j * nx + i];
                }
            }
        }
    }
    if inverse {
        let s = 1.0 / data.len() as f64;
        data.iter_mut().for_each(|z| *z *= s);
    }
}

/// Unnormalized forward DFT in place.
pub fn forward(grid: &GridSpec, data: &mut [Complex64]) {
    transform(grid, data, false);
}

/// Inverse DFT in place, normalized so that `inverse(forward(f)) = f`.
pub fn inverse(grid: &GridSpec, data: &mut [Complex64]) {
    transform(grid, data, true);
}

/// Wavenumber vectors per axis, with the Nyquist mode either kept
/// (second-order operators) or zeroed (first derivatives).
pub(crate) struct Wavenumbers {
    pub axes: Vec<Vec<f64>>,
}

impl Wavenumbers {
    pub fn full(grid: &GridSpec) -> Self {
        Self {
            axes: (0..grid.dim()).map(|a| grid.wavenumbers(a)).collect(),
        }
    }

    pub fn derivative(grid: &GridSpec) -> Self {
        Self {
            axes: (0..grid.dim()).map(|a| grid.derivative_wavenumbers(a)).collect(),
        }
    }

    /// Calls `f(flat_index, k)` in storage order.
    pub fn for_each(&self, mut f: impl FnMut(usize, &[f64])) {
        match self.axes.len() {
            1 => {
                for (i, &k) in self.axes[0].iter().enumerate() {
                    f(i, &[k]);
                }
            }
            _ => {
                let ny = self.axes[1].len();
                for (i, &kx) in self.axes[0].iter().enumerate() {
                    for (j, &ky) in self.axes[1].iter().enumerate() {
                        f(i * ny + j, &[kx, ky]);
                    }
                }
            }
        }
    }

    /// Flattened `|k|^2` in storage order.
    pub fn norm_sq(&self) -> Vec<f64> {
        let n: usize = self.axes.iter().map(Vec::len).product();
        let mut out = vec![0.0; n];
        self.for_each(|i, k| out[i] = k.iter().map(|v| v * v).sum());
        out
    }

    /// Flattened wavenumber component along `axis`.
    pub fn component(&self, axis: usize) -> Vec<f64> {
        let n: usize = self.axes.iter().map(Vec::len).product();
        let mut out = vec![0.0; n];
        self.for_each(|i, k| out[i] = k[axis]);
        out
    }
}

/// Fields that can be pushed through a spectral multiplier.
pub trait SpectralField: Sized {
    fn grid(&self) -> &GridSpec;
    fn to_samples(&self) -> Vec<Complex64>;
    fn from_samples(grid: &GridSpec, samples: Vec<Complex64>) -> Self;
}

impl SpectralField for ComplexField {
    fn grid(&self) -> &GridSpec {
        ComplexField::grid(self)
    }
    fn to_samples(&self) -> Vec<Complex64> {
        self.values().to_vec()
    }
    fn from_samples(grid: &GridSpec, samples: Vec<Complex64>) -> Self {
        ComplexField::from_parts(grid.clone(), samples)
    }
}

impl SpectralField for RealField {
    fn grid(&self) -> &GridSpec {
        RealField::grid(self)
    }
    fn to_samples(&self) -> Vec<Complex64> {
        self.values().iter().map(|&v| Complex64::new(v, 0.0)).collect()
    }
    fn from_samples(grid: &GridSpec, samples: Vec<Complex64>) -> Self {
        RealField::from_parts(grid.clone(), samples.into_iter().map(|z| z.re).collect())
    }
}

/// Multiplies the spectrum of `f` by `multiplier[i]` (storage order).
pub fn apply_multiplier<F: SpectralField>(f: &F, multiplier: &[Complex64]) -> F {
    let grid = f.grid().clone();
    let mut data = f.to_samples();
    forward(&grid, &mut data);
    data.iter_mut().zip(multiplier).for_each(|(z, m)| *z *= m);
    inverse(&grid, &mut data);
    F::from_samples(&grid, data)
}

/// Spectral Laplacian: multiply by `-|k|^2`.
pub fn laplacian<F: SpectralField>(f: &F) -> F {
    let m: Vec<Complex64> = Wavenumbers::full(f.grid())
        .norm_sq()
        .into_iter()
        .map(|k2| Complex64::new(-k2, 0.0))
        .collect();
    apply_multiplier(f, &m)
}

/// Spectral first derivative along `axis`, Nyquist mode removed.
pub fn derivative<F: SpectralField>(f: &F, axis: usize) -> F {
    let m: Vec<Complex64> = Wavenumbers::derivative(f.grid())
        .component(axis)
        .into_iter()
        .map(|k| Complex64::new(0.0, k))
        .collect();
    apply_multiplier(f, &m)
}

/// `d/dx` along the first axis.
pub fn gradient_x<F: SpectralField>(f: &F) -> F {
    derivative(f, 0)
}

/// All first partial derivatives, one field per axis.
pub fn gradient<F: SpectralField>(f: &F) -> Vec<F> {
    (0..f.grid().dim()).map(|a| derivative(f, a)).collect()
}

/// `integral |grad A|^2` computed from the spectral gradient.
pub fn gradient_norm_sq(f: &ComplexField) -> f64 {
    gradient(f)
        .iter()
        .map(|g| crate::field::integrate(&g.intensity()))
        .sum()
}

fn check_solvable(f: &RealField) -> Result<(), SpectralError> {
    let mean = f.mean();
    let rms = (f.values().iter().map(|v| v * v).sum::<f64>() / f.values().len() as f64).sqrt();
    if mean.abs() > SOLVABILITY_TOL * rms {
        return Err(SpectralError::NonZeroMean { mean, rms });
    }
    Ok(())
}

/// Solves `Lap(phi) = f` for the zero-mean `phi`. Rejects `f` whose mean is
/// not negligible relative to its rms value.
pub fn inverse_laplacian_zero_mean(f: &RealField) -> Result<RealField, SpectralError> {
    check_solvable(f)?;
    let m: Vec<Complex64> = Wavenumbers::full(f.grid())
        .norm_sq()
        .into_iter()
        .map(|k2| {
            if k2 == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(-1.0 / k2, 0.0)
            }
        })
        .collect();
    Ok(apply_multiplier(f, &m))
}

/// Zero-mean periodic antiderivative of a 1D field (`F' = f`). The mean of
/// `f` and its Nyquist component are discarded.
pub fn antiderivative_zero_mean(f: &RealField) -> Result<RealField, SpectralError> {
    if f.grid().dim() != 1 {
        return Err(SpectralError::Dimension {
            expected: 1,
            got: f.grid().dim(),
        });
    }
    let m: Vec<Complex64> = f
        .grid()
        .derivative_wavenumbers(0)
        .into_iter()
        .map(|k| {
            if k == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -1.0 / k)
            }
        })
        .collect();
    Ok(apply_multiplier(f, &m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::integrate;
    use std::f64::consts::PI;

    fn rel_err(a: &[f64], b: &[f64]) -> f64 {
        let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
        let den: f64 = b.iter().map(|y| y * y).sum();
        (num / den).sqrt()
    }

    #[test]
    fn laplacian_of_plane_wave() {
        let g = GridSpec::line(32, 2.0 * PI).unwrap();
        let f = ComplexField::from_fn(&g, |x| Complex64::new(0.0, x[0]).exp());
        let l = laplacian(&f);
        for (a, b) in l.values().iter().zip(f.values()) {
            assert!((a + b).norm() < 1e-13);
        }
    }

    #[test]
    fn laplacian_of_constant_and_sine() {
        let g = GridSpec::line(32, 2.0 * PI).unwrap();
        let c = RealField::from_fn(&g, |_| 3.5);
        assert!(laplacian(&c).max_abs() < 1e-13);
        let s = RealField::from_fn(&g, |x| (3.0 * x[0]).sin());
        let expect: Vec<f64> = s.values().iter().map(|v| -9.0 * v).collect();
        assert!(rel_err(laplacian(&s).values(), &expect) < 1e-13);
    }

    #[test]
    fn gradient_x_oracles() {
        let g = GridSpec::line(32, 2.0 * PI).unwrap();
        let f = RealField::from_fn(&g, |x| x[0].cos());
        let d = gradient_x(&f);
        let expect = RealField::from_fn(&g, |x| -x[0].sin());
        assert!(rel_err(d.values(), expect.values()) < 1e-13);
        assert!(gradient_x(&RealField::from_fn(&g, |_| 2.0)).max_abs() < 1e-14);

        let g2 = GridSpec::square(32, 2.0 * PI).unwrap();
        let f2 = RealField::from_fn(&g2, |x| (2.0 * x[0]).sin() * x[1].cos());
        let expect2 = RealField::from_fn(&g2, |x| 2.0 * (2.0 * x[0]).cos() * x[1].cos());
        assert!(rel_err(gradient_x(&f2).values(), expect2.values()) < 1e-13);
    }

    #[test]
    fn poisson_oracles() {
        let g = GridSpec::line(32, 2.0 * PI).unwrap();
        let f = RealField::from_fn(&g, |x| -x[0].sin());
        let phi = inverse_laplacian_zero_mean(&f).unwrap();
        let expect = RealField::from_fn(&g, |x| x[0].sin());
        assert!(rel_err(phi.values(), expect.values()) < 1e-13);
        assert_eq!(inverse_laplacian_zero_mean(&RealField::zeros(&g)).unwrap().max_abs(), 0.0);
        assert!(matches!(
            inverse_laplacian_zero_mean(&RealField::from_fn(&g, |_| 1.0)),
            Err(SpectralError::NonZeroMean { .. })
        ));
    }

    #[test]
    fn antiderivative_inverts_derivative() {
        let g = GridSpec::line(64, 10.0).unwrap();
        let f = RealField::from_fn(&g, |x| (-x[0] * x[0]).exp() * x[0]);
        let big = antiderivative_zero_mean(&f).unwrap();
        let back = gradient_x(&big);
        assert!(rel_err(back.values(), f.values()) < 1e-10);
        assert!(big.mean().abs() < 1e-15);
    }

    #[test]
    fn parseval_2d() {
        let g = GridSpec::square(16, 5.0).unwrap();
        let f = ComplexField::from_fn(&g, |x| {
            Complex64::new((-(x[0] * x[0] + x[1] * x[1])).exp(), x[0].sin() * 0.1)
        });
        let mut spec = f.to_samples();
        forward(&g, &mut spec);
        let n = g.len() as f64;
        let parseval = g.cell_volume() / n * spec.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let direct = integrate(&f.intensity());
        assert!((parseval - direct).abs() <= 1e-12 * direct);
    }
}

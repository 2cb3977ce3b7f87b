//! Adaptive Dormand-Prince 5(4) integrator with pure relative error control.

use super::SolitonError;

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Difference between the 5th and 4th order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone)]
pub(crate) struct Dopri {
    pub rtol: f64,
    /// Magnitude of the next trial step.
    pub h: f64,
    pub max_steps: usize,
}

impl Dopri {
    pub fn new(rtol: f64, h: f64) -> Self {
        Self {
            rtol,
            h,
            max_steps: 1_000_000,
        }
    }

    /// Advances `(t, y)` to `t_end` (either direction). After every accepted
    /// step `stop(t, y)` is consulted; returns `Ok(true)` if it fired.
    pub fn advance<const N: usize>(
        &mut self,
        f: impl Fn(f64, &[f64; N]) -> [f64; N],
        t: &mut f64,
        y: &mut [f64; N],
        t_end: f64,
        mut stop: impl FnMut(f64, &[f64; N]) -> bool,
    ) -> Result<bool, SolitonError> {
        let dir = if t_end >= *t { 1.0 } else { -1.0 };
        let mut k = [[0.0; N]; 7];
        k[0] = f(*t, y);
        let mut steps = 0;
        while dir * (t_end - *t) > 0.0 {
            steps += 1;
            if steps > self.max_steps {
                return Err(SolitonError::Integration(format!(
                    "step limit reached at t = {}",
                    *t
                )));
            }
            let remaining = (t_end - *t).abs();
            let last = self.h >= remaining * (1.0 - 1e-12);
            let h = dir * if last { remaining } else { self.h };
            for s in 1..7 {
                let mut ys = *y;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s][j];
                    if a != 0.0 {
                        for i in 0..N {
                            ys[i] += h * a * kj[i];
                        }
                    }
                }
                k[s] = f(*t + C[s] * h, &ys);
            }
            let mut y_new = *y;
            for i in 0..N {
                for s in 0..6 {
                    y_new[i] += h * A[6][s] * k[s][i];
                }
            }
            let mut err = 0.0f64;
            for i in 0..N {
                let mut e = 0.0;
                for s in 0..7 {
                    e += E[s] * k[s][i];
                }
                let scale = self.rtol * y[i].abs().max(y_new[i].abs()) + f64::MIN_POSITIVE;
                err = err.max((h * e).abs() / scale);
            }
            if !err.is_finite() && y_new.iter().all(|v| v.is_finite()) {
                err = 1e10;
            }
            if err <= 1.0 {
                *t = if last { t_end } else { *t + h };
                *y = y_new;
                k[0] = k[6];
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                // A clipped final step says little about the natural step size.
                if !last || grow < 1.0 {
                    self.h *= grow;
                }
                if y.iter().any(|v| !v.is_finite()) {
                    return Err(SolitonError::Integration(format!(
                        "non-finite state at t = {}",
                        *t
                    )));
                }
                if stop(*t, y) {
                    return Ok(true);
                }
            } else {
                self.h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                if self.h < 1e-14 * t.abs().max(1.0) {
                    return Err(SolitonError::Integration(format!(
                        "step size underflow at t = {}",
                        *t
                    )));
                }
            }
        }
        Ok(false)
    }
}

/// `x - ln(1 + x)` without cancellation for small `|x|`; `x > -1`.
pub(crate) fn x_minus_log1p(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        let mut term = x * x;
        let mut sum = 0.0;
        for n in 2..12 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * term / n as f64;
            term *= x;
        }
        sum
    } else {
        x - x.ln_1p()
    }
}

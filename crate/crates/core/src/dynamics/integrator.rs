//! Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) over dense complex
//! matrices. Dimensions here are tiny, so robustness beats exotic
//! exponential integrators.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::CMatrix;

/// Step-control options.
#[derive(Debug, Clone, Copy)]
pub struct IntegratorOptions {
    /// Relative local error tolerance.
    pub rtol: f64,
    /// Absolute local error tolerance.
    pub atol: f64,
    /// Hard cap on consecutive step rejections.
    pub max_rejections: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self { rtol: 1e-9, atol: 1e-12, max_rejections: 80 }
    }
}

// Dormand-Prince coefficients.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn error_norm(err: &CMatrix, y0: &CMatrix, y1: &CMatrix, opts: &IntegratorOptions) -> f64 {
    let mut acc = 0.0;
    let n = err.len();
    for k in 0..n {
        let scale = opts.atol + opts.rtol * y0[k].norm().max(y1[k].norm());
        let e = err[k].norm() / scale;
        acc += e * e;
    }
    (acc / n as f64).sqrt()
}

/// Integrates y' = rhs(y) from `t_grid[0]`, producing the state at each grid
/// time via a callback. Grid times are hit exactly.
pub fn integrate_grid<F, C>(
    rhs: F,
    y0: &CMatrix,
    t_grid: &[f64],
    opts: &IntegratorOptions,
    mut on_output: C,
) -> Result<()>
where
    F: Fn(&CMatrix) -> CMatrix,
    C: FnMut(usize, f64, &CMatrix),
{
    if t_grid.len() < 2 {
        return Err(Error::InvalidParameter("time grid needs at least two points".into()));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("time grid must be strictly increasing".into()));
    }

    let mut y = y0.clone();
    let mut t = t_grid[0];
    on_output(0, t, &y);

    // Initial step heuristic from the derivative magnitude.
    let f0 = rhs(&y);
    let y_scale = y.norm().max(1e-30);
    let f_scale = f0.norm().max(1e-30);
    let mut h = (0.01 * y_scale / f_scale).min(t_grid[1] - t_grid[0]);
    let mut k1 = f0;

    for (out_idx, &t_target) in t_grid.iter().enumerate().skip(1) {
        while t < t_target {
            let mut step = h.min(t_target - t);
            let mut rejections = 0;
            loop {
                // Stage evaluations.
                let mut k = Vec::with_capacity(7);
                k.push(k1.clone());
                for s in 0..6 {
                    let mut ys = y.clone();
                    for (j, kj) in k.iter().enumerate() {
                        let a = A[s][j];
                        if a != 0.0 {
                            ys += kj * C64::new(step * a, 0.0);
                        }
                    }
                    k.push(rhs(&ys));
                }
                let mut y5 = y.clone();
                let mut err = CMatrix::zeros(y.nrows(), y.ncols());
                for (j, kj) in k.iter().enumerate() {
                    if B5[j] != 0.0 {
                        y5 += kj * C64::new(step * B5[j], 0.0);
                    }
                    let de = B5[j] - B4[j];
                    if de != 0.0 {
                        err += kj * C64::new(step * de, 0.0);
                    }
                }
                let norm = error_norm(&err, &y, &y5, opts);
                if norm <= 1.0 {
                    t += step;
                    y = y5;
                    // FSAL: stage 7 of an accepted step equals stage 1 of
                    // the next.
                    k1 = k.pop().expect("seven stages");
                    let factor = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
                    h = step * factor;
                    break;
                }
                rejections += 1;
                if rejections > opts.max_rejections {
                    return Err(Error::IntegrationFailure { achieved: norm });
                }
                step *= (0.9 * norm.powf(-0.2)).clamp(0.1, 0.5);
            }
        }
        on_output(out_idx, t, &y);
    }
    Ok(())
}

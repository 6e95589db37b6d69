//! Adaptive Dormand-Prince 5(4) integration of `y' = f(t, y)` for vector `y`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Difference between the fifth- and fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const MAX_STEPS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    pub t: f64,
    pub y: Vec<f64>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

/// Integrates from `(0, y0)` to `t_end` with mixed error control
/// `|err_i| <= tol * (1 + max(|y_i|, |y_new_i|))` per step.
///
/// `f(t, y, dy)` writes the derivative into `dy`.
pub fn dormand_prince<F>(f: F, y0: &[f64], t_end: f64, tol: f64) -> Result<OdeSolution>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::InvalidArgument(alloc::format!(
            "end time must be non-negative, got {t_end}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(alloc::format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = 0.0;
    let mut k: [Vec<f64>; 7] = core::array::from_fn(|_| vec![0.0; n]);
    let mut stage = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    let mut accepted_steps = 0;
    let mut rejected_steps = 0;
    if t_end == 0.0 {
        return Ok(OdeSolution {
            t,
            y,
            accepted_steps,
            rejected_steps,
        });
    }
    f(t, &y, &mut k[0]);
    let mut h = (tol.powf(0.2) * 0.1).min(t_end);

    while t < t_end {
        if accepted_steps + rejected_steps >= MAX_STEPS {
            return Err(Error::StepSizeUnderflow { t });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        for s in 1..7 {
            for i in 0..n {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += A[s][j] * kj[i];
                }
                stage[i] = y[i] + h * acc;
            }
            let (_, rest) = k.split_at_mut(s);
            f(t + C[s] * h, &stage, &mut rest[0]);
        }
        // Stage 7 was evaluated at the fifth-order solution.
        y_new.copy_from_slice(&stage);
        let mut err: f64 = 0.0;
        for i in 0..n {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            let scale = tol * (1.0 + y[i].abs().max(y_new[i].abs()));
            err = err.max((h * e).abs() / scale);
        }
        if !err.is_finite() {
            err = f64::INFINITY;
        }
        if err <= 1.0 {
            t = if last { t_end } else { t + h };
            y.copy_from_slice(&y_new);
            let (first, rest) = k.split_at_mut(6);
            first[0].copy_from_slice(&rest[0]);
            accepted_steps += 1;
        } else {
            rejected_steps += 1;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h <= 1e-14 * t.max(1.0) {
            return Err(Error::StepSizeUnderflow { t });
        }
    }
    Ok(OdeSolution {
        t,
        y,
        accepted_steps,
        rejected_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let sol = dormand_prince(|_, y, dy| dy[0] = -y[0], &[1.0], 3.0, 1e-12).unwrap();
        assert!((sol.y[0] - (-3.0f64).exp()).abs() < 1e-11);
        assert_eq!(sol.t, 3.0);
    }

    #[test]
    fn harmonic_oscillator() {
        let sol = dormand_prince(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            &[1.0, 0.0],
            10.0,
            1e-11,
        )
        .unwrap();
        assert!((sol.y[0] - 10f64.cos()).abs() < 1e-9);
        assert!((sol.y[1] + 10f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn time_dependent_rhs() {
        let sol = dormand_prince(|t, _, dy| dy[0] = t * t, &[0.0], 2.0, 1e-12).unwrap();
        assert!((sol.y[0] - 8.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_horizon_returns_initial_state() {
        let sol = dormand_prince(|_, y, dy| dy[0] = y[0], &[2.5], 0.0, 1e-9).unwrap();
        assert_eq!(sol.y, vec![2.5]);
        assert_eq!(sol.accepted_steps, 0);
    }

    #[test]
    fn blow_up_underflows() {
        let result = dormand_prince(|_, y, dy| dy[0] = y[0] * y[0], &[1.0], 2.0, 1e-10);
        assert!(matches!(result, Err(Error::StepSizeUnderflow { .. })));
    }
}

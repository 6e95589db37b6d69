//! Heat kernel of the `(q+1)`-regular tree in the radial coordinate.
//!
//! Three evaluation paths are offered and checked against each other: the
//! alternating Bessel series `K(t,r) = sum_j d_q(j) B_q(r + 2j, t)` with
//! `d_q(0) = 1`, `d_q(j) = 1 - q`; the Chung-Yau integrals; and, as a
//! solution of the same difference-differential operator on the line, the
//! horocyclic function `f(t, n) = q^{-n/2} e^{-(q+1)t} I_n(2 sqrt(q) t)`.

use alloc::format;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::bessel::{
    bessel_upper_bound, building_block, building_block_time_derivative, signed_block,
    signed_block_time_derivative,
};
use crate::error::{Error, Result};
use crate::quadrature::gauss_kronrod;

/// Relative accuracy requested from each Bessel evaluation.
const BESSEL_TOL: f64 = 1e-16;
/// Safety cap on series terms; never reached for finite inputs.
const MAX_SERIES_TERMS: usize = 100_000;
const MAX_PANELS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeHeatValue {
    pub q: u32,
    pub t: f64,
    pub r: u32,
    pub value: f64,
    /// Last summation index `J` of the series.
    pub truncation_index: usize,
    /// Certified bound on the neglected terms `j > J`.
    pub tail_bound: f64,
}

fn check_inputs(q: u32, t: f64, tol: f64) -> Result<()> {
    if q == 0 {
        return Err(Error::DegreeTooSmall { degree: 1 });
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "time must be finite and non-negative, got {t}"
        )));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(())
}

/// Upper bound for `sum_{j >= 0} B_q(order + 2j, t)` from the uniform Bessel
/// bound `e^{-s} I_x(s) <= s^{-1/2} (1 + x/s)^{-x/2}`, which decreases in `x`.
pub fn block_tail_bound(q: u32, order: u32, t: f64) -> f64 {
    if t == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    let qf = q as f64;
    let root = qf.sqrt();
    let s = 2.0 * root * t;
    let gap = root - 1.0;
    if q == 1 {
        // No geometric decay in q; sum the superexponential bound directly.
        let mut total = 0.0;
        let mut x = order;
        loop {
            let term = bessel_upper_bound(x, s);
            total += term;
            if term <= 1e-18 * total || x > order + 2 * MAX_SERIES_TERMS as u32 {
                let ratio = (1.0 + x as f64 / s).powf(-1.0);
                return total + term * ratio / (1.0 - ratio);
            }
            x += 2;
        }
    }
    let head = bessel_upper_bound(order, s) * (-gap * gap * t - 0.5 * order as f64 * qf.ln()).exp();
    head / (1.0 - 1.0 / qf)
}

/// `K(t, r)` on the `(q+1)`-regular tree by the alternating Bessel series.
///
/// The sum stops at the first `J` whose certified tail
/// `(q-1) * block_tail_bound(q, r + 2J + 2, t)` is below `tol`. For `q = 1`
/// the correction vanishes and the result is `e^{-2t} I_r(2t)` exactly.
pub fn tree_heat_kernel(q: u32, t: f64, r: u32, tol: f64) -> Result<TreeHeatValue> {
    check_inputs(q, t, tol)?;
    let head = building_block(q, r, t, BESSEL_TOL);
    let mut value = TreeHeatValue {
        q,
        t,
        r,
        value: head,
        truncation_index: 0,
        tail_bound: 0.0,
    };
    if q == 1 || t == 0.0 {
        return Ok(value);
    }
    let weight = (q - 1) as f64;
    let mut correction = 0.0;
    let mut j = 0usize;
    loop {
        let tail = weight * block_tail_bound(q, r + 2 * j as u32 + 2, t);
        if tail < tol || j >= MAX_SERIES_TERMS {
            value.value = head - weight * correction;
            value.truncation_index = j;
            value.tail_bound = tail;
            return Ok(value);
        }
        j += 1;
        correction += building_block(q, r + 2 * j as u32, t, BESSEL_TOL);
    }
}

/// `d/dt K(t, r)`, summed term by term with the analytic derivative of each
/// building block, `B'_x = -(q+1) B_x + B_{x-1} + q B_{x+1}`.
pub fn tree_heat_kernel_time_derivative(q: u32, t: f64, r: u32, tol: f64) -> Result<f64> {
    check_inputs(q, t, tol)?;
    let head = building_block_time_derivative(q, r, t, BESSEL_TOL);
    if q == 1 {
        return Ok(head);
    }
    let qf = q as f64;
    let weight = qf - 1.0;
    let mut correction = 0.0;
    let mut j = 0usize;
    loop {
        let x = r + 2 * j as u32 + 2;
        let tail = weight
            * ((qf + 1.0) * block_tail_bound(q, x, t)
                + block_tail_bound(q, x - 1, t)
                + qf * block_tail_bound(q, x + 1, t));
        if tail < tol || j >= MAX_SERIES_TERMS {
            return Ok(head - weight * correction);
        }
        j += 1;
        correction += building_block_time_derivative(q, r + 2 * j as u32, t, BESSEL_TOL);
    }
}

/// `K(t, r)` from the Chung-Yau integral representation, `q >= 2`.
///
/// The exponentials `e^{-(q+1)t}` and `e^{2t sqrt(q) cos u}` are merged into
/// one factor bounded by 1.
pub fn tree_heat_kernel_cy(q: u32, t: f64, r: u32, tol: f64) -> Result<f64> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!(
            "Chung-Yau integrals need q >= 2, got q = {q}"
        )));
    }
    check_inputs(q, t, tol)?;
    if t == 0.0 {
        return Ok(if r == 0 { 1.0 } else { 0.0 });
    }
    let qf = q as f64;
    let root = qf.sqrt();
    let denominator = |u: f64| {
        let c = u.cos();
        (qf + 1.0) * (qf + 1.0) - 4.0 * qf * c * c
    };
    let decay = move |u: f64| (t * (2.0 * root * u.cos() - qf - 1.0)).exp();
    let (prefactor, quad) = if r == 0 {
        let f = |u: f64| {
            let s = u.sin();
            decay(u) * s * s / denominator(u)
        };
        let prefactor = 2.0 * qf * (qf + 1.0) / PI;
        (
            prefactor,
            gauss_kronrod(f, 0.0, PI, tol / prefactor, 0.0, MAX_PANELS)?,
        )
    } else {
        let rf = r as f64;
        let f = |u: f64| {
            let numerator = qf * ((rf + 1.0) * u).sin() - ((rf - 1.0) * u).sin();
            decay(u) * u.sin() * numerator / denominator(u)
        };
        let prefactor = 2.0 * qf.powf(1.0 - 0.5 * rf) / PI;
        (
            prefactor,
            gauss_kronrod(f, 0.0, PI, tol / prefactor, 0.0, MAX_PANELS)?,
        )
    };
    Ok(prefactor * quad.value)
}

/// Residual of the tree heat equation at radius `r`:
/// `(q+1) f(0) - (q+1) f(1) + f'(0)` for `r = 0` and
/// `(q+1) f(r) - q f(r+1) - f(r-1) + f'(r)` otherwise, with `f = K(t, .)`.
pub fn tree_heat_residual(q: u32, t: f64, r: u32, tol: f64) -> Result<f64> {
    let qf = q as f64;
    let k = |radius: u32| tree_heat_kernel(q, t, radius, tol).map(|v| v.value);
    let derivative = tree_heat_kernel_time_derivative(q, t, r, tol)?;
    Ok(if r == 0 {
        (qf + 1.0) * (k(0)? - k(1)?) + derivative
    } else {
        (qf + 1.0) * k(r)? - qf * k(r + 1)? - k(r - 1)? + derivative
    })
}

/// Total heat `K(t,0) + sum_{r=1}^{R} (q+1) q^{r-1} K(t,r)` over a ball whose
/// radius `R` is chosen so the neglected mass is certifiably below `tol`.
///
/// Returns the mass and `R`. Uses `0 <= K(t,r) <= B_q(r,t)`.
pub fn tree_ball_mass(q: u32, t: f64, tol: f64) -> Result<(f64, u32)> {
    check_inputs(q, t, tol)?;
    let qf = q as f64;
    let sphere = |r: u32| {
        if r == 0 {
            1.0
        } else {
            (qf + 1.0) * qf.powi(r as i32 - 1)
        }
    };
    let s = 2.0 * qf.sqrt() * t;
    let gap = qf.sqrt() - 1.0;
    // Bound on sphere(r) * B_q(r, t), and the ratio bound between successive terms.
    let envelope = |r: u32| {
        if t == 0.0 {
            return if r == 0 { 1.0 } else { 0.0 };
        }
        sphere(r) * qf.powf(-0.5 * r as f64) * (-gap * gap * t).exp() * bessel_upper_bound(r, s)
    };
    let ratio = |r: u32| {
        if t == 0.0 {
            0.0
        } else {
            qf.sqrt() * (1.0 + r as f64 / s).powf(-0.5)
        }
    };
    let mut mass = 0.0;
    let mut r = 0u32;
    loop {
        let share = 0.5 * tol / (sphere(r) * 2f64.powi(r as i32 + 1));
        mass += sphere(r) * tree_heat_kernel(q, t, r, share)?.value;
        let rho = ratio(r + 1);
        if rho < 1.0 && envelope(r + 1) / (1.0 - rho) < 0.5 * tol {
            return Ok((mass, r));
        }
        r += 1;
    }
}

/// Horocyclic solution `f(t, n) = q^{-n/2} e^{-(q+1)t} I_{|n|}(2 sqrt(q) t)`, `n` in Z.
pub fn horocycle_solution(q: u32, t: f64, n: i64) -> Result<f64> {
    check_inputs(q, t, 1.0)?;
    Ok(signed_block(q, n, t, BESSEL_TOL))
}

/// `d/dt f(t, n)` for the horocyclic solution, from the Bessel recurrence.
pub fn horocycle_time_derivative(q: u32, t: f64, n: i64) -> Result<f64> {
    check_inputs(q, t, 1.0)?;
    Ok(signed_block_time_derivative(q, n, t, BESSEL_TOL))
}

/// `(q+1) f(t,n) - q f(t,n+1) - f(t,n-1) + d/dt f(t,n)`.
pub fn horocycle_residual(q: u32, t: f64, n: i64) -> Result<f64> {
    let qf = q as f64;
    let f = |m: i64| horocycle_solution(q, t, m);
    Ok((qf + 1.0) * f(n)? - qf * f(n + 1)? - f(n - 1)? + horocycle_time_derivative(q, t, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::bessel_i_scaled;
    use proptest::prelude::*;

    const TIMES: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];

    fn series(q: u32, t: f64, r: u32) -> f64 {
        tree_heat_kernel(q, t, r, 1e-13).unwrap().value
    }

    #[test]
    fn initial_condition() {
        for q in 1..5 {
            for r in 0..6 {
                let v = tree_heat_kernel(q, 0.0, r, 1e-12).unwrap();
                assert_eq!(v.value, if r == 0 { 1.0 } else { 0.0 });
            }
        }
        assert_eq!(tree_heat_kernel_cy(2, 0.0, 0, 1e-10).unwrap(), 1.0);
    }

    #[test]
    fn q_one_is_the_bare_block() {
        for &t in &TIMES {
            for r in 0..8 {
                let v = tree_heat_kernel(1, t, r, 1e-12).unwrap();
                assert_eq!(v.value, bessel_i_scaled(r, 2.0 * t, 1e-16));
                assert_eq!(v.truncation_index, 0);
            }
        }
    }

    #[test]
    fn series_matches_chung_yau_on_grid() {
        let mut worst: f64 = 0.0;
        for q in 2..=4 {
            for &t in &TIMES {
                for r in 0..=10 {
                    let a = series(q, t, r);
                    let b = tree_heat_kernel_cy(q, t, r, 1e-13).unwrap();
                    worst = worst.max((a - b).abs());
                }
            }
        }
        assert!(worst <= 1e-8, "worst discrepancy {worst:e}");
    }

    #[test]
    fn tail_bound_is_reported_and_honest() {
        let v = tree_heat_kernel(3, 2.0, 1, 1e-10).unwrap();
        assert!(v.tail_bound < 1e-10);
        assert!(v.truncation_index > 0);
        let reference = series(3, 2.0, 1);
        assert!((v.value - reference).abs() <= 1e-10);
    }

    #[test]
    fn heat_equation_residuals() {
        for q in 1..=4 {
            for &t in &TIMES {
                for r in 0..=10 {
                    let res = tree_heat_residual(q, t, r, 1e-13).unwrap();
                    assert!(res.abs() <= 1e-8, "q={q} t={t} r={r} residual {res:e}");
                }
            }
        }
    }

    #[test]
    fn analytic_derivative_matches_finite_difference() {
        let h = 1e-5;
        for q in 2..=3 {
            for r in 0..4 {
                let t = 0.9;
                let fd = (series(q, t + h, r) - series(q, t - h, r)) / (2.0 * h);
                let exact = tree_heat_kernel_time_derivative(q, t, r, 1e-13).unwrap();
                assert!((fd - exact).abs() < 1e-8, "q={q} r={r}: {fd} vs {exact}");
            }
        }
    }

    #[test]
    fn mass_is_conserved() {
        for q in 1..=4 {
            for &t in &[0.1, 0.5, 1.0, 2.0] {
                let (mass, radius) = tree_ball_mass(q, t, 1e-9).unwrap();
                assert!(
                    (mass - 1.0).abs() < 1e-6,
                    "q={q} t={t} mass {mass} radius {radius}"
                );
            }
        }
    }

    #[test]
    fn positive_and_bounded() {
        for q in 2..=5 {
            for &t in &TIMES {
                for r in 0..=20 {
                    let v = series(q, t, r);
                    assert!(v > 0.0 && v <= 1.0, "q={q} t={t} r={r} value {v:e}");
                }
            }
        }
    }

    #[test]
    fn chung_yau_rejects_q_one() {
        assert!(tree_heat_kernel_cy(1, 1.0, 0, 1e-10).is_err());
    }

    #[test]
    fn horocycle_values_and_symmetry() {
        assert_eq!(horocycle_solution(2, 0.0, 0).unwrap(), 1.0);
        assert_eq!(horocycle_solution(2, 0.0, -2).unwrap(), 0.0);
        for n in 0..6i64 {
            let scale = 2f64.powf(0.5 * n as f64);
            let plus = horocycle_solution(2, 1.0, n).unwrap() * scale;
            let minus = horocycle_solution(2, 1.0, -n).unwrap() / scale;
            assert!((plus - minus).abs() <= 1e-15 * plus.abs().max(1e-300));
        }
    }

    #[test]
    fn horocycle_residual_vanishes() {
        for q in 1..=4 {
            for &t in &TIMES {
                for n in -6..=6 {
                    let res = horocycle_residual(q, t, n).unwrap();
                    assert!(res.abs() < 1e-8, "q={q} t={t} n={n}: {res:e}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn series_and_integral_agree(q in 2u32..6, t in 0.01f64..6.0, r in 0u32..12) {
            let a = series(q, t, r);
            let b = tree_heat_kernel_cy(q, t, r, 1e-12).unwrap();
            prop_assert!((a - b).abs() <= 1e-9);
        }

        #[test]
        fn truncation_certificate_below_tol(q in 2u32..6, t in 0.0f64..20.0, r in 0u32..30, exp in 6i32..14) {
            let tol = 10f64.powi(-exp);
            let v = tree_heat_kernel(q, t, r, tol).unwrap();
            prop_assert!(v.tail_bound < tol);
        }
    }
}

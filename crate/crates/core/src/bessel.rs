//! Modified Bessel functions `I_n` of non-negative integer order, and the
//! heat-kernel building block `q^{-r/2} e^{-(q+1)t} I_r(2 sqrt(q) t)`.
//!
//! Two independent evaluation paths are provided: the power series (summed
//! around its largest term, so it never overflows in scaled form) and the
//! trapezoid rule applied to `(1/pi) int_0^pi e^{t cos th} cos(n th) dth`.

use alloc::format;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quadrature::trapezoid;

/// Arguments above this are summed in the log domain.
pub const LOG_DOMAIN_THRESHOLD: f64 = 500.0;

const MAX_TERMS: usize = 1_000_000;
const MAX_QUADRATURE_NODES: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselMethod {
    Series,
    Quadrature,
}

/// One evaluation of `I_order(argument)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    pub order: u32,
    pub argument: f64,
    pub value: f64,
    pub method: BesselMethod,
    /// Series terms summed, or quadrature intervals used.
    pub terms_or_nodes: usize,
}

fn check_argument(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "Bessel argument must be finite and non-negative, got {t}"
        )));
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(())
}

/// Series sum as `exp(log_scale) * sum`.
struct SeriesSum {
    log_scale: f64,
    sum: f64,
    terms: usize,
}

/// Ratio `term(k+1) / term(k)` of the summand `(t/2)^{2k+n} / (k! (k+n)!)`.
#[inline]
fn forward_ratio(half_sq: f64, order: f64, k: usize) -> f64 {
    let k = k as f64;
    half_sq / ((k + 1.0) * (k + order + 1.0))
}

/// Sums terms forward from `start` with value `first`; stops once past the
/// mode with a geometric tail below `tol` relative to the running total.
fn sum_forward(
    half_sq: f64,
    order: f64,
    start: usize,
    first: f64,
    base: f64,
    tol: f64,
) -> (f64, usize) {
    let mut term = first;
    let mut sum = 0.0;
    let mut k = start;
    let mut count = 0;
    loop {
        sum += term;
        count += 1;
        let ratio = forward_ratio(half_sq, order, k);
        let next = term * ratio;
        if ratio < 1.0 {
            let tail = next / (1.0 - ratio);
            if tail <= tol * (base + sum + tol) || next == 0.0 {
                break;
            }
        }
        term = next;
        k += 1;
        if count >= MAX_TERMS {
            break;
        }
    }
    (sum, count)
}

fn series(order: u32, t: f64, tol: f64) -> SeriesSum {
    let n = order as f64;
    let half = 0.5 * t;
    let half_sq = half * half;
    if t <= LOG_DOMAIN_THRESHOLD {
        // (t/2)^n / n! as a running product: stays below e^{t/2}.
        let mut first = 1.0;
        for i in 1..=order {
            first *= half / i as f64;
        }
        let (sum, terms) = sum_forward(half_sq, n, 0, first, 0.0, tol);
        return SeriesSum {
            log_scale: 0.0,
            sum,
            terms,
        };
    }
    // Largest term sits at the positive root of (k+1)(k+n+1) = t^2/4.
    let mode = ((-(n + 2.0) + (n * n + t * t).sqrt()) * 0.5)
        .max(0.0)
        .floor() as usize;
    let kf = mode as f64;
    let log_scale =
        (2.0 * kf + n) * half.ln() - libm::lgamma(kf + 1.0) - libm::lgamma(kf + n + 1.0);
    let (upper, up_terms) = sum_forward(half_sq, n, mode, 1.0, 0.0, tol);
    let mut lower = 0.0;
    let mut term = 1.0;
    let mut terms = up_terms;
    let mut k = mode;
    while k > 0 {
        // term(k-1) / term(k) = k (k+n) / (t/2)^2, decreasing as k falls.
        let ratio = (k as f64) * (k as f64 + n) / half_sq;
        term *= ratio;
        lower += term;
        terms += 1;
        k -= 1;
        if ratio < 1.0 && term * ratio / (1.0 - ratio) <= tol * (upper + lower) {
            break;
        }
    }
    SeriesSum {
        log_scale,
        sum: upper + lower,
        terms,
    }
}

/// Exponentially scaled Bessel function `e^{-t} I_order(t)`; never overflows.
pub fn bessel_i_scaled(order: u32, t: f64, tol: f64) -> f64 {
    if t == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    let s = series(order, t, tol);
    s.sum * (s.log_scale - t).exp()
}

/// `I_order(t)` by its power series.
///
/// Terms are summed until past the largest term with a geometric tail bound
/// below `tol * (sum + tol)`. Arguments above [`LOG_DOMAIN_THRESHOLD`] are
/// summed around the largest term in the log domain; a result that does not
/// fit in `f64` is reported as [`Error::Overflow`].
pub fn bessel_i(order: u32, t: f64, tol: f64) -> Result<BesselEval> {
    check_tol(tol)?;
    check_argument(t)?;
    let (value, terms) = if t == 0.0 {
        (if order == 0 { 1.0 } else { 0.0 }, 1)
    } else {
        let s = series(order, t, tol);
        (s.sum * s.log_scale.exp(), s.terms)
    };
    if !value.is_finite() {
        return Err(Error::Overflow { order, argument: t });
    }
    Ok(BesselEval {
        order,
        argument: t,
        value,
        method: BesselMethod::Series,
        terms_or_nodes: terms,
    })
}

/// `e^{-t} I_order(t)` from the integral representation with `nodes` trapezoid intervals.
pub fn bessel_i_quadrature_scaled(order: u32, t: f64, nodes: usize) -> f64 {
    let n = order as f64;
    trapezoid(
        |th| (t * (th.cos() - 1.0)).exp() * (n * th).cos(),
        0.0,
        PI,
        nodes,
    ) / PI
}

/// `I_order(t) = (1/pi) int_0^pi e^{t cos th} cos(order th) dth` by the
/// trapezoid rule with `nodes >= 16` intervals.
pub fn bessel_i_quadrature(order: u32, t: f64, nodes: usize) -> Result<BesselEval> {
    check_argument(t)?;
    if nodes < 16 {
        return Err(Error::InvalidArgument(format!(
            "need at least 16 quadrature nodes, got {nodes}"
        )));
    }
    let value = bessel_i_quadrature_scaled(order, t, nodes) * t.exp();
    if !value.is_finite() {
        return Err(Error::Overflow { order, argument: t });
    }
    Ok(BesselEval {
        order,
        argument: t,
        value,
        method: BesselMethod::Quadrature,
        terms_or_nodes: nodes,
    })
}

/// Trapezoid evaluation with the node count doubled from 16 until two
/// successive results agree to `tol * max(1, |value|)`, or to the rounding
/// floor `16 eps e^t` of the integrand when that is larger.
pub fn bessel_i_quadrature_converged(order: u32, t: f64, tol: f64) -> Result<BesselEval> {
    check_tol(tol)?;
    check_argument(t)?;
    let mut nodes = 16;
    let mut previous = bessel_i_quadrature_scaled(order, t, nodes);
    loop {
        nodes *= 2;
        let current = bessel_i_quadrature_scaled(order, t, nodes);
        let scale = t.exp();
        let diff = (current - previous).abs() * scale;
        let floor = 16.0 * f64::EPSILON * scale;
        if diff <= (tol * (current * scale).abs().max(1.0)).max(floor) {
            let value = current * scale;
            if !value.is_finite() {
                return Err(Error::Overflow { order, argument: t });
            }
            return Ok(BesselEval {
                order,
                argument: t,
                value,
                method: BesselMethod::Quadrature,
                terms_or_nodes: nodes,
            });
        }
        if nodes >= MAX_QUADRATURE_NODES {
            return Err(Error::QuadratureNonConvergence {
                achieved: diff,
                requested: tol,
            });
        }
        previous = current;
    }
}

/// `d/dt I_order(t) = (I_{order-1}(t) + I_{order+1}(t)) / 2`, with `I_{-1} = I_1`.
pub fn bessel_i_derivative(order: u32, t: f64, tol: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "derivative needs t > 0, got {t}"
        )));
    }
    let below = bessel_i(order.abs_diff(1), t, tol)?.value;
    let above = bessel_i(order + 1, t, tol)?.value;
    Ok(0.5 * (below + above))
}

/// Uniform bound `t^{-1/2} (1 + order/t)^{-order/2} >= e^{-t} I_order(t)`, for `t > 0`.
pub fn bessel_upper_bound(order: u32, t: f64) -> f64 {
    let n = order as f64;
    (-0.5 * t.ln() - 0.5 * n * (n / t).ln_1p()).exp()
}

/// The building block `q^{-r/2} e^{-(q+1)t} I_r(2 sqrt(q) t)`.
///
/// Evaluated as `q^{-r/2} e^{-(sqrt(q)-1)^2 t} [e^{-s} I_r(s)]` with
/// `s = 2 sqrt(q) t`, which cannot overflow.
pub fn building_block(q: u32, r: u32, t: f64, tol: f64) -> f64 {
    if t == 0.0 {
        return if r == 0 { 1.0 } else { 0.0 };
    }
    let (prefactor, s) = block_scale(q, r as f64, t);
    prefactor * bessel_i_scaled(r, s, tol)
}

/// `log(q^{-r/2} e^{-(sqrt q - 1)^2 t})` as a factor, and `s = 2 sqrt(q) t`.
fn block_scale(q: u32, r: f64, t: f64) -> (f64, f64) {
    let qf = q as f64;
    let root = qf.sqrt();
    let gap = root - 1.0;
    ((-0.5 * r * qf.ln() - gap * gap * t).exp(), 2.0 * root * t)
}

/// Time derivative of [`building_block`], from the Bessel recurrence:
/// `-(q+1) B_r + sqrt(q) q^{-r/2} e^{-(q+1)t} (I_{|r-1|} + I_{r+1})(2 sqrt(q) t)`.
pub fn building_block_time_derivative(q: u32, r: u32, t: f64, tol: f64) -> f64 {
    let qf = q as f64;
    if t == 0.0 {
        // I_r'(0) contributes only through I_{|r-1|}(0) + I_{r+1}(0).
        let base = if r == 0 { 1.0 } else { 0.0 };
        let neighbours = if r == 1 { 1.0 } else { 0.0 };
        return -(qf + 1.0) * base + qf.sqrt() * qf.powf(-0.5 * r as f64) * neighbours;
    }
    let (prefactor, s) = block_scale(q, r as f64, t);
    let centre = bessel_i_scaled(r, s, tol);
    let sides = bessel_i_scaled(r.abs_diff(1), s, tol) + bessel_i_scaled(r + 1, s, tol);
    prefactor * (-(qf + 1.0) * centre + qf.sqrt() * sides)
}

/// `q^{-n/2} e^{-(q+1)t} I_n(2 sqrt(q) t)` for any integer `n`, using `I_{-n} = I_n`.
pub(crate) fn signed_block(q: u32, n: i64, t: f64, tol: f64) -> f64 {
    let order = n.unsigned_abs() as u32;
    if t == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let (prefactor, s) = block_scale(q, n as f64, t);
    prefactor * bessel_i_scaled(order, s, tol)
}

/// Time derivative of [`signed_block`].
pub(crate) fn signed_block_time_derivative(q: u32, n: i64, t: f64, tol: f64) -> f64 {
    let qf = q as f64;
    let order = n.unsigned_abs() as u32;
    if t == 0.0 {
        let base = if n == 0 { 1.0 } else { 0.0 };
        let neighbours = if order == 1 { 1.0 } else { 0.0 };
        return -(qf + 1.0) * base + qf.sqrt() * qf.powf(-0.5 * n as f64) * neighbours;
    }
    let (prefactor, s) = block_scale(q, n as f64, t);
    let centre = bessel_i_scaled(order, s, tol);
    let sides = bessel_i_scaled(order.abs_diff(1), s, tol) + bessel_i_scaled(order + 1, s, tol);
    prefactor * (-(qf + 1.0) * centre + qf.sqrt() * sides)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const GRID_T: [f64; 5] = [0.01, 0.1, 1.0, 5.0, 20.0];

    fn series_value(n: u32, t: f64) -> f64 {
        bessel_i(n, t, 1e-15).unwrap().value
    }

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_i(0, 0.0, 1e-12).unwrap().value, 1.0);
        assert_eq!(bessel_i(3, 0.0, 1e-12).unwrap().value, 0.0);
        assert_eq!(bessel_i_quadrature(0, 0.0, 64).unwrap().value, 1.0);
    }

    #[test]
    fn series_matches_quadrature_at_two() {
        let s = bessel_i(0, 2.0, 1e-12).unwrap().value;
        let q = bessel_i_quadrature_converged(0, 2.0, 1e-14).unwrap().value;
        assert!((s - q).abs() < 1e-10);
        // Reference value I_0(2) = 2.2795853023360673.
        assert!((s - 2.279_585_302_336_067_3).abs() < 1e-13);
    }

    #[test]
    fn quadrature_matches_series_spot_checks() {
        let q = bessel_i_quadrature(1, 1.0, 64).unwrap().value;
        assert!((q - bessel_i(1, 1.0, 1e-12).unwrap().value).abs() < 1e-10);
        let q = bessel_i_quadrature(5, 10.0, 128).unwrap().value;
        let s = bessel_i(5, 10.0, 1e-12).unwrap().value;
        assert!(((q - s) / s).abs() < 1e-9);
    }

    #[test]
    fn series_agrees_with_quadrature_on_grid() {
        for n in 0..=20 {
            for &t in &GRID_T {
                let s = series_value(n, t);
                let q = bessel_i_quadrature_converged(n, t, 1e-13).unwrap().value;
                assert!(
                    (s - q).abs() <= 1e-9 * q.abs().max(1.0),
                    "I_{n}({t}): series {s} vs quadrature {q}"
                );
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-5;
        for &(n, t) in &[(0u32, 2.0f64), (3, 5.0)] {
            let fd = (series_value(n, t + h) - series_value(n, t - h)) / (2.0 * h);
            let d = bessel_i_derivative(n, t, 1e-15).unwrap();
            assert!((fd - d).abs() < 1e-8, "n={n} t={t}: {fd} vs {d}");
        }
        let small = bessel_i_derivative(1, 1e-4, 1e-15).unwrap();
        assert!((small - 0.5).abs() < 1e-6);
        assert!(bessel_i_derivative(1, 0.0, 1e-12).is_err());
    }

    #[test]
    fn recurrence_residual_on_grid() {
        for n in 0..=20u32 {
            for &t in &GRID_T {
                let h = 1e-5 * t.max(1.0);
                let fd = (series_value(n, t + h) - series_value(n, t - h)) / (2.0 * h);
                let lhs = series_value(n + 1, t) + series_value(n.abs_diff(1), t);
                let residual = (lhs - 2.0 * fd).abs();
                // Finite-difference truncation scales with I'''(t) h^2; normalise by size.
                assert!(
                    residual <= 1e-6 * series_value(n, t).max(1.0),
                    "n={n} t={t} residual {residual}"
                );
            }
        }
    }

    #[test]
    fn uniform_bound_on_grid() {
        assert_eq!(bessel_upper_bound(0, 1.0), 1.0);
        assert!((-1.0f64).exp() * series_value(0, 1.0) <= 1.0);
        assert!(((-1.0f64).exp() * series_value(0, 1.0) - 0.4658).abs() < 1e-4);
        let b = bessel_upper_bound(10, 1.0);
        assert!((b - 11f64.powi(-5)).abs() < 1e-18);
        assert!((-1.0f64).exp() * series_value(10, 1.0) <= b);
        assert!((-2.0f64).exp() * series_value(4, 2.0) <= 2f64.sqrt().recip() * 3f64.powi(-2));
        for n in 0..=20 {
            for &t in &GRID_T {
                assert!(bessel_i_scaled(n, t, 1e-15) <= bessel_upper_bound(n, t));
            }
        }
    }

    #[test]
    fn log_domain_matches_direct_near_threshold() {
        // Scaled values straddling the switch must agree.
        let below = bessel_i_scaled(7, LOG_DOMAIN_THRESHOLD, 1e-15);
        let above = bessel_i_scaled(7, LOG_DOMAIN_THRESHOLD * (1.0 + 1e-12), 1e-15);
        assert!(((below - above) / below).abs() < 1e-9);
        // e^{-t} I_0(t) ~ 1/sqrt(2 pi t) (1 + 1/(8t)) for large t.
        let t = 2000.0;
        let asym = (2.0 * PI * t).sqrt().recip() * (1.0 + 1.0 / (8.0 * t) + 9.0 / (128.0 * t * t));
        assert!(((bessel_i_scaled(0, t, 1e-15) - asym) / asym).abs() < 1e-9);
    }

    #[test]
    fn overflow_is_signalled() {
        assert!(matches!(
            bessel_i(0, 800.0, 1e-12),
            Err(Error::Overflow { .. })
        ));
        assert!(matches!(
            bessel_i_quadrature(0, 800.0, 64),
            Err(Error::Overflow { .. })
        ));
        assert!(bessel_i_scaled(0, 800.0, 1e-12).is_finite());
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(bessel_i(0, -1.0, 1e-12).is_err());
        assert!(bessel_i(0, f64::NAN, 1e-12).is_err());
        assert!(bessel_i(0, 1.0, 0.0).is_err());
        assert!(bessel_i_quadrature(0, 1.0, 8).is_err());
    }

    #[test]
    fn building_block_special_cases() {
        assert_eq!(building_block(3, 0, 0.0, 1e-12), 1.0);
        assert_eq!(building_block(3, 2, 0.0, 1e-12), 0.0);
        for r in 0..6 {
            let t = 0.8;
            let direct = (-2.0 * t).exp() * series_value(r, 2.0 * t);
            assert!((building_block(1, r, t, 1e-15) - direct).abs() < 1e-15);
        }
        let arg = 2.0 * 2f64.sqrt();
        let expected = 0.5 * (-3.0f64).exp() * series_value(2, arg);
        let via_quad =
            0.5 * (-3.0f64).exp() * bessel_i_quadrature_converged(2, arg, 1e-15).unwrap().value;
        let b = building_block(2, 2, 1.0, 1e-15);
        assert!((b - expected).abs() < 1e-15);
        assert!((b - via_quad).abs() < 1e-13);
    }

    #[test]
    fn building_block_derivative_matches_finite_difference() {
        let h = 1e-5;
        for &(q, r, t) in &[(2u32, 0u32, 1.0f64), (3, 4, 0.5), (1, 1, 2.0)] {
            let fd = (building_block(q, r, t + h, 1e-15) - building_block(q, r, t - h, 1e-15))
                / (2.0 * h);
            let d = building_block_time_derivative(q, r, t, 1e-15);
            assert!((fd - d).abs() < 1e-9, "q={q} r={r}: {fd} vs {d}");
        }
    }

    proptest! {
        #[test]
        fn monotone_decay_in_order(n in 0u32..40, t in 1e-3f64..50.0) {
            prop_assert!(series_value(n, t) >= series_value(n + 1, t));
        }

        #[test]
        fn bound_dominates_scaled(n in 0u32..60, t in 1e-3f64..200.0) {
            prop_assert!(bessel_i_scaled(n, t, 1e-15) <= bessel_upper_bound(n, t) * (1.0 + 1e-12));
        }

        #[test]
        fn scaled_is_nonnegative(n in 0u32..100, t in 0.0f64..2000.0) {
            prop_assert!(bessel_i_scaled(n, t, 1e-12) >= 0.0);
        }
    }
}

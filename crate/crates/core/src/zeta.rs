//! Ihara-type zeta functions of `(q+1)`-regular graphs and the G-transform.
//!
//! `log zeta(u) = sum_m N_m u^m / m` is produced from closed-geodesic counts,
//! from the Euler product over prime geodesics, from the determinant formula
//! via Laplacian eigenvalues, and from a spectral measure. The G-transform
//! `G f(u) = (u^{-2} - q) int_0^inf e^{-(qu + 1/u)t} e^{(q+1)t} f(t) dt`
//! sends the building block of order `k` to `u^{k-1}` and links heat kernels
//! to logarithmic derivatives of zeta functions.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, ToPrimitive, Zero};

use crate::bessel::bessel_i_scaled;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::heat_graph::{b_coefficients, SpectralData};
use crate::quadrature::{exponential_tail_cutoff, gauss_kronrod};
use crate::series::PowerSeries;

const MAX_PANELS: usize = 4096;
/// Largest allowed distance of `m [u^m]` from an integer on the determinant side.
pub const INTEGER_GUARD: f64 = 1e-6;

fn rational(n: &BigInt, d: usize) -> BigRational {
    BigRational::new(n.clone(), BigInt::from(d))
}

/// `sum_{m=1}^{order} N_m u^m / m` with exact coefficients; `counts[m] = N_m`
/// (the per-vertex counts `N_m^0` give the per-vertex zeta).
pub fn zeta_log_series_from_counts(
    counts: &[BigInt],
    order: usize,
) -> Result<PowerSeries<BigRational>> {
    if counts.len() <= order {
        return Err(Error::InvalidArgument(format!(
            "need counts up to length {order}, have {}",
            counts.len().saturating_sub(1)
        )));
    }
    let mut coefficients = vec![BigRational::zero(); order + 1];
    for (m, c) in coefficients.iter_mut().enumerate().skip(1) {
        *c = rational(&counts[m], m);
    }
    Ok(PowerSeries::new(coefficients))
}

/// `prod_k (1 - u^k)^{-pi_k}` expanded to `order`, each factor through
/// `(1 - x)^{-p} = sum_j binom(p + j - 1, j) x^j`.
pub fn euler_product_series(primes: &[BigInt], order: usize) -> Result<PowerSeries<BigRational>> {
    if primes.len() <= order {
        return Err(Error::InvalidArgument(format!(
            "need prime counts up to length {order}, have {}",
            primes.len().saturating_sub(1)
        )));
    }
    let mut product = PowerSeries::one(order);
    for (k, p) in primes.iter().enumerate().skip(1).take(order) {
        if p.is_zero() {
            continue;
        }
        let mut factor = vec![BigRational::zero(); order + 1];
        let mut binomial = BigInt::one();
        for j in 0..=order / k {
            if j > 0 {
                binomial = binomial * (p + BigInt::from(j - 1)) / BigInt::from(j);
            }
            factor[k * j] = BigRational::from_integer(binomial.clone());
        }
        product = &product * &PowerSeries::new(factor);
    }
    Ok(product)
}

/// `p_m = alpha^m + beta^m` for the roots of `z^2 - a z + q`, `m = 0..=order`.
fn power_sums(a: f64, q: f64, order: usize) -> Vec<f64> {
    let mut p = vec![0.0; order + 1];
    p[0] = 2.0;
    if order >= 1 {
        p[1] = a;
    }
    for m in 2..=order {
        p[m] = a * p[m - 1] - q * p[m - 2];
    }
    p
}

/// The determinant side `(1-u^2)^{n(q-1)/2} prod_j (1 - (q+1-lambda_j) u + q u^2)`
/// of `1/zeta`, expanded through the eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct IharaDeterminant {
    pub q: u32,
    pub vertices: usize,
    /// `m [u^m] log zeta` in floating point (index 0 unused).
    pub raw: Vec<f64>,
    /// `raw` rounded to integers: the recovered `N_m`.
    pub counts: Vec<BigInt>,
    /// Largest `|raw_m - counts_m|`.
    pub max_rounding_deviation: f64,
}

impl IharaDeterminant {
    /// Exact log-series `sum N_m u^m / m` from the rounded counts.
    pub fn log_series(&self) -> PowerSeries<BigRational> {
        zeta_log_series_from_counts(&self.counts, self.counts.len() - 1)
            .expect("counts cover the order")
    }
}

/// Expands `-log` of the determinant side: `m [u^m] log zeta =
/// sum_j p_m(q+1-lambda_j) + [m even] n (q-1)`. Fails if some coefficient is
/// farther than [`INTEGER_GUARD`] from an integer.
pub fn ihara_determinant_series(g: &Graph, order: usize) -> Result<IharaDeterminant> {
    let spectrum = SpectralData::new(g)?;
    ihara_determinant_from_spectrum(&spectrum, order)
}

pub fn ihara_determinant_from_spectrum(
    spectrum: &SpectralData,
    order: usize,
) -> Result<IharaDeterminant> {
    let q = spectrum.q;
    let qf = q as f64;
    let n = spectrum.vertex_count();
    let mut raw = vec![0.0; order + 1];
    for &lambda in &spectrum.eigenvalues {
        for (m, p) in power_sums(qf + 1.0 - lambda, qf, order)
            .into_iter()
            .enumerate()
            .skip(1)
        {
            raw[m] += p;
        }
    }
    for value in raw.iter_mut().skip(2).step_by(2) {
        *value += (n as f64) * (qf - 1.0);
    }
    raw[0] = 0.0;
    let mut counts = vec![BigInt::zero(); order + 1];
    let mut max_rounding_deviation: f64 = 0.0;
    for m in 1..=order {
        let rounded = raw[m].round();
        let deviation = (raw[m] - rounded).abs();
        max_rounding_deviation = max_rounding_deviation.max(deviation);
        if !(deviation <= INTEGER_GUARD) {
            return Err(Error::InconsistentCounts {
                length: m,
                reason: "determinant-side coefficient is not an integer",
            });
        }
        counts[m] = BigInt::from(rounded as i128);
    }
    Ok(IharaDeterminant {
        q,
        vertices: n,
        raw,
        counts,
        max_rounding_deviation,
    })
}

/// A probability measure on the Laplacian spectrum.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralMeasure {
    /// Point masses `weights[j]` at `points[j]`.
    Atomic { points: Vec<f64>, weights: Vec<f64> },
    /// The Kesten-McKay measure of the `(q+1)`-regular tree.
    TreeDensity { q: u32 },
}

/// The spectral measure at `x0`: weights `psi_j(x0)^2` at `lambda_j`.
pub fn atomic_measure(spectrum: &SpectralData, x0: Vertex) -> SpectralMeasure {
    SpectralMeasure::Atomic {
        points: spectrum.eigenvalues.clone(),
        weights: spectrum.weights(x0),
    }
}

pub fn kesten_tree_measure(q: u32) -> Result<SpectralMeasure> {
    if q == 0 {
        return Err(Error::DegreeTooSmall { degree: 1 });
    }
    Ok(SpectralMeasure::TreeDensity { q })
}

/// Density in the angle `theta` after `lambda = q+1 - 2 sqrt(q) cos(theta)`:
/// `2q(q+1) sin^2(theta) / (pi ((q-1)^2 + 4q sin^2(theta)))` on `[0, pi]`.
fn tree_angle_density(q: u32, theta: f64) -> f64 {
    if q == 1 {
        return 1.0 / PI;
    }
    let qf = q as f64;
    let s = theta.sin();
    2.0 * qf * (qf + 1.0) * s * s / (PI * ((qf - 1.0) * (qf - 1.0) + 4.0 * qf * s * s))
}

impl SpectralMeasure {
    /// Density `(q+1) sqrt(4q - a^2) / (2 pi ((q+1)^2 - a^2))`, `a = q+1-lambda`,
    /// on `[q+1-2 sqrt(q), q+1+2 sqrt(q)]`; `None` for atomic measures.
    pub fn density(&self, lambda: f64) -> Option<f64> {
        let SpectralMeasure::TreeDensity { q } = *self else {
            return None;
        };
        let qf = q as f64;
        let a = qf + 1.0 - lambda;
        let radicand = 4.0 * qf - a * a;
        if radicand <= 0.0 {
            return Some(0.0);
        }
        Some((qf + 1.0) * radicand.sqrt() / (2.0 * PI * ((qf + 1.0) * (qf + 1.0) - a * a)))
    }

    /// `int h(lambda) dmu(lambda)`.
    pub fn integrate<H: Fn(f64) -> f64>(&self, h: H, tol: f64) -> Result<f64> {
        match self {
            SpectralMeasure::Atomic { points, weights } => {
                Ok(points.iter().zip(weights).map(|(&l, &w)| w * h(l)).sum())
            }
            &SpectralMeasure::TreeDensity { q } => {
                let qf = q as f64;
                let root = qf.sqrt();
                let f = |theta: f64| {
                    h(qf + 1.0 - 2.0 * root * theta.cos()) * tree_angle_density(q, theta)
                };
                Ok(gauss_kronrod(f, 0.0, PI, tol, 0.0, MAX_PANELS)?.value)
            }
        }
    }

    pub fn total_mass(&self, tol: f64) -> Result<f64> {
        self.integrate(|_| 1.0, tol)
    }

    /// `int (q+1-lambda)^k dmu`.
    pub fn adjacency_moment(&self, q: u32, k: u32, tol: f64) -> Result<f64> {
        let shift = (q + 1) as f64;
        self.integrate(|lambda| (shift - lambda).powi(k as i32), tol)
    }
}

/// Closed walks of length `k` at a vertex of the `(q+1)`-regular tree for
/// `k = 0..=k_max`, by recursion on the distance from the start.
pub fn tree_closed_walk_counts(q: u32, k_max: usize) -> Vec<BigInt> {
    let mut at = vec![BigInt::zero(); k_max + 2];
    at[0] = BigInt::one();
    let mut out = Vec::with_capacity(k_max + 1);
    let up_root = BigInt::from(q + 1);
    let up = BigInt::from(q);
    for _ in 0..=k_max {
        out.push(at[0].clone());
        let mut next = vec![BigInt::zero(); k_max + 2];
        for d in 0..=k_max {
            if at[d].is_zero() {
                continue;
            }
            next[d + 1] += &at[d] * if d == 0 { &up_root } else { &up };
            if d > 0 {
                next[d - 1] += &at[d];
            }
        }
        at = next;
    }
    out
}

fn check_u(q: u32, u: f64) -> Result<()> {
    let limit = 1.0 / q as f64;
    if !(u > 0.0 && u < limit) {
        return Err(Error::OutOfDomain { u, limit });
    }
    Ok(())
}

/// `1 / zeta(u) = (1-u^2)^{(q-1)/2} exp(int log(1 - (q+1-lambda) u + q u^2) dmu)`
/// for `0 < u < 1/q`.
pub fn zeta_spectral(measure: &SpectralMeasure, q: u32, u: f64, tol: f64) -> Result<f64> {
    check_u(q, u)?;
    let qf = q as f64;
    let quadratic = |lambda: f64| 1.0 - (qf + 1.0 - lambda) * u + qf * u * u;
    let (low, high) = match measure {
        SpectralMeasure::Atomic { points, .. } => points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &l| {
                (lo.min(l), hi.max(l))
            }),
        &SpectralMeasure::TreeDensity { q: tree_q } => {
            let root = (tree_q as f64).sqrt();
            let centre = (tree_q + 1) as f64;
            (centre - 2.0 * root, centre + 2.0 * root)
        }
    };
    // The quadratic is linear in lambda, so its minimum over the support is at an end.
    let smallest = quadratic(low).min(quadratic(high));
    if !(smallest > 0.0) {
        return Err(Error::NonPositiveLogArgument { u, value: smallest });
    }
    let integral = measure.integrate(|lambda| quadratic(lambda).ln(), tol)?;
    Ok((0.5 * (qf - 1.0) * (1.0 - u * u).ln() + integral).exp())
}

/// `d/du [log u + ((q-1)/2) log(1-u^2) + log zeta(u)]` from the per-vertex
/// counts: `1/u - (q-1) u / (1-u^2) + sum_{m>=1} N_m^0 u^{m-1}`, truncated at
/// the available counts.
pub fn zeta_log_derivative(closed_at_base: &[BigInt], q: u32, u: f64) -> f64 {
    let qf = q as f64;
    let mut sum = 0.0;
    for count in closed_at_base.iter().skip(1).rev() {
        sum = sum * u + count.to_f64().unwrap_or(f64::NAN);
    }
    1.0 / u - (qf - 1.0) * u / (1.0 - u * u) + sum
}

/// Growth bound `|f(t)| <= scale * e^{(rate - (q+1)) t}`, i.e. the growth of
/// `e^{(q+1)t} f(t)` is at most `scale * e^{rate t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub rate: f64,
    pub scale: f64,
}

impl Envelope {
    /// Heat kernels of finite graphs: `0 <= K <= 1`.
    pub fn finite_heat_kernel(q: u32) -> Self {
        Self {
            rate: (q + 1) as f64,
            scale: 1.0,
        }
    }

    /// `B_q(k, t) <= q^{-k/2} e^{-(q+1)t} e^{2 sqrt(q) t}`.
    pub fn building_block(q: u32, k: u32) -> Self {
        Self {
            rate: 2.0 * (q as f64).sqrt(),
            scale: (q as f64).powf(-0.5 * k as f64),
        }
    }

    /// The tree kernel is bounded by the order-0 building block.
    pub fn tree_kernel(q: u32) -> Self {
        Self::building_block(q, 0)
    }

    /// Supremum of `u` with `q u + 1/u > rate` on `(0, 1/sqrt(q)]`.
    pub fn u_limit(&self, q: u32) -> f64 {
        let qf = q as f64;
        let discriminant = self.rate * self.rate - 4.0 * qf;
        if discriminant < 0.0 {
            return 1.0 / qf.sqrt();
        }
        (self.rate - discriminant.sqrt()) / (2.0 * qf)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GTransformResult {
    pub u: f64,
    pub value: f64,
    /// Quadrature error estimate plus the truncation bound, both scaled by `u^{-2} - q`.
    pub quadrature_error: f64,
    /// Upper limit of the computed `t`-integral.
    pub cutoff: f64,
}

/// `(u^{-2} - q) int_0^inf e^{-(qu + 1/u - q - 1) t} f(t) dt`.
///
/// The integral is truncated where the envelope certifies the remainder is
/// below `tol / 2` and the finite part is integrated adaptively to `tol / 2`.
pub fn g_transform_numeric<F: Fn(f64) -> f64>(
    f: F,
    q: u32,
    u: f64,
    envelope: Envelope,
    tol: f64,
) -> Result<GTransformResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let qf = q as f64;
    let limit = envelope.u_limit(q);
    if !(u > 0.0 && u < limit) {
        return Err(Error::OutOfDomain { u, limit });
    }
    let prefactor = 1.0 / (u * u) - qf;
    let decay = qf * u + 1.0 / u - (qf + 1.0);
    let margin = qf * u + 1.0 / u - envelope.rate;
    let share = 0.5 * tol / prefactor;
    let cutoff = exponential_tail_cutoff(envelope.scale, margin, share);
    let tail = envelope.scale * (-margin * cutoff).exp() / margin;
    let integrand = |t: f64| (-decay * t).exp() * f(t);
    let quad = gauss_kronrod(integrand, 0.0, cutoff, share, 0.0, MAX_PANELS)?;
    Ok(GTransformResult {
        u,
        value: prefactor * quad.value,
        quadrature_error: prefactor * (quad.error + tail),
        cutoff,
    })
}

/// `(int_0^inf e^{-st} e^{-t} I_n(t) dt, (s + 1 - sqrt(s^2 + 2s))^n / sqrt(s^2 + 2s))`.
pub fn laplace_identity_check(n: u32, s: f64, tol: f64) -> Result<(f64, f64)> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidArgument(format!("need s > 0, got {s}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    // e^{-t} I_n(t) <= 1, so the tail beyond T is at most e^{-sT} / s.
    let cutoff = exponential_tail_cutoff(1.0, s, 0.5 * tol);
    let quad = gauss_kronrod(
        |t| (-s * t).exp() * bessel_i_scaled(n, t, 1e-16),
        0.0,
        cutoff,
        0.5 * tol,
        0.0,
        MAX_PANELS,
    )?;
    let root = (s * s + 2.0 * s).sqrt();
    Ok((quad.value, (s + 1.0 - root).powi(n as i32) / root))
}

/// The off-diagonal zeta `log zeta(u, x) = sum_{m>=1} b_m(x) u^m / m` with its
/// spectral closed form `-sum_j psi_j(x) psi_j(x0) log(1 - (q+1-lambda_j) u + q u^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoVariableZeta {
    pub q: u32,
    pub base: Vertex,
    pub target: Vertex,
    pub series: PowerSeries<BigRational>,
    /// `(lambda_j, psi_j(x) psi_j(x0))`.
    pub spectral_terms: Vec<(f64, f64)>,
}

impl TwoVariableZeta {
    pub fn series_value(&self, u: f64) -> f64 {
        self.series.evaluate(u)
    }

    pub fn spectral_value(&self, u: f64) -> Result<f64> {
        check_u(self.q, u)?;
        let qf = self.q as f64;
        let mut total = 0.0;
        for &(lambda, weight) in &self.spectral_terms {
            let quadratic = 1.0 - (qf + 1.0 - lambda) * u + qf * u * u;
            if !(quadratic > 0.0) {
                return Err(Error::NonPositiveLogArgument {
                    u,
                    value: quadratic,
                });
            }
            total -= weight * quadratic.ln();
        }
        Ok(total)
    }
}

/// Builds [`TwoVariableZeta`] for `x != x0`; the diagonal carries an extra
/// `1/u` in its logarithmic derivative and is not a power series.
pub fn two_variable_zeta(
    g: &Graph,
    x0: Vertex,
    x: Vertex,
    order: usize,
) -> Result<TwoVariableZeta> {
    g.check_vertex(x0)?;
    g.check_vertex(x)?;
    if x == x0 {
        return Err(Error::InvalidArgument(
            "the two-variable zeta is defined off the diagonal; use the per-vertex zeta at x = x0"
                .into(),
        ));
    }
    let spectrum = SpectralData::new(g)?;
    let b = b_coefficients(g, x0, order)?;
    let mut coefficients = vec![BigRational::zero(); order + 1];
    for (m, c) in coefficients.iter_mut().enumerate().skip(1) {
        *c = rational(b.at(m, x), m);
    }
    let spectral_terms = spectrum
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(j, &lambda)| (lambda, spectrum.psi(j, x) * spectrum.psi(j, x0)))
        .collect();
    Ok(TwoVariableZeta {
        q: spectrum.q,
        base: x0,
        target: x,
        series: PowerSeries::new(coefficients),
        spectral_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::building_block;
    use crate::graph::{
        closed_geodesics_at_vertex, closed_geodesics_total, complete, complete_bipartite, cycle,
        hypercube, petersen, prime_geodesic_counts, TransitivityPolicy,
    };
    use crate::heat_tree::tree_heat_kernel;

    fn finite_graphs() -> Vec<(&'static str, Graph)> {
        vec![
            ("k4", complete(4)),
            ("c5", cycle(5)),
            ("c8", cycle(8)),
            ("cube", hypercube(3)),
            ("k33", complete_bipartite(3, 3)),
            ("petersen", petersen()),
        ]
    }

    fn ints(values: &[i64]) -> Vec<BigInt> {
        values.iter().map(|&v| BigInt::from(v)).collect()
    }

    #[test]
    fn c5_log_series_and_euler_product() {
        let g = cycle(5);
        let counts = closed_geodesics_total(&g, 12).unwrap();
        let log = zeta_log_series_from_counts(&counts, 12).unwrap();
        // -2 log(1 - u^5) = 2u^5 + u^10 + ...
        for m in 1..=12 {
            let want = match m {
                5 => BigRational::from_integer(BigInt::from(2)),
                10 => BigRational::one(),
                _ => BigRational::zero(),
            };
            assert_eq!(*log.coefficient(m), want, "m={m}");
        }
        let primes = prime_geodesic_counts(&counts, 12).unwrap();
        assert_eq!(primes[5], BigInt::from(2));
        let product = euler_product_series(&primes, 12).unwrap();
        assert_eq!(product, log.exp().unwrap());
        // (1-u^5)^{-2} = 1 + 2u^5 + 3u^10 + ...
        assert_eq!(
            *product.coefficient(10),
            BigRational::from_integer(BigInt::from(3))
        );
    }

    #[test]
    fn trivial_series() {
        let zeros = ints(&[0; 7]);
        let log = zeta_log_series_from_counts(&zeros, 6).unwrap();
        assert_eq!(log, PowerSeries::zero(6));
        assert_eq!(
            euler_product_series(&zeros, 6).unwrap(),
            PowerSeries::one(6)
        );
        assert!(zeta_log_series_from_counts(&zeros, 7).is_err());
    }

    #[test]
    fn determinant_recovers_counts() {
        for (name, g) in finite_graphs() {
            let det = ihara_determinant_series(&g, 12).unwrap();
            let counts = closed_geodesics_total(&g, 12).unwrap();
            assert_eq!(&det.counts[1..], &counts[1..], "{name}");
            assert!(det.max_rounding_deviation <= INTEGER_GUARD);
            assert_eq!(
                det.log_series(),
                zeta_log_series_from_counts(&counts, 12).unwrap()
            );
        }
        let k4 = ihara_determinant_series(&complete(4), 5).unwrap();
        assert_eq!(k4.counts[3], BigInt::from(24));
        assert_eq!(k4.counts[4], BigInt::from(24));
        assert_eq!(k4.counts[5], BigInt::from(0));
        let petersen = ihara_determinant_series(&petersen(), 5).unwrap();
        assert_eq!(petersen.counts[5], BigInt::from(120));
    }

    #[test]
    fn four_way_agreement() {
        for (name, g) in finite_graphs() {
            let q = g.regularity().unwrap().q;
            let counts = closed_geodesics_total(&g, 12).unwrap();
            let log = zeta_log_series_from_counts(&counts, 12).unwrap();
            let euler =
                euler_product_series(&prime_geodesic_counts(&counts, 12).unwrap(), 12).unwrap();
            assert_eq!(euler.log().unwrap(), log, "{name}");
            assert_eq!(ihara_determinant_series(&g, 12).unwrap().log_series(), log);
            let at_base =
                closed_geodesics_at_vertex(&g, 0, 12, TransitivityPolicy::Assume).unwrap();
            let local = zeta_log_series_from_counts(&at_base, 12).unwrap();
            let n = BigRational::from_integer(BigInt::from(g.vertex_count()));
            assert_eq!(local.scale(&n), log, "{name}: N_m = n N_m^0");
            let measure = atomic_measure(&SpectralData::new(&g).unwrap(), 0);
            for u in [0.02, 0.05, 0.1 / q as f64] {
                let inverse = zeta_spectral(&measure, q, u, 1e-12).unwrap();
                let series = local.evaluate(u).exp();
                assert!((1.0 / inverse - series).abs() <= 1e-8, "{name} u={u}");
            }
        }
    }

    #[test]
    fn zeta_spectral_domain() {
        let tree = kesten_tree_measure(2).unwrap();
        assert!(matches!(
            zeta_spectral(&tree, 2, 0.5, 1e-10),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            zeta_spectral(&tree, 2, 0.0, 1e-10),
            Err(Error::OutOfDomain { .. })
        ));
        let near_zero = zeta_spectral(
            &atomic_measure(&SpectralData::new(&complete(4)).unwrap(), 0),
            2,
            1e-9,
            1e-12,
        )
        .unwrap();
        assert!((near_zero - 1.0).abs() < 1e-8);
    }

    #[test]
    fn tree_identity() {
        for q in [2u32, 3] {
            let tree = kesten_tree_measure(q).unwrap();
            for u in [0.05, 0.1, 0.2] {
                let value = zeta_spectral(&tree, q, u, 1e-13).unwrap();
                assert!((value - 1.0).abs() <= 1e-7, "q={q} u={u} value={value}");
            }
        }
    }

    #[test]
    fn kesten_moments_are_tree_walk_counts() {
        for q in 1..=4u32 {
            let tree = kesten_tree_measure(q).unwrap();
            let walks = tree_closed_walk_counts(q, 12);
            assert_eq!(walks[0], BigInt::one());
            assert_eq!(walks[1], BigInt::zero());
            assert_eq!(walks[2], BigInt::from(q + 1));
            for (k, exact) in walks.iter().enumerate() {
                let exact = exact.to_f64().unwrap();
                let scale = (2.0 * (q as f64).sqrt()).powi(k as i32);
                let moment = tree.adjacency_moment(q, k as u32, 1e-14 * scale).unwrap();
                assert_eq!(moment.round(), exact, "q={q} k={k}");
                assert!(
                    (moment - exact).abs() <= 1e-9 * exact.max(1.0),
                    "q={q} k={k}: {moment} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn density_forms_agree() {
        let q = 3u32;
        let tree = kesten_tree_measure(q).unwrap();
        let root = 3f64.sqrt();
        for theta in [0.3, 1.0, 2.2] {
            let lambda = 4.0 - 2.0 * root * f64::cos(theta);
            let jacobian = 2.0 * root * f64::sin(theta);
            let by_lambda = tree.density(lambda).unwrap() * jacobian;
            assert!((by_lambda - tree_angle_density(q, theta)).abs() < 1e-14);
        }
        assert_eq!(tree.density(0.0), Some(0.0));
        assert!((tree.total_mass(1e-13).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tree_walk_counts_small_cases() {
        // q = 1 is the line: central binomial coefficients at even lengths.
        assert_eq!(tree_closed_walk_counts(1, 6), ints(&[1, 0, 2, 0, 6, 0, 20]));
        // q = 2: 1, 0, 3, 0, 15, 0, 87.
        assert_eq!(
            tree_closed_walk_counts(2, 6),
            ints(&[1, 0, 3, 0, 15, 0, 87])
        );
    }

    #[test]
    fn building_block_transform() {
        for q in [2u32, 3] {
            for k in 0..=6u32 {
                for factor in [0.1, 0.25] {
                    let u = factor / (q as f64).sqrt();
                    let result = g_transform_numeric(
                        |t| building_block(q, k, t, 1e-16),
                        q,
                        u,
                        Envelope::building_block(q, k),
                        1e-9,
                    )
                    .unwrap();
                    let want = u.powi(k as i32 - 1);
                    assert!(
                        (result.value - want).abs() <= 1e-6,
                        "q={q} k={k} u={u}: {}",
                        result.value
                    );
                }
            }
        }
    }

    #[test]
    fn tree_diagonal_transform() {
        let q = 2u32;
        let u = 0.2;
        let result = g_transform_numeric(
            |t| tree_heat_kernel(q, t, 0, 1e-14).unwrap().value,
            q,
            u,
            Envelope::tree_kernel(q),
            1e-10,
        )
        .unwrap();
        let want = 1.0 / u - u / (1.0 - u * u);
        assert!(
            (result.value - want).abs() <= 1e-8,
            "{} vs {want}",
            result.value
        );
    }

    #[test]
    fn heat_kernel_transform_is_zeta_log_derivative() {
        for g in [complete(4), petersen(), hypercube(3)] {
            let q = g.regularity().unwrap().q;
            let spectrum = SpectralData::new(&g).unwrap();
            let closed = closed_geodesics_at_vertex(&g, 0, 40, TransitivityPolicy::Assume).unwrap();
            for u in [0.02, 0.05] {
                let result = g_transform_numeric(
                    |t| spectrum.heat_kernel(0, 0, t),
                    q,
                    u,
                    Envelope::finite_heat_kernel(q),
                    1e-10,
                )
                .unwrap();
                let want = zeta_log_derivative(&closed, q, u);
                assert!(
                    (result.value - want).abs() <= 1e-6,
                    "u={u}: {} vs {want}",
                    result.value
                );
            }
        }
    }

    #[test]
    fn g_transform_domain() {
        let result = g_transform_numeric(|_| 1.0, 2, 0.6, Envelope::finite_heat_kernel(2), 1e-8);
        assert!(matches!(result, Err(Error::OutOfDomain { .. })));
        assert!((Envelope::finite_heat_kernel(3).u_limit(3) - 1.0 / 3.0).abs() < 1e-15);
        assert!((Envelope::building_block(4, 0).u_limit(4) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn laplace_identity() {
        let (_, closed) = laplace_identity_check(0, 1.0, 1e-10).unwrap();
        assert!((closed - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let (_, closed) = laplace_identity_check(1, 1.0, 1e-10).unwrap();
        assert!((closed - (2.0 - 3f64.sqrt()) / 3f64.sqrt()).abs() < 1e-15);
        for n in 0..=6 {
            for s in [0.5, 1.0, 2.0] {
                let (numeric, closed) = laplace_identity_check(n, s, 1e-11).unwrap();
                assert!(
                    (numeric - closed).abs() <= 1e-9,
                    "n={n} s={s}: {numeric} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn two_variable_zeta_off_diagonal() {
        let g = complete(4);
        let z = two_variable_zeta(&g, 0, 1, 30).unwrap();
        assert_eq!(*z.series.coefficient(0), BigRational::zero());
        assert_eq!(*z.series.coefficient(1), BigRational::one());
        for u in [0.01, 0.05, 0.1] {
            let spectral = z.spectral_value(u).unwrap();
            assert!((z.series_value(u) - spectral).abs() <= 1e-8, "u={u}");
        }
        assert!(z.spectral_value(1e-12).unwrap().abs() < 1e-11);
        assert!(two_variable_zeta(&g, 2, 2, 10).is_err());
        let p = petersen();
        let far = two_variable_zeta(&p, 0, 7, 30).unwrap();
        assert!((far.series_value(0.05) - far.spectral_value(0.05).unwrap()).abs() <= 1e-8);
    }
}

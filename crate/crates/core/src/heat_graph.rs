//! Heat kernels on finite `(q+1)`-regular graphs.
//!
//! The heat kernel `K(t, x0, x) = (e^{-t Delta})_{x, x0}` is computed from the
//! Bessel series `sum_m b_m(x) B_q(m, t)` over geodesic counts, from the
//! eigen-decomposition of the Laplacian, and by direct time integration.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{ToPrimitive, Zero};

use crate::bessel::{bessel_upper_bound, building_block};
use crate::error::{Error, Result};
use crate::graph::{
    closed_geodesics_at_vertex, geodesic_counts, Graph, GraphKind, TransitivityPolicy, Vertex,
};
use crate::heat_tree::tree_heat_kernel;
use crate::ode::dormand_prince;

/// Largest vertex count accepted by the dense eigen-solve.
pub const SPECTRAL_VERTEX_CAP: usize = 2048;
const BESSEL_TOL: f64 = 1e-16;
const INITIAL_ORDER: usize = 16;
const MAX_ORDER: usize = 1 << 14;

/// The graph Laplacian `Delta = (q+1) I - A` as a dense symmetric matrix.
/// A loop contributes 2 to its diagonal adjacency entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian {
    pub q: u32,
    pub matrix: DMatrix<f64>,
}

impl Laplacian {
    pub fn new(g: &Graph) -> Result<Self> {
        let q = g.regularity()?.q;
        let n = g.vertex_count();
        let mut matrix = DMatrix::zeros(n, n);
        for x in 0..n {
            matrix[(x, x)] = (q + 1) as f64;
        }
        for e in g.edges() {
            matrix[(e.origin, e.terminus)] -= 1.0;
        }
        Ok(Self { q, matrix })
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        let n = self.dimension();
        (0..n)
            .map(|x| (0..n).map(|y| self.matrix[(x, y)] * f[y]).sum())
            .collect()
    }
}

pub fn laplacian(g: &Graph) -> Result<Laplacian> {
    Laplacian::new(g)
}

/// Eigenvalues `lambda_0 <= ... <= lambda_{n-1}` of the Laplacian with an
/// orthonormal eigenbasis; column `j` of `eigenvectors` is `psi_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub q: u32,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SpectralData {
    pub fn new(g: &Graph) -> Result<Self> {
        if !g.is_finite_graph() {
            return Err(Error::InfiniteGraph);
        }
        let n = g.vertex_count();
        if n > SPECTRAL_VERTEX_CAP {
            return Err(Error::TooLargeForSpectral {
                vertices: n,
                cap: SPECTRAL_VERTEX_CAP,
            });
        }
        Self::from_laplacian(&Laplacian::new(g)?)
    }

    pub fn from_laplacian(laplacian: &Laplacian) -> Result<Self> {
        let decomposition = SymmetricEigen::new(laplacian.matrix.clone());
        let n = laplacian.dimension();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            decomposition.eigenvalues[a].total_cmp(&decomposition.eigenvalues[b])
        });
        let eigenvalues: Vec<f64> = order
            .iter()
            .map(|&j| decomposition.eigenvalues[j])
            .collect();
        if eigenvalues.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "eigen-solve produced non-finite values".into(),
            ));
        }
        let eigenvectors = DMatrix::from_fn(n, n, |x, j| decomposition.eigenvectors[(x, order[j])]);
        Ok(Self {
            q: laplacian.q,
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn psi(&self, j: usize, x: Vertex) -> f64 {
        self.eigenvectors[(x, j)]
    }

    /// `sum_j e^{-lambda_j t} psi_j(x) psi_j(x0)`.
    pub fn heat_kernel(&self, x0: Vertex, x: Vertex, t: f64) -> f64 {
        self.spectral_sum(x0, x, |lambda| (-lambda * t).exp())
    }

    /// `sum_j h(lambda_j) psi_j(x) psi_j(x0)`.
    pub fn spectral_sum<H: Fn(f64) -> f64>(&self, x0: Vertex, x: Vertex, h: H) -> f64 {
        self.eigenvalues
            .iter()
            .enumerate()
            .map(|(j, &lambda)| h(lambda) * self.psi(j, x) * self.psi(j, x0))
            .sum()
    }

    /// `sum_j (q+1-lambda_j)^k psi_j(x) psi_j(x0)`, which should equal the
    /// number of paths of length `k` from `x0` to `x`.
    pub fn adjacency_moment(&self, x0: Vertex, x: Vertex, k: u32) -> f64 {
        let shift = (self.q + 1) as f64;
        self.spectral_sum(x0, x, |lambda| (shift - lambda).powi(k as i32))
    }

    /// Spectral weights `w_j = psi_j(x0)^2`; grouped by eigenvalue they are
    /// basis independent.
    pub fn weights(&self, x0: Vertex) -> Vec<f64> {
        (0..self.vertex_count())
            .map(|j| self.psi(j, x0).powi(2))
            .collect()
    }

    /// Largest `|Delta psi_j - lambda_j psi_j|` entry.
    pub fn max_residual(&self, laplacian: &Laplacian) -> f64 {
        let mut worst: f64 = 0.0;
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let psi: Vec<f64> = self.eigenvectors.column(j).iter().copied().collect();
            for (x, value) in laplacian.apply(&psi).into_iter().enumerate() {
                worst = worst.max((value - lambda * psi[x]).abs());
            }
        }
        worst
    }
}

/// The integer table `b_m(x) = c_m(x) - (q-1)(c_{m-2}(x) + c_{m-4}(x) + ...)`,
/// the tail ending at `c_0(x)` for even `m` and `c_1(x)` for odd `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BCoefficients {
    pub q: u32,
    pub base: Vertex,
    rows: Vec<Vec<BigInt>>,
}

impl BCoefficients {
    pub fn max_order(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn at(&self, m: usize, x: Vertex) -> &BigInt {
        &self.rows[m][x]
    }

    pub fn column(&self, x: Vertex) -> Vec<BigInt> {
        self.rows.iter().map(|row| row[x].clone()).collect()
    }
}

pub fn b_coefficients(g: &Graph, x0: Vertex, max_order: usize) -> Result<BCoefficients> {
    let q = g.regularity()?.q;
    let counts = geodesic_counts(g, x0, max_order)?;
    let n = g.vertex_count();
    let q_minus_one = BigInt::from(q) - 1;
    let mut tails = [vec![BigInt::zero(); n], vec![BigInt::zero(); n]];
    let mut rows = Vec::with_capacity(max_order + 1);
    for m in 0..=max_order {
        let tail = &mut tails[m % 2];
        if m >= 2 {
            for (x, acc) in tail.iter_mut().enumerate() {
                *acc += counts.at(m - 2, x);
            }
        }
        rows.push(
            (0..n)
                .map(|x| counts.at(m, x) - &q_minus_one * &tail[x])
                .collect(),
        );
    }
    Ok(BCoefficients { q, base: x0, rows })
}

/// Bound on `sum_{m > order} max(1, q-1)(q+1)(m+1) q^m B_q(m, t)`, which
/// dominates the neglected series terms since `|b_m(x)|` and `N_m^0` are at
/// most `max(1, q-1)(q+1)(m+1) q^m`.
pub fn series_tail_bound(q: u32, t: f64, order: usize) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let qf = q as f64;
    let root = qf.sqrt();
    let s = 2.0 * root * t;
    let gap = root - 1.0;
    let lead = (qf - 1.0).max(1.0) * (qf + 1.0) * (-gap * gap * t).exp();
    let term =
        |m: usize| lead * (m as f64 + 1.0) * root.powi(m as i32) * bessel_upper_bound(m as u32, s);
    // Successive ratios are at most ((m+2)/(m+1)) sqrt(q) (1 + m/s)^{-1/2}, decreasing in m.
    let ratio = |m: usize| (m as f64 + 2.0) / (m as f64 + 1.0) * root / (1.0 + m as f64 / s).sqrt();
    let mut total = 0.0;
    let mut m = order + 1;
    loop {
        let rho = ratio(m);
        let current = term(m);
        if rho < 0.5 || m > order + MAX_ORDER {
            return total + current / (1.0 - rho.min(0.5));
        }
        total += current;
        m += 1;
    }
}

/// Result of summing the Bessel series for every target vertex at once.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatSeries {
    pub t: f64,
    pub values: Vec<f64>,
    /// Number of series terms `M` (orders `0..=M`).
    pub order: usize,
    /// Certified bound on the neglected terms.
    pub tail_bound: f64,
    /// Largest `sum_m |b_m(x) B_q(m, t)|` times machine epsilon: the rounding
    /// error scale caused by cancellation between terms.
    pub rounding_bound: f64,
}

fn sum_series(b: &BCoefficients, blocks: &[f64], order: usize) -> (Vec<f64>, f64) {
    let n = b.rows[0].len();
    let mut values = vec![0.0; n];
    let mut magnitudes = vec![0.0f64; n];
    for (m, &block) in blocks.iter().enumerate().take(order + 1) {
        for x in 0..n {
            let term = b.at(m, x).to_f64().unwrap_or(f64::INFINITY) * block;
            values[x] += term;
            magnitudes[x] += term.abs();
        }
    }
    let worst = magnitudes.into_iter().fold(0.0, f64::max);
    (values, worst * f64::EPSILON)
}

fn check_time(t: f64, tol: f64) -> Result<()> {
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

/// `K(t, x0, x)` for every `x` from the series `sum_m b_m(x) B_q(m, t)`.
///
/// The order starts at 16 and doubles until two successive truncations
/// agree to `tol` at every vertex and [`series_tail_bound`] is below `tol`.
/// Cancellation between terms grows with `t`; see
/// [`HeatSeries::rounding_bound`].
pub fn heat_kernel_series_all(g: &Graph, x0: Vertex, t: f64, tol: f64) -> Result<HeatSeries> {
    check_time(t, tol)?;
    if !g.is_finite_graph() {
        return Err(Error::InfiniteGraph);
    }
    let q = g.regularity()?.q;
    g.check_vertex(x0)?;
    let mut order = INITIAL_ORDER;
    loop {
        let doubled = 2 * order;
        let b = b_coefficients(g, x0, doubled)?;
        let blocks: Vec<f64> = (0..=doubled)
            .map(|m| building_block(q, m as u32, t, BESSEL_TOL))
            .collect();
        let (coarse, _) = sum_series(&b, &blocks, order);
        let (fine, rounding_bound) = sum_series(&b, &blocks, doubled);
        let agree = coarse.iter().zip(&fine).all(|(a, b)| (a - b).abs() <= tol);
        let tail_bound = series_tail_bound(q, t, doubled);
        if (agree && tail_bound <= tol) || doubled >= MAX_ORDER {
            return Ok(HeatSeries {
                t,
                values: fine,
                order: doubled,
                tail_bound,
                rounding_bound,
            });
        }
        order = doubled;
    }
}

/// `K(t, x0, x)` from the Bessel series over geodesic counts.
pub fn heat_kernel_series(g: &Graph, x0: Vertex, x: Vertex, t: f64, tol: f64) -> Result<f64> {
    g.check_vertex(x)?;
    Ok(heat_kernel_series_all(g, x0, t, tol)?.values[x])
}

/// `K(t, x0, x)` from the eigen-decomposition of the Laplacian.
pub fn heat_kernel_spectral(g: &Graph, x0: Vertex, x: Vertex, t: f64) -> Result<f64> {
    check_time(t, 1.0)?;
    g.check_vertex(x0)?;
    g.check_vertex(x)?;
    Ok(SpectralData::new(g)?.heat_kernel(x0, x, t))
}

/// `K(t, x0, .)` by integrating `dK/dt = -Delta K` from the indicator of `x0`.
pub fn heat_kernel_ode(g: &Graph, x0: Vertex, t: f64, tol: f64) -> Result<Vec<f64>> {
    check_time(t, tol)?;
    if !g.is_finite_graph() {
        return Err(Error::InfiniteGraph);
    }
    let q = g.regularity()?.q;
    g.check_vertex(x0)?;
    let n = g.vertex_count();
    let mut initial = vec![0.0; n];
    initial[x0] = 1.0;
    let diagonal = (q + 1) as f64;
    let rhs = |_t: f64, k: &[f64], dk: &mut [f64]| {
        for (x, d) in dk.iter_mut().enumerate() {
            *d = -diagonal * k[x];
        }
        for e in g.edges() {
            dk[e.origin] += k[e.terminus];
        }
    };
    Ok(dormand_prince(rhs, &initial, t, tol)?.y)
}

/// `K(t, x0, x0)` as the tree kernel `K_{q+1}(t, 0)` plus
/// `sum_{m >= 1} N_m^0 B_q(m, t)`, for vertex-transitive graphs.
///
/// On a tree ball there are no closed geodesics and the tree kernel is
/// returned unchanged.
pub fn corollary_diagonal(
    g: &Graph,
    x0: Vertex,
    t: f64,
    tol: f64,
    policy: TransitivityPolicy,
) -> Result<f64> {
    check_time(t, tol)?;
    let q = g.regularity()?.q;
    g.check_vertex(x0)?;
    let tree = tree_heat_kernel(q, t, 0, 0.5 * tol)?.value;
    if let GraphKind::TreeBall { .. } = g.kind() {
        return Ok(tree);
    }
    let mut order = INITIAL_ORDER;
    let mut previous: Option<f64> = None;
    loop {
        let closed = closed_geodesics_at_vertex(g, x0, order, policy)?;
        let mut correction = 0.0;
        for (m, count) in closed.iter().enumerate().skip(1) {
            if !count.is_zero() {
                correction += count.to_f64().unwrap_or(f64::INFINITY)
                    * building_block(q, m as u32, t, BESSEL_TOL);
            }
        }
        let tail = series_tail_bound(q, t, order);
        if let Some(prev) = previous {
            if ((prev - correction).abs() <= 0.5 * tol && tail <= 0.5 * tol) || order >= MAX_ORDER {
                return Ok(tree + correction);
            }
        }
        previous = Some(correction);
        order *= 2;
    }
}

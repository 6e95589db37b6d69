//! Exact path and geodesic counting.
//!
//! All counts are arbitrary-precision integers: walk counts grow like `q^k`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::automorphism::{check_vertex_transitive, Transitivity};
use super::{Graph, GraphKind, Vertex};
use crate::error::{Error, Result};

/// Table `count[k][x]` for lengths `k = 0..=max_length` and every vertex `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCounts {
    rows: Vec<Vec<BigInt>>,
}

impl VertexCounts {
    pub fn max_length(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn at(&self, k: usize, x: Vertex) -> &BigInt {
        &self.rows[k][x]
    }

    pub fn row(&self, k: usize) -> &[BigInt] {
        &self.rows[k]
    }

    /// The sequence `k -> count[k][x]`.
    pub fn column(&self, x: Vertex) -> Vec<BigInt> {
        self.rows.iter().map(|row| row[x].clone()).collect()
    }
}

fn check_request(g: &Graph, x0: Vertex, k_max: usize) -> Result<()> {
    g.check_vertex(x0)?;
    if let GraphKind::TreeBall { radius, .. } = g.kind() {
        if x0 != 0 {
            return Err(Error::InvalidArgument(
                "tree-ball counts are exact only from the root".into(),
            ));
        }
        if k_max > radius {
            return Err(Error::InvalidArgument(alloc::format!(
                "length {k_max} exceeds tree-ball radius {radius}"
            )));
        }
    }
    Ok(())
}

fn indicator(n: usize, x0: Vertex) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[x0] = BigInt::from(1);
    v
}

/// `(A v)(x) = sum over edges y with o(y) = x of v(t(y))`.
fn apply_adjacency(g: &Graph, v: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); g.vertex_count()];
    for e in g.edges() {
        out[e.origin] += &v[e.terminus];
    }
    out
}

/// Number of paths `a_k(x)` of length `k` from `x0` to `x`: `A^k` applied to
/// the indicator of `x0`.
pub fn path_counts(g: &Graph, x0: Vertex, k_max: usize) -> Result<VertexCounts> {
    check_request(g, x0, k_max)?;
    let mut rows = Vec::with_capacity(k_max + 1);
    rows.push(indicator(g.vertex_count(), x0));
    for k in 0..k_max {
        let next = apply_adjacency(g, &rows[k]);
        rows.push(next);
    }
    Ok(VertexCounts { rows })
}

/// Number of geodesics (non-backtracking paths) `c_k(x)` of length `k` from
/// `x0` to `x`, by transfer over directed edges: a walk ending in `e` may
/// continue with any `f` leaving `t(e)` except `bar(e)`.
pub fn geodesic_counts(g: &Graph, x0: Vertex, k_max: usize) -> Result<VertexCounts> {
    check_request(g, x0, k_max)?;
    let n = g.vertex_count();
    let mut rows = Vec::with_capacity(k_max + 1);
    rows.push(indicator(n, x0));
    if k_max == 0 {
        return Ok(VertexCounts { rows });
    }
    // ending[e] = number of geodesics of the current length whose last edge is e.
    let mut ending: Vec<BigInt> = g
        .edges()
        .iter()
        .map(|e| BigInt::from(u8::from(e.origin == x0)))
        .collect();
    let arriving = |ending: &[BigInt]| {
        let mut at = vec![BigInt::zero(); n];
        for (y, e) in g.edges().iter().enumerate() {
            at[e.terminus] += &ending[y];
        }
        at
    };
    rows.push(arriving(&ending));
    for _ in 1..k_max {
        let at = rows.last().expect("non-empty");
        let next: Vec<BigInt> = (0..g.edge_count())
            .map(|f| &at[g.origin(f)] - &ending[g.bar(f)])
            .collect();
        ending = next;
        rows.push(arriving(&ending));
    }
    Ok(VertexCounts { rows })
}

/// Geodesic counts on a `(q+1)`-regular graph from the three-term recursion
/// `c_1 = A c_0`, `c_2 = A c_1 - (q+1) c_0`, `c_{k+1} = A c_k - q c_{k-1}`.
pub fn geodesic_counts_three_term(g: &Graph, x0: Vertex, k_max: usize) -> Result<VertexCounts> {
    let q = BigInt::from(g.regularity()?.q);
    check_request(g, x0, k_max)?;
    let mut rows = Vec::with_capacity(k_max + 1);
    rows.push(indicator(g.vertex_count(), x0));
    for k in 0..k_max {
        let mut next = apply_adjacency(g, &rows[k]);
        if k >= 1 {
            let factor = if k == 1 { &q + 1 } else { q.clone() };
            for (value, previous) in next.iter_mut().zip(&rows[k - 1]) {
                *value -= &factor * previous;
            }
        }
        rows.push(next);
    }
    Ok(VertexCounts { rows })
}

/// Closed-geodesic counts from geodesic-loop counts on a `(q+1)`-regular graph:
/// `N_0 = c_0`, `N_1 = c_1`, `N_2 = c_2`, and for `k >= 3`
/// `N_k = c_k - (q-1)(c_{k-2} + c_{k-4} + ...)` ending at `c_1` or `c_2`.
///
/// Applies both per vertex (transitive graphs) and to graph totals.
pub fn closed_geodesics_from_loops(loops: &[BigInt], q: u32) -> Vec<BigInt> {
    let q_minus_one = BigInt::from(q) - 1;
    // Running sums of loops[k-2] + loops[k-4] + ... over indices >= 1, by parity.
    let mut tails = [BigInt::zero(), BigInt::zero()];
    loops
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if k < 3 {
                return c.clone();
            }
            let tail = &mut tails[k % 2];
            *tail += &loops[k - 2];
            c - &q_minus_one * &*tail
        })
        .collect()
}

/// How [`closed_geodesics_at_vertex`] establishes vertex transitivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitivityPolicy {
    /// Caller vouches for transitivity.
    Assume,
    /// Run the automorphism search on graphs with at most `cap` vertices.
    Verify { cap: usize },
}

fn require_transitive(g: &Graph, policy: TransitivityPolicy) -> Result<()> {
    match policy {
        TransitivityPolicy::Assume => Ok(()),
        TransitivityPolicy::Verify { cap } => match check_vertex_transitive(g, cap) {
            Transitivity::Transitive { .. } => Ok(()),
            Transitivity::NotTransitive { from, to } => {
                Err(Error::NotVertexTransitive { from, to })
            }
            Transitivity::Unknown { vertices, cap } => {
                Err(Error::TransitivityUnknown { vertices, cap })
            }
        },
    }
}

/// `N_k^0`, the number of closed geodesics of length `k` starting at `x0`, for
/// a vertex-transitive `(q+1)`-regular graph.
pub fn closed_geodesics_at_vertex(
    g: &Graph,
    x0: Vertex,
    k_max: usize,
    policy: TransitivityPolicy,
) -> Result<Vec<BigInt>> {
    let q = g.regularity()?.q;
    if g.is_finite_graph() {
        require_transitive(g, policy)?;
    }
    let loops = geodesic_counts(g, x0, k_max)?.column(x0);
    Ok(closed_geodesics_from_loops(&loops, q))
}

/// Geodesic-loop totals `c_k = sum over x of c_k(x, x)`.
pub fn geodesic_loop_totals(g: &Graph, k_max: usize) -> Result<Vec<BigInt>> {
    if !g.is_finite_graph() {
        return Err(Error::InfiniteGraph);
    }
    let mut totals = vec![BigInt::zero(); k_max + 1];
    for x in 0..g.vertex_count() {
        let counts = geodesic_counts(g, x, k_max)?;
        for (k, total) in totals.iter_mut().enumerate() {
            *total += counts.at(k, x);
        }
    }
    Ok(totals)
}

/// `N_k`, the number of closed geodesics of length `k` over all starting
/// points and directions, for a finite `(q+1)`-regular graph.
pub fn closed_geodesics_total(g: &Graph, k_max: usize) -> Result<Vec<BigInt>> {
    if !g.is_finite_graph() {
        return Err(Error::InfiniteGraph);
    }
    let q = g.regularity()?.q;
    Ok(closed_geodesics_from_loops(
        &geodesic_loop_totals(g, k_max)?,
        q,
    ))
}

/// Moebius function.
pub fn mobius(mut n: usize) -> i8 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Prime geodesic counts `pi_m = (1/m) sum_{d | m} mu(m/d) N_d` for
/// `m = 1..=k_max` (index 0 holds 0). Fails when some `pi_m` is not a
/// non-negative integer.
pub fn prime_geodesic_counts(closed: &[BigInt], k_max: usize) -> Result<Vec<BigInt>> {
    if closed.len() <= k_max {
        return Err(Error::InvalidArgument(alloc::format!(
            "need closed-geodesic counts up to length {k_max}, have {}",
            closed.len().saturating_sub(1)
        )));
    }
    let mut primes = vec![BigInt::zero(); k_max + 1];
    for m in 1..=k_max {
        let mut sum = BigInt::zero();
        for d in (1..=m).filter(|d| m % d == 0) {
            match mobius(m / d) {
                1 => sum += &closed[d],
                -1 => sum -= &closed[d],
                _ => {}
            }
        }
        let (quotient, remainder) = sum.div_rem(&BigInt::from(m));
        if !remainder.is_zero() {
            return Err(Error::InconsistentCounts {
                length: m,
                reason: "Moebius sum not divisible by the length",
            });
        }
        if quotient.is_negative() {
            return Err(Error::InconsistentCounts {
                length: m,
                reason: "negative prime geodesic count",
            });
        }
        primes[m] = quotient;
    }
    Ok(primes)
}

/// The counting functions of a graph around one base vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub base: Vertex,
    pub q: u32,
    /// `a_k(x)`.
    pub paths: VertexCounts,
    /// `c_k(x)`.
    pub geodesics: VertexCounts,
    /// `c_k^0 = c_k(x0)`.
    pub loops_at_base: Vec<BigInt>,
    /// `N_k^0`; present when the graph is (or is assumed) vertex transitive.
    pub closed_at_base: Option<Vec<BigInt>>,
    /// `c_k`, finite graphs only.
    pub loops_total: Option<Vec<BigInt>>,
    /// `N_k`, finite graphs only.
    pub closed_total: Option<Vec<BigInt>>,
    /// `pi_k`, finite graphs only.
    pub primes: Option<Vec<BigInt>>,
}

impl CountTable {
    pub fn compute(
        g: &Graph,
        x0: Vertex,
        k_max: usize,
        policy: TransitivityPolicy,
    ) -> Result<Self> {
        let q = g.regularity()?.q;
        let paths = path_counts(g, x0, k_max)?;
        let geodesics = geodesic_counts(g, x0, k_max)?;
        let loops_at_base = geodesics.column(x0);
        let transitive = !g.is_finite_graph() || require_transitive(g, policy).is_ok();
        let closed_at_base = transitive.then(|| closed_geodesics_from_loops(&loops_at_base, q));
        let (loops_total, closed_total, primes) = if g.is_finite_graph() {
            let loops = geodesic_loop_totals(g, k_max)?;
            let closed = closed_geodesics_from_loops(&loops, q);
            let primes = prime_geodesic_counts(&closed, k_max)?;
            (Some(loops), Some(closed), Some(primes))
        } else {
            (None, None, None)
        };
        Ok(Self {
            base: x0,
            q,
            paths,
            geodesics,
            loops_at_base,
            closed_at_base,
            loops_total,
            closed_total,
            primes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::{complete, cycle, petersen, tree_ball, Graph};
    use super::*;
    use alloc::vec::Vec;

    fn ints(values: &[i64]) -> Vec<BigInt> {
        values.iter().map(|&v| BigInt::from(v)).collect()
    }

    #[test]
    fn k4_small_counts() {
        let g = complete(4);
        let a = path_counts(&g, 0, 2).unwrap();
        assert_eq!(a.at(2, 0), &BigInt::from(3));
        assert_eq!(a.row(0), &ints(&[1, 0, 0, 0])[..]);
        let c = geodesic_counts(&g, 0, 3).unwrap();
        assert_eq!(c.row(1), &ints(&[0, 1, 1, 1])[..]);
        assert_eq!(c.row(2), &ints(&[0, 2, 2, 2])[..]);
        assert_eq!(c.at(3, 0), &BigInt::from(6));
    }

    #[test]
    fn c5_geodesic_loops() {
        let g = cycle(5);
        assert_eq!(path_counts(&g, 0, 2).unwrap().at(2, 0), &BigInt::from(2));
        let c = geodesic_counts(&g, 0, 10).unwrap().column(0);
        assert_eq!(c, ints(&[1, 0, 0, 0, 0, 2, 0, 0, 0, 0, 2]));
    }

    #[test]
    fn transfer_and_three_term_agree() {
        for g in [
            complete(4),
            cycle(7),
            petersen(),
            Graph::from_edges(1, &[(0, 0), (0, 0)]).unwrap(),
        ] {
            for x0 in 0..g.vertex_count() {
                assert_eq!(
                    geodesic_counts(&g, x0, 14).unwrap(),
                    geodesic_counts_three_term(&g, x0, 14).unwrap()
                );
            }
        }
    }

    #[test]
    fn closed_geodesics_k4_and_petersen() {
        let n0 =
            closed_geodesics_at_vertex(&complete(4), 0, 4, TransitivityPolicy::Verify { cap: 64 })
                .unwrap();
        assert_eq!(n0[3], BigInt::from(6));
        assert_eq!(n0[4], BigInt::from(6));
        let n0 = closed_geodesics_at_vertex(&petersen(), 0, 5, TransitivityPolicy::Assume).unwrap();
        assert_eq!(n0, ints(&[1, 0, 0, 0, 0, 12]));
    }

    #[test]
    fn totals_and_primes() {
        let n = closed_geodesics_total(&complete(4), 8).unwrap();
        assert_eq!(n[3], BigInt::from(24));
        let pi = prime_geodesic_counts(&n, 8).unwrap();
        assert_eq!(pi[1], n[1]);
        assert_eq!(pi[3], BigInt::from(8));

        let n = closed_geodesics_total(&cycle(5), 10).unwrap();
        assert_eq!(&n[1..], &ints(&[0, 0, 0, 0, 10, 0, 0, 0, 0, 10])[..]);
        let pi = prime_geodesic_counts(&n, 10).unwrap();
        assert_eq!(pi[5], BigInt::from(2));
        assert_eq!(pi[10], BigInt::from(0));
    }

    #[test]
    fn inconsistent_counts_rejected() {
        let bad = ints(&[0, 0, 3]);
        assert!(matches!(
            prime_geodesic_counts(&bad, 2),
            Err(Error::InconsistentCounts { length: 2, .. })
        ));
        let negative = ints(&[0, 2, 0]);
        assert!(matches!(
            prime_geodesic_counts(&negative, 2),
            Err(Error::InconsistentCounts { length: 2, .. })
        ));
        assert!(prime_geodesic_counts(&ints(&[0, 1]), 3).is_err());
    }

    #[test]
    fn mobius_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &mu) in expected.iter().enumerate() {
            assert_eq!(mobius(i + 1), mu, "mu({})", i + 1);
        }
    }

    #[test]
    fn tree_has_unit_geodesic_counts_on_spheres() {
        let g = tree_ball(3, 5);
        let c = geodesic_counts(&g, 0, 5).unwrap();
        let dist = g.distances_from(0);
        for k in 0..=5 {
            for x in 0..g.vertex_count() {
                let expected = u8::from(dist[x] == Some(k));
                assert_eq!(c.at(k, x), &BigInt::from(expected));
            }
            let sphere: BigInt = c.row(k).iter().sum();
            let expected = if k == 0 {
                1
            } else {
                4 * 3i64.pow(k as u32 - 1)
            };
            assert_eq!(sphere, BigInt::from(expected));
        }
        let n0 =
            closed_geodesics_at_vertex(&g, 0, 5, TransitivityPolicy::Verify { cap: 64 }).unwrap();
        assert!(n0[1..].iter().all(Zero::is_zero));
        assert!(path_counts(&g, 0, 6).is_err());
        assert_eq!(closed_geodesics_total(&g, 3), Err(Error::InfiniteGraph));
    }

    #[test]
    fn verify_policy_rejects_non_transitive() {
        // Two copies of K4 minus an edge, joined into a cubic graph.
        let g = Graph::from_edges(
            8,
            &[
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
                (2, 3),
                (4, 6),
                (4, 7),
                (5, 6),
                (5, 7),
                (6, 7),
                (0, 4),
                (1, 5),
            ],
        )
        .unwrap();
        assert!(matches!(
            closed_geodesics_at_vertex(&g, 0, 4, TransitivityPolicy::Verify { cap: 64 }),
            Err(Error::NotVertexTransitive { .. })
        ));
        let table = CountTable::compute(&g, 0, 6, TransitivityPolicy::Verify { cap: 64 }).unwrap();
        assert!(table.closed_at_base.is_none());
        assert!(table.primes.is_some());
    }
}

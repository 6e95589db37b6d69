//! Exhaustive depth-first enumeration, used as the oracle for the counting
//! recursions. Exponential in the length; intended for short lengths only.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::{EdgeId, Graph, Vertex};
use crate::error::{Error, Result};

pub const DEFAULT_ENUMERATION_CAP: usize = 12;

/// Visits every walk of length `k` from `x0` (as its edge sequence), optionally
/// forbidding backtracking `y_{i+1} = bar(y_i)`.
fn walk<F: FnMut(&[EdgeId], Vertex)>(
    g: &Graph,
    x0: Vertex,
    k: usize,
    geodesic: bool,
    visit: &mut F,
) {
    fn extend<F: FnMut(&[EdgeId], Vertex)>(
        g: &Graph,
        at: Vertex,
        k: usize,
        geodesic: bool,
        path: &mut Vec<EdgeId>,
        visit: &mut F,
    ) {
        if path.len() == k {
            visit(path, at);
            return;
        }
        for &y in g.outgoing(at) {
            if geodesic && path.last().is_some_and(|&last| g.bar(last) == y) {
                continue;
            }
            path.push(y);
            extend(g, g.terminus(y), k, geodesic, path, visit);
            path.pop();
        }
    }
    let mut path = Vec::with_capacity(k);
    extend(g, x0, k, geodesic, &mut path, visit);
}

/// All closed geodesics of length `k` at `x0`: closed edge sequences with no
/// backtracking and no tail (`y_0 != bar(y_{k-1})`), in lexicographic order of
/// edge ids. The empty path is the single closed geodesic of length 0.
pub fn enumerate_closed_geodesics(
    g: &Graph,
    x0: Vertex,
    k: usize,
    cap: usize,
) -> Result<Vec<Vec<EdgeId>>> {
    g.check_vertex(x0)?;
    if k > cap {
        return Err(Error::EnumerationCap { length: k, cap });
    }
    let mut found = Vec::new();
    walk(g, x0, k, true, &mut |path, end| {
        let tailless = match (path.first(), path.last()) {
            (Some(&first), Some(&last)) => first != g.bar(last),
            _ => true,
        };
        if end == x0 && tailless {
            found.push(path.to_vec());
        }
    });
    Ok(found)
}

fn endpoint_counts(g: &Graph, x0: Vertex, k: usize, geodesic: bool) -> Result<Vec<BigInt>> {
    g.check_vertex(x0)?;
    let mut counts = vec![0u64; g.vertex_count()];
    walk(g, x0, k, geodesic, &mut |_, end| counts[end] += 1);
    Ok(counts.into_iter().map(BigInt::from).collect())
}

/// Number of paths of length exactly `k` from `x0` to each vertex, by enumeration.
pub fn brute_force_path_counts(g: &Graph, x0: Vertex, k: usize) -> Result<Vec<BigInt>> {
    endpoint_counts(g, x0, k, false)
}

/// Number of geodesics of length exactly `k` from `x0` to each vertex, by enumeration.
pub fn brute_force_geodesic_counts(g: &Graph, x0: Vertex, k: usize) -> Result<Vec<BigInt>> {
    endpoint_counts(g, x0, k, true)
}

/// `N_k` by enumerating closed geodesics at every vertex.
pub fn brute_force_closed_geodesic_total(g: &Graph, k: usize, cap: usize) -> Result<BigInt> {
    if !g.is_finite_graph() {
        return Err(Error::InfiniteGraph);
    }
    let mut total = BigInt::from(0);
    for x in 0..g.vertex_count() {
        total += enumerate_closed_geodesics(g, x, k, cap)?.len();
    }
    Ok(total)
}

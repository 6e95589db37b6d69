//! Backtracking automorphism search for deciding vertex transitivity.

use alloc::vec;
use alloc::vec::Vec;

use super::{Graph, Vertex};

pub const DEFAULT_TRANSITIVITY_CAP: usize = 64;

/// A vertex permutation preserving edge multiplicities; `image[v]` is the
/// image of `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    pub image: Vec<Vertex>,
}

impl Automorphism {
    pub fn apply(&self, v: Vertex) -> Vertex {
        self.image[v]
    }

    pub fn is_automorphism_of(&self, g: &Graph) -> bool {
        let n = g.vertex_count();
        if self.image.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &v in &self.image {
            if v >= n || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        (0..n).all(|u| {
            (0..n).all(|v| g.multiplicity(u, v) == g.multiplicity(self.image[u], self.image[v]))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transitivity {
    /// `witnesses[v]` maps vertex 0 to `v`.
    Transitive { witnesses: Vec<Automorphism> },
    /// No automorphism maps `from` to `to`.
    NotTransitive { from: Vertex, to: Vertex },
    /// Graph exceeds the search cap.
    Unknown { vertices: usize, cap: usize },
}

impl Transitivity {
    pub fn is_transitive(&self) -> bool {
        matches!(self, Transitivity::Transitive { .. })
    }
}

/// Invariants that any automorphism must preserve per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Profile {
    degree: usize,
    loops: usize,
    distance_histogram: Vec<usize>,
}

struct Search<'a> {
    g: &'a Graph,
    multiplicity: Vec<Vec<usize>>,
    profiles: Vec<Profile>,
    distances: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.vertex_count();
        let mut multiplicity = vec![vec![0; n]; n];
        for e in g.edges() {
            multiplicity[e.origin][e.terminus] += 1;
        }
        let distances: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                g.distances_from(v)
                    .into_iter()
                    .map(|d| d.unwrap_or(usize::MAX))
                    .collect()
            })
            .collect();
        let profiles = (0..n)
            .map(|v| {
                let mut distance_histogram = vec![0; n];
                for &d in &distances[v] {
                    if d < n {
                        distance_histogram[d] += 1;
                    }
                }
                Profile {
                    degree: g.degree(v),
                    loops: multiplicity[v][v],
                    distance_histogram,
                }
            })
            .collect();
        Self {
            g,
            multiplicity,
            profiles,
            distances,
        }
    }

    /// Breadth-first order from `root` with each non-root vertex's BFS parent.
    fn order(&self, root: Vertex) -> Vec<(Vertex, Option<Vertex>)> {
        let n = self.g.vertex_count();
        let mut seen = vec![false; n];
        let mut order = vec![(root, None)];
        seen[root] = true;
        let mut head = 0;
        while head < order.len() {
            let v = order[head].0;
            head += 1;
            for &y in self.g.outgoing(v) {
                let w = self.g.terminus(y);
                if !seen[w] {
                    seen[w] = true;
                    order.push((w, Some(v)));
                }
            }
        }
        order
    }

    fn find(&self, from: Vertex, to: Vertex) -> Option<Automorphism> {
        if self.profiles[from] != self.profiles[to] {
            return None;
        }
        let n = self.g.vertex_count();
        let order = self.order(from);
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        image[from] = to;
        used[to] = true;
        if self.extend(&order, 1, from, to, &mut image, &mut used) {
            Some(Automorphism { image })
        } else {
            None
        }
    }

    fn consistent(
        &self,
        order: &[(Vertex, Option<Vertex>)],
        depth: usize,
        candidate: Vertex,
        image: &[Vertex],
    ) -> bool {
        let v = order[depth].0;
        order[..depth].iter().all(|&(u, _)| {
            self.multiplicity[v][u] == self.multiplicity[candidate][image[u]]
                && self.distances[v][u] == self.distances[candidate][image[u]]
        })
    }

    fn extend(
        &self,
        order: &[(Vertex, Option<Vertex>)],
        depth: usize,
        root: Vertex,
        root_image: Vertex,
        image: &mut [Vertex],
        used: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let (v, parent) = order[depth];
        let parent = parent.expect("non-root vertices have a BFS parent");
        let mut candidates: Vec<Vertex> = self
            .g
            .outgoing(image[parent])
            .iter()
            .map(|&y| self.g.terminus(y))
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        for candidate in candidates {
            if used[candidate]
                || self.profiles[candidate] != self.profiles[v]
                || self.distances[root_image][candidate] != self.distances[root][v]
                || !self.consistent(order, depth, candidate, image)
            {
                continue;
            }
            image[v] = candidate;
            used[candidate] = true;
            if self.extend(order, depth + 1, root, root_image, image, used) {
                return true;
            }
            used[candidate] = false;
            image[v] = usize::MAX;
        }
        false
    }
}

/// Searches for an automorphism of the (connected) graph `g` mapping `from` to `to`.
pub fn find_automorphism(g: &Graph, from: Vertex, to: Vertex) -> Option<Automorphism> {
    Search::new(g).find(from, to)
}

/// Decides vertex transitivity of a finite connected graph with at most `cap`
/// vertices by finding, for every vertex `v`, an automorphism mapping vertex
/// 0 to `v`. Worst-case exponential.
pub fn check_vertex_transitive(g: &Graph, cap: usize) -> Transitivity {
    let n = g.vertex_count();
    if n > cap {
        return Transitivity::Unknown { vertices: n, cap };
    }
    let search = Search::new(g);
    let mut witnesses = Vec::with_capacity(n);
    for v in 0..n {
        match search.find(0, v) {
            Some(aut) => witnesses.push(aut),
            None => return Transitivity::NotTransitive { from: 0, to: v },
        }
    }
    Transitivity::Transitive { witnesses }
}

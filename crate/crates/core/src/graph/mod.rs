//! Graphs in the edge-with-involution formalism.
//!
//! Every undirected edge `{u, v}` is stored as two directed edges `y` and
//! `bar(y)` with `o(y) = t(bar(y))`. A self-loop at `u` becomes two distinct
//! directed edges `u -> u`, so it contributes 2 to the degree. Multi-edges are
//! kept. Edge `2i` and `2i + 1` form the `i`-th undirected pair.

mod automorphism;
mod builtin;
mod counts;
mod enumerate;
mod parse;

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub use automorphism::{
    check_vertex_transitive, find_automorphism, Automorphism, Transitivity,
    DEFAULT_TRANSITIVITY_CAP,
};
pub use builtin::{builtin, complete, complete_bipartite, cycle, hypercube, petersen, tree_ball};
pub use counts::{
    closed_geodesics_at_vertex, closed_geodesics_from_loops, closed_geodesics_total,
    geodesic_counts, geodesic_counts_three_term, geodesic_loop_totals, mobius, path_counts,
    prime_geodesic_counts, CountTable, TransitivityPolicy, VertexCounts,
};
pub use enumerate::{
    brute_force_closed_geodesic_total, brute_force_geodesic_counts, brute_force_path_counts,
    enumerate_closed_geodesics, DEFAULT_ENUMERATION_CAP,
};
pub use parse::parse_edge_list;

pub type Vertex = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DirectedEdge {
    pub origin: Vertex,
    pub terminus: Vertex,
}

/// Whether a graph is an ordinary finite graph or a ball in the infinite
/// `(q+1)`-regular tree standing in for the whole tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Finite,
    /// Ball of the given radius around vertex 0. Counts from vertex 0 of
    /// length up to `radius` agree with the infinite tree.
    TreeBall {
        q: u32,
        radius: usize,
    },
}

/// Every vertex has degree `q + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegularityCertificate {
    pub q: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: usize,
    edges: Vec<DirectedEdge>,
    involution: Vec<EdgeId>,
    outgoing: Vec<Vec<EdgeId>>,
    kind: GraphKind,
}

impl Graph {
    /// Builds a graph from undirected edges `(u, v)` on vertices `0..vertices`.
    ///
    /// Each pair expands to directed edges `u -> v` and `v -> u`; repeated pairs
    /// give multi-edges and `(u, u)` a self-loop. Disconnected input is rejected.
    pub fn from_edges(vertices: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut directed = Vec::with_capacity(2 * edges.len());
        let mut involution = Vec::with_capacity(2 * edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            directed.push(DirectedEdge {
                origin: u,
                terminus: v,
            });
            directed.push(DirectedEdge {
                origin: v,
                terminus: u,
            });
            involution.push(2 * i + 1);
            involution.push(2 * i);
        }
        Self::from_directed(vertices, directed, involution)
    }

    /// Builds a graph from directed edges and an explicit involution, checking
    /// `bar(bar(y)) = y`, `bar(y) != y` and `o(y) = t(bar(y))`.
    pub fn from_directed(
        vertices: usize,
        edges: Vec<DirectedEdge>,
        involution: Vec<EdgeId>,
    ) -> Result<Self> {
        let graph = Self::assemble(vertices, edges, involution, GraphKind::Finite)?;
        graph.check_connected()?;
        Ok(graph)
    }

    pub(crate) fn assemble(
        vertices: usize,
        edges: Vec<DirectedEdge>,
        involution: Vec<EdgeId>,
        kind: GraphKind,
    ) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::EmptyGraph);
        }
        if involution.len() != edges.len() {
            return Err(Error::InvalidArgument(format!(
                "involution has {} entries for {} edges",
                involution.len(),
                edges.len()
            )));
        }
        let mut outgoing = vec![Vec::new(); vertices];
        for (id, e) in edges.iter().enumerate() {
            for v in [e.origin, e.terminus] {
                if v >= vertices {
                    return Err(Error::VertexOutOfRange {
                        vertex: v,
                        vertices,
                    });
                }
            }
            let bar = involution[id];
            if bar == id {
                return Err(Error::HalfLoop { edge: id });
            }
            if bar >= edges.len() || involution[bar] != id {
                return Err(Error::BadInvolution {
                    edge: id,
                    reason: "bar(bar(y)) != y",
                });
            }
            if edges[bar].terminus != e.origin || edges[bar].origin != e.terminus {
                return Err(Error::BadInvolution {
                    edge: id,
                    reason: "o(y) != t(bar(y))",
                });
            }
            outgoing[e.origin].push(id);
        }
        Ok(Self {
            vertices,
            edges,
            involution,
            outgoing,
            kind,
        })
    }

    fn check_connected(&self) -> Result<()> {
        let dist = self.distances_from(0);
        match dist.iter().position(Option::is_none) {
            Some(vertex) => Err(Error::Disconnected { vertex }),
            None => Ok(()),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    /// Number of directed edges (twice the number of undirected edges).
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn is_finite_graph(&self) -> bool {
        self.kind == GraphKind::Finite
    }

    pub fn edge(&self, y: EdgeId) -> DirectedEdge {
        self.edges[y]
    }

    pub fn edges(&self) -> &[DirectedEdge] {
        &self.edges
    }

    pub fn origin(&self, y: EdgeId) -> Vertex {
        self.edges[y].origin
    }

    pub fn terminus(&self, y: EdgeId) -> Vertex {
        self.edges[y].terminus
    }

    /// The reversed edge `bar(y)`.
    pub fn bar(&self, y: EdgeId) -> EdgeId {
        self.involution[y]
    }

    /// Directed edges leaving `v`, in increasing id order.
    pub fn outgoing(&self, v: Vertex) -> &[EdgeId] {
        &self.outgoing[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.outgoing[v].len()
    }

    /// Number of directed edges from `u` to `v` (a self-loop counts twice at `u`).
    pub fn multiplicity(&self, u: Vertex, v: Vertex) -> usize {
        self.outgoing[u]
            .iter()
            .filter(|&&y| self.edges[y].terminus == v)
            .count()
    }

    /// One representative `(o(y), t(y))` per undirected edge, in insertion order.
    pub fn undirected_edges(&self) -> Vec<(Vertex, Vertex)> {
        (0..self.edges.len())
            .filter(|&y| y < self.involution[y])
            .map(|y| (self.edges[y].origin, self.edges[y].terminus))
            .collect()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v >= self.vertices {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                vertices: self.vertices,
            });
        }
        Ok(())
    }

    /// Checks that every vertex has the same degree `q + 1 >= 2`.
    ///
    /// A tree ball certifies the degree of the tree it stands for.
    pub fn regularity(&self) -> Result<RegularityCertificate> {
        if let GraphKind::TreeBall { q, .. } = self.kind {
            return Ok(RegularityCertificate { q });
        }
        let expected = self.degree(0);
        if let Some(vertex) = (0..self.vertices).find(|&v| self.degree(v) != expected) {
            return Err(Error::NotRegular {
                vertex,
                degree: self.degree(vertex),
                expected,
            });
        }
        if expected < 2 {
            return Err(Error::DegreeTooSmall { degree: expected });
        }
        Ok(RegularityCertificate {
            q: (expected - 1) as u32,
        })
    }

    /// Breadth-first graph distances from `source`; `None` when unreachable.
    pub fn distances_from(&self, source: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertices];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].expect("queued vertices have a distance");
            for &y in &self.outgoing[v] {
                let w = self.edges[y].terminus;
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

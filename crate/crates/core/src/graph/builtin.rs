use alloc::vec::Vec;

use super::{DirectedEdge, Graph, GraphKind, Vertex};

fn finite(vertices: usize, edges: &[(Vertex, Vertex)]) -> Graph {
    Graph::from_edges(vertices, edges).expect("builtin graphs are connected")
}

/// Complete graph `K_n`, `n >= 2`.
pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    finite(n, &edges)
}

/// Cycle `C_n`, `n >= 3`.
pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    finite(n, &edges)
}

/// Complete bipartite graph `K_{a,b}`; parts are `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..a {
        for v in a..a + b {
            edges.push((u, v));
        }
    }
    finite(a + b, &edges)
}

/// The `d`-dimensional hypercube `Q_d`.
pub fn hypercube(d: u32) -> Graph {
    let n = 1usize << d;
    let mut edges = Vec::new();
    for u in 0..n {
        for bit in 0..d {
            let v = u ^ (1 << bit);
            if u < v {
                edges.push((u, v));
            }
        }
    }
    finite(n, &edges)
}

/// Petersen graph: outer 5-cycle `0..5`, spokes `i -- i+5`, inner pentagram.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    finite(10, &edges)
}

/// Ball of radius `radius` around vertex 0 in the `(q+1)`-regular tree.
///
/// Vertices are numbered in breadth-first order. Counting from vertex 0 is
/// exact for lengths up to `radius`.
pub fn tree_ball(q: u32, radius: usize) -> Graph {
    let mut edges = Vec::new();
    let mut frontier: Vec<Vertex> = alloc::vec![0];
    let mut next_id = 1;
    for depth in 0..radius {
        let children = if depth == 0 { q + 1 } else { q };
        let mut next = Vec::new();
        for &parent in &frontier {
            for _ in 0..children {
                edges.push((parent, next_id));
                next.push(next_id);
                next_id += 1;
            }
        }
        frontier = next;
    }
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
    Graph::assemble(
        next_id,
        directed,
        involution,
        GraphKind::TreeBall { q, radius },
    )
    .expect("tree ball is well formed")
}

/// Looks up a named finite graph: `k<n>`, `c<n>`, `k33`, `cube`, `petersen`.
pub fn builtin(name: &str) -> Option<Graph> {
    let name = name.trim().to_ascii_lowercase();
    match name.as_str() {
        "petersen" => return Some(petersen()),
        "cube" | "q3" => return Some(hypercube(3)),
        "k33" => return Some(complete_bipartite(3, 3)),
        _ => {}
    }
    let (prefix, digits) = name.split_at(1.min(name.len()));
    let n: usize = digits.parse().ok()?;
    match prefix {
        "k" if n >= 3 => Some(complete(n)),
        "c" if n >= 3 => Some(cycle(n)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names() {
        assert_eq!(builtin("K4").unwrap(), complete(4));
        assert_eq!(builtin("c8").unwrap().vertex_count(), 8);
        assert_eq!(builtin("cube").unwrap().regularity().unwrap().q, 2);
        assert_eq!(builtin("k33").unwrap().regularity().unwrap().q, 2);
        assert!(builtin("c2").is_none());
        assert!(builtin("tree").is_none());
        assert!(builtin("").is_none());
    }

    #[test]
    fn tree_ball_sphere_sizes() {
        let g = tree_ball(2, 4);
        let dist = g.distances_from(0);
        for k in 1..=4 {
            let sphere = dist.iter().filter(|d| **d == Some(k)).count();
            assert_eq!(sphere, 3 * 2usize.pow(k as u32 - 1));
        }
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.regularity().unwrap().q, 2);
    }
}

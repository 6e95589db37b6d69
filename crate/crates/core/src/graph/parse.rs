use alloc::format;
use alloc::vec::Vec;

use super::Graph;
use crate::error::{Error, Result};

/// Parses the plain-text edge list: one undirected edge `u v` per line with
/// 0-based vertex indices. Blank lines and `#` comments are skipped; the
/// vertex count is one more than the largest index. Duplicate lines give
/// multi-edges and `u u` a self-loop.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut vertices = 0;
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split_whitespace();
        let mut endpoint = || -> Result<usize> {
            let field = fields.next().ok_or_else(|| Error::Parse {
                line,
                message: "expected two vertex indices".into(),
            })?;
            field.parse().map_err(|_| Error::Parse {
                line,
                message: format!("invalid vertex index {field:?}"),
            })
        };
        let u = endpoint()?;
        let v = endpoint()?;
        if let Some(extra) = fields.next() {
            return Err(Error::Parse {
                line,
                message: format!("unexpected trailing field {extra:?}"),
            });
        }
        vertices = vertices.max(u + 1).max(v + 1);
        edges.push((u, v));
    }
    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Graph::from_edges(vertices, &edges)
}

//! Loading graphs from builtin names, the tree, and files.

use std::path::Path;

use heatzeta_core::graph::{builtin, parse_edge_list, tree_ball, Graph};
use serde::Deserialize;

use crate::config::GraphSource;
use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDocument {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

/// Parses either file format; JSON is recognised by a leading `{`.
pub fn parse_graph_text(text: &str) -> Result<Graph, heatzeta_core::Error> {
    if !text.trim_start().starts_with('{') {
        return parse_edge_list(text);
    }
    let document: GraphDocument = serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let message = full
            .rfind(" at line ")
            .map_or(full.as_str(), |i| &full[..i]);
        heatzeta_core::Error::Parse {
            line: e.line(),
            message: format!("column {}: {message}", e.column()),
        }
    })?;
    Graph::from_edges(document.vertices, &document.edges)
}

/// Reads a graph file and checks that it is regular; errors name the file.
pub fn read_graph_file(path: &Path) -> Result<Graph, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let located = |e: heatzeta_core::Error| CliError::Input(format!("{}: {e}", path.display()));
    let g = parse_graph_text(&text).map_err(located)?;
    g.regularity().map_err(located)?;
    Ok(g)
}

/// The graph to analyse; the tree becomes a ball of the given radius around
/// vertex 0.
pub fn load_graph(source: &GraphSource, tree_radius: usize) -> Result<Graph, CliError> {
    match source {
        GraphSource::Builtin(name) => {
            builtin(name).ok_or_else(|| CliError::Input(format!("unknown builtin graph {name:?}")))
        }
        GraphSource::Tree { q, .. } => Ok(tree_ball(*q, tree_radius)),
        GraphSource::File(path) => read_graph_file(path),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_edge_list_agree() {
        let json = r#"{"vertices": 4, "edges": [[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}"#;
        let text = "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
        assert_eq!(
            parse_graph_text(json).unwrap(),
            parse_graph_text(text).unwrap()
        );
    }

    #[test]
    fn json_errors_carry_the_line() {
        let err = parse_graph_text("{\n\"vertices\": 2,\n\"edges\": [[0, 1]\n").unwrap_err();
        assert!(
            matches!(err, heatzeta_core::Error::Parse { line: 4, .. }),
            "{err}"
        );
        assert!(parse_graph_text(r#"{"vertices": 2, "edges": [[0, 1]], "extra": 1}"#).is_err());
    }

    #[test]
    fn tree_source_builds_a_ball() {
        let g = load_graph(&GraphSource::Tree { q: 2, radius: 3 }, 2).unwrap();
        assert_eq!(g.vertex_count(), 1 + 3 + 6);
    }
}

//! `analyze`: counting tables around a base vertex.

use heatzeta_core::graph::{
    check_vertex_transitive, CountTable, Graph, Transitivity, TransitivityPolicy,
};
use heatzeta_core::BigInt;
use serde::Serialize;

use crate::config::{Format, GraphSource, RunConfig};
use crate::error::CliError;
use crate::format::{opt_int, to_csv, to_json, Int, SCHEMA_VERSION};
use crate::input::load_graph;
use crate::{graph_q, Report};

#[derive(Debug, Serialize)]
struct AnalyzeReport {
    schema: &'static str,
    command: &'static str,
    graph: String,
    q: u32,
    /// `null` for the infinite tree.
    vertices: Option<usize>,
    base_vertex: usize,
    transitivity: String,
    order: usize,
    rows: Vec<Row>,
}

#[derive(Debug, Serialize)]
struct Row {
    k: usize,
    a_k0: Int,
    c_k0: Int,
    #[serde(rename = "N_k0")]
    closed_at_base: Option<Int>,
    #[serde(rename = "N_k")]
    closed_total: Option<Int>,
    pi_k: Option<Int>,
}

/// Largest tree ball built by `analyze`.
pub const TREE_BALL_LIMIT: f64 = 300_000.0;

fn tree_ball_size(q: u32, radius: usize) -> f64 {
    let qf = q as f64;
    1.0 + (qf + 1.0) * (0..radius).map(|r| qf.powi(r as i32)).sum::<f64>()
}

/// Verdict string and whether per-vertex counts may be reported.
pub fn transitivity_verdict(g: &Graph, policy: TransitivityPolicy) -> (String, bool) {
    if !g.is_finite_graph() {
        return ("transitive".into(), true);
    }
    match policy {
        TransitivityPolicy::Assume => ("assumed".into(), true),
        TransitivityPolicy::Verify { cap } => match check_vertex_transitive(g, cap) {
            Transitivity::Transitive { .. } => ("transitive".into(), true),
            Transitivity::NotTransitive { from, to } => {
                (format!("not transitive: no automorphism maps vertex {from} to vertex {to}"), false)
            }
            Transitivity::Unknown { vertices, cap } => (
                format!("unknown: {vertices} vertices exceeds the search cap {cap}; pass --assume-transitive to override"),
                false,
            ),
        },
    }
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let source = config.graph.as_ref().expect("validated");
    let order = config.order;
    if let &GraphSource::Tree { q, .. } = source {
        let vertices = tree_ball_size(q, order);
        if vertices > TREE_BALL_LIMIT {
            return Err(CliError::Input(format!(
                "tree analysis to order {order} needs a ball of {vertices:.0} vertices (limit {TREE_BALL_LIMIT}); lower --order"
            )));
        }
    }
    let g = load_graph(source, order)?;
    let q = graph_q(&g, config)?;
    let x0 = match source {
        GraphSource::Tree { .. } => 0,
        _ => config.base_vertex,
    };
    g.check_vertex(x0)?;
    let (transitivity, transitive) = transitivity_verdict(&g, config.transitivity);
    let policy = if transitive {
        TransitivityPolicy::Assume
    } else {
        config.transitivity
    };
    let table = CountTable::compute(&g, x0, order, policy)?;
    let pick = |v: &Option<Vec<BigInt>>, k: usize| v.as_ref().map(|v| v[k].clone());
    let rows: Vec<Row> = (0..=order)
        .map(|k| Row {
            k,
            a_k0: Int(table.paths.at(k, x0).clone()),
            c_k0: Int(table.loops_at_base[k].clone()),
            closed_at_base: pick(&table.closed_at_base, k).map(Int),
            closed_total: pick(&table.closed_total, k).map(Int),
            pi_k: pick(&table.primes, k).map(Int),
        })
        .collect();
    let text = match config.format {
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.k.to_string(),
                        r.a_k0.0.to_string(),
                        r.c_k0.0.to_string(),
                        opt_int(&r.closed_at_base.as_ref().map(|i| i.0.clone())),
                        opt_int(&r.closed_total.as_ref().map(|i| i.0.clone())),
                        opt_int(&r.pi_k.as_ref().map(|i| i.0.clone())),
                    ]
                })
                .collect();
            to_csv(&["k", "a_k0", "c_k0", "N_k0", "N_k", "pi_k"], &body)?
        }
        _ => to_json(&AnalyzeReport {
            schema: SCHEMA_VERSION,
            command: "analyze",
            graph: source.label(),
            q,
            vertices: g.is_finite_graph().then(|| g.vertex_count()),
            base_vertex: x0,
            transitivity,
            order,
            rows,
        })?,
    };
    Ok(Report {
        text,
        failures: Vec::new(),
    })
}

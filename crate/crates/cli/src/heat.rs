use heatzeta_core::heat_graph::{heat_kernel_series_all, SpectralData, SPECTRAL_VERTEX_CAP};
use heatzeta_core::heat_tree::{tree_heat_kernel, tree_heat_kernel_cy};
use serde::Serialize;

use crate::config::{Format, GraphSource, RunConfig};
use crate::error::CliError;
use crate::format::{opt_float, sci, to_csv, to_json, Float, SCHEMA_VERSION};
use crate::input::load_graph;
use crate::{graph_q, Report};

/// Largest accepted `|series - reference|` is this or `10 * tol`, whichever is larger.
pub const GRAPH_CROSS_CHECK: f64 = 1e-7;
pub const TREE_CROSS_CHECK: f64 = 1e-8;

#[derive(Debug, Serialize)]
struct HeatReport {
    schema: &'static str,
    command: &'static str,
    graph: String,
    q: u32,
    vertices: Option<usize>,
    base_vertex: usize,
    tol: Float,
    /// `spectral` on finite graphs, `integral` on the tree.
    reference: &'static str,
    entries: Vec<Entry>,
    max_delta: Float,
    delta_limit: Float,
}

#[derive(Debug, Serialize)]
struct Entry {
    t: Float,
    #[serde(skip_serializing_if = "Option::is_none")]
    x: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<usize>,
    series: Float,
    reference: Float,
    delta: Float,
}

struct Row {
    t: f64,
    /// Target vertex on finite graphs, distance from the base on the tree.
    target: usize,
    series: f64,
    reference: Option<f64>,
}

impl Row {
    fn delta(&self) -> Option<f64> {
        self.reference.map(|r| (self.series - r).abs())
    }
}

fn graph_rows(
    config: &RunConfig,
    source: &GraphSource,
) -> Result<(Vec<Row>, u32, Option<usize>, usize), CliError> {
    let g = load_graph(source, 0)?;
    let q = graph_q(&g, config)?;
    let x0 = config.base_vertex;
    g.check_vertex(x0)?;
    let n = g.vertex_count();
    let spectrum = if n <= SPECTRAL_VERTEX_CAP {
        Some(SpectralData::new(&g)?)
    } else {
        None
    };
    let mut rows = Vec::with_capacity(config.times.len() * n);
    for &t in &config.times {
        let series = heat_kernel_series_all(&g, x0, t, config.tol)?;
        for (x, &value) in series.values.iter().enumerate() {
            rows.push(Row {
                t,
                target: x,
                series: value,
                reference: spectrum.as_ref().map(|s| s.heat_kernel(x0, x, t)),
            });
        }
    }
    Ok((rows, q, Some(n), x0))
}

fn tree_rows(config: &RunConfig, q: u32, radius: usize) -> Result<Vec<Row>, CliError> {
    let mut rows = Vec::with_capacity(config.times.len() * (radius + 1));
    for &t in &config.times {
        for r in 0..=radius as u32 {
            let series = tree_heat_kernel(q, t, r, config.tol)?.value;
            let reference = if q >= 2 {
                Some(tree_heat_kernel_cy(q, t, r, config.tol)?)
            } else {
                None
            };
            rows.push(Row {
                t,
                target: r as usize,
                series,
                reference,
            });
        }
    }
    Ok(rows)
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let source = config.graph.as_ref().expect("validated");
    let (rows, q, vertices, x0, reference, floor) = match source {
        &GraphSource::Tree { q, radius } => (
            tree_rows(config, q, radius)?,
            q,
            None,
            0,
            "integral",
            TREE_CROSS_CHECK,
        ),
        _ => {
            let (rows, q, n, x0) = graph_rows(config, source)?;
            (rows, q, n, x0, "spectral", GRAPH_CROSS_CHECK)
        }
    };
    let limit = floor.max(10.0 * config.tol);
    let max_delta = rows.iter().filter_map(Row::delta).fold(0.0, f64::max);
    let mut failures = Vec::new();
    if !(max_delta <= limit) {
        failures.push(format!(
            "heat series vs {reference}: max delta {max_delta:e} exceeds {limit:e}"
        ));
    }
    let text = match config.format {
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        sci(r.t),
                        r.target.to_string(),
                        sci(r.series),
                        opt_float(r.reference),
                        opt_float(r.delta()),
                    ]
                })
                .collect();
            let target = if vertices.is_some() { "x" } else { "r" };
            to_csv(&["t", target, "series", reference, "delta"], &body)?
        }
        _ => to_json(&HeatReport {
            schema: SCHEMA_VERSION,
            command: "heat",
            graph: source.label(),
            q,
            vertices,
            base_vertex: x0,
            tol: Float(config.tol),
            reference,
            entries: rows
                .iter()
                .map(|r| Entry {
                    t: Float(r.t),
                    x: vertices.map(|_| r.target),
                    r: vertices.is_none().then_some(r.target),
                    series: Float(r.series),
                    reference: Float(r.reference.unwrap_or(f64::NAN)),
                    delta: Float(r.delta().unwrap_or(f64::NAN)),
                })
                .collect(),
            max_delta: Float(max_delta),
            delta_limit: Float(limit),
        })?,
    };
    Ok(Report { text, failures })
}

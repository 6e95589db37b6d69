use heatzeta_core::graph::{closed_geodesics_total, prime_geodesic_counts};
use heatzeta_core::heat_graph::{SpectralData, SPECTRAL_VERTEX_CAP};
use heatzeta_core::zeta::{
    euler_product_series, ihara_determinant_from_spectrum, zeta_log_series_from_counts,
    zeta_spectral, IharaDeterminant, SpectralMeasure,
};
use serde::Serialize;

use crate::config::{Format, GraphSource, RunConfig};
use crate::error::CliError;
use crate::format::{opt_float, opt_int, to_csv, to_json, Float, Int, Rational, SCHEMA_VERSION};
use crate::input::load_graph;
use crate::{graph_q, Report};

#[derive(Debug, Serialize)]
struct ZetaReport {
    schema: &'static str,
    command: &'static str,
    graph: String,
    q: u32,
    vertices: usize,
    order: usize,
    rows: Vec<Row>,
    euler_product_matches: bool,
    /// `null` when the graph is too large for the eigen-solve.
    determinant_matches: Option<bool>,
    max_rounding_deviation: Float,
    evaluations: Vec<Evaluation>,
}

#[derive(Debug, Serialize)]
struct Row {
    m: usize,
    #[serde(rename = "N_m")]
    closed: Int,
    pi_m: Int,
    /// `N_m / m`, the coefficient of `u^m` in `log zeta`.
    log_coefficient: Rational,
    determinant_raw: Float,
    determinant_count: Option<Int>,
}

/// `zeta(u)` from the truncated count series and from the determinant formula.
#[derive(Debug, Serialize)]
struct Evaluation {
    u: Float,
    series: Float,
    determinant: Float,
    delta: Float,
}

/// `zeta(u)` from the eigenvalues: `1/zeta` is the `n`-th power of the
/// spectral integral against the uniform measure on the spectrum.
pub fn zeta_from_spectrum(spectrum: &SpectralData, u: f64) -> heatzeta_core::Result<f64> {
    let n = spectrum.vertex_count();
    let uniform = SpectralMeasure::Atomic {
        points: spectrum.eigenvalues.clone(),
        weights: vec![1.0 / n as f64; n],
    };
    let inverse = zeta_spectral(&uniform, spectrum.q, u, 1e-14)?;
    Ok(inverse.powf(-(n as f64)))
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let source = config.graph.as_ref().expect("validated");
    if let GraphSource::Tree { .. } = source {
        return Err(CliError::Input(
            "zeta needs a finite graph; the tree identity is checked by `verify --graph tree --q <q>`".into(),
        ));
    }
    let g = load_graph(source, 0)?;
    let q = graph_q(&g, config)?;
    let order = config.order;
    let u_grid = config.u_grid_for(q)?;
    let n = g.vertex_count();

    let closed = closed_geodesics_total(&g, order)?;
    let primes = prime_geodesic_counts(&closed, order)?;
    let log = zeta_log_series_from_counts(&closed, order)?;
    let euler_product_matches = euler_product_series(&primes, order)?.log()? == log;
    let spectrum = if n <= SPECTRAL_VERTEX_CAP {
        Some(SpectralData::new(&g)?)
    } else {
        None
    };
    let determinant: Option<IharaDeterminant> = spectrum
        .as_ref()
        .map(|s| ihara_determinant_from_spectrum(s, order))
        .transpose()?;
    let determinant_matches = determinant.as_ref().map(|d| d.counts[1..] == closed[1..]);

    let rows: Vec<Row> = (1..=order)
        .map(|m| Row {
            m,
            closed: Int(closed[m].clone()),
            pi_m: Int(primes[m].clone()),
            log_coefficient: Rational(log.coefficient(m).clone()),
            determinant_raw: Float(determinant.as_ref().map_or(f64::NAN, |d| d.raw[m])),
            determinant_count: determinant.as_ref().map(|d| Int(d.counts[m].clone())),
        })
        .collect();
    let mut evaluations = Vec::with_capacity(u_grid.len());
    for &u in &u_grid {
        let series = log.evaluate(u).exp();
        let closed_form = match &spectrum {
            Some(s) => zeta_from_spectrum(s, u)?,
            None => f64::NAN,
        };
        evaluations.push(Evaluation {
            u: Float(u),
            series: Float(series),
            determinant: Float(closed_form),
            delta: Float((series - closed_form).abs()),
        });
    }

    let mut failures = Vec::new();
    if !euler_product_matches {
        failures.push("Euler product over prime geodesics differs from the count series".into());
    }
    if determinant_matches == Some(false) {
        failures
            .push("determinant-side coefficients differ from the closed-geodesic counts".into());
    }
    let max_rounding_deviation = determinant
        .as_ref()
        .map_or(f64::NAN, |d| d.max_rounding_deviation);
    let text = match config.format {
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.m.to_string(),
                        r.closed.0.to_string(),
                        r.pi_m.0.to_string(),
                        r.log_coefficient.0.to_string(),
                        opt_float(Some(r.determinant_raw.0)),
                        opt_int(&r.determinant_count.as_ref().map(|i| i.0.clone())),
                    ]
                })
                .collect();
            to_csv(
                &[
                    "m",
                    "N_m",
                    "pi_m",
                    "log_coefficient",
                    "determinant_raw",
                    "determinant_count",
                ],
                &body,
            )?
        }
        _ => to_json(&ZetaReport {
            schema: SCHEMA_VERSION,
            command: "zeta",
            graph: source.label(),
            q,
            vertices: n,
            order,
            rows,
            euler_product_matches,
            determinant_matches,
            max_rounding_deviation: Float(max_rounding_deviation),
            evaluations,
        })?,
    };
    Ok(Report { text, failures })
}

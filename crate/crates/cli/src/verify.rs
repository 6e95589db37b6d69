//! `verify`: the identity suite.
//!
//! Every check compares two independently computed quantities and records
//! either the worst deviation against a tolerance or the number of exact
//! mismatches. A check that cannot run (say, because the graph is not
//! vertex transitive) is reported as skipped; an error inside a check is a
//! failure of that check only.

use heatzeta_core::bessel::{bessel_i, bessel_i_quadrature_converged, building_block};
use heatzeta_core::graph::{
    brute_force_closed_geodesic_total, brute_force_geodesic_counts, brute_force_path_counts,
    closed_geodesics_at_vertex, closed_geodesics_total, enumerate_closed_geodesics,
    geodesic_counts, geodesic_counts_three_term, path_counts, prime_geodesic_counts, tree_ball,
    Graph, TransitivityPolicy, Vertex,
};
use heatzeta_core::heat_graph::{
    corollary_diagonal, heat_kernel_ode, heat_kernel_series_all, SpectralData,
};
use heatzeta_core::heat_tree::{
    horocycle_residual, tree_ball_mass, tree_heat_kernel, tree_heat_kernel_cy, tree_heat_residual,
};
use heatzeta_core::zeta::{
    euler_product_series, g_transform_numeric, ihara_determinant_from_spectrum,
    kesten_tree_measure, laplace_identity_check, tree_closed_walk_counts, two_variable_zeta,
    zeta_log_derivative, zeta_log_series_from_counts, zeta_spectral, Envelope,
};
use heatzeta_core::{BigInt, Result as CoreResult};
use serde::Serialize;

use crate::analyze::transitivity_verdict;
use crate::config::{Format, GraphSource, RunConfig};
use crate::error::CliError;
use crate::format::{opt_float, short, to_csv, to_json, Float, SCHEMA_VERSION};
use crate::input::load_graph;
use crate::zeta::zeta_from_spectrum;
use crate::{graph_q, Report};

/// Lengths compared against exhaustive enumeration.
pub const ORACLE_LENGTH: usize = 10;
pub const HEAT_TIMES: [f64; 4] = [0.1, 0.5, 1.0, 2.0];
pub const TREE_TIMES: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];
pub const TREE_RADII: u32 = 10;
/// Builtin finite graphs covered when `verify` runs without `--graph`.
pub const BUILTIN_GRAPHS: [&str; 6] = ["k4", "c5", "c8", "cube", "k33", "petersen"];
pub const BUILTIN_TREES: [u32; 2] = [2, 3];

const LONG_ORDER: usize = 40;
const ALL_BASES_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Deviation { worst: f64, tolerance: f64 },
    Exact { mismatches: usize, compared: usize },
    Skipped(String),
    Error(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub subject: String,
    pub name: &'static str,
    pub outcome: Outcome,
}

impl Check {
    pub fn status(&self) -> Status {
        match &self.outcome {
            Outcome::Deviation { worst, tolerance } if *worst <= *tolerance => Status::Pass,
            Outcome::Exact { mismatches: 0, .. } => Status::Pass,
            Outcome::Skipped(_) => Status::Skip,
            _ => Status::Fail,
        }
    }

    pub fn detail(&self) -> String {
        match &self.outcome {
            Outcome::Deviation { worst, tolerance } => {
                format!("worst {} (tol {})", short(*worst), short(*tolerance))
            }
            Outcome::Exact {
                mismatches,
                compared,
            } => format!("{mismatches} mismatches in {compared} comparisons"),
            Outcome::Skipped(reason) => reason.clone(),
            Outcome::Error(message) => format!("error: {message}"),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{}  {:<12}  {}: {}",
            self.status().label(),
            self.subject,
            self.name,
            self.detail()
        )
    }
}

fn deviation(
    subject: &str,
    name: &'static str,
    tolerance: f64,
    f: impl FnOnce() -> CoreResult<f64>,
) -> Check {
    let outcome = match f() {
        Ok(worst) => Outcome::Deviation { worst, tolerance },
        Err(e) => Outcome::Error(e.to_string()),
    };
    Check {
        subject: subject.into(),
        name,
        outcome,
    }
}

/// `f` returns `(mismatches, comparisons)`.
fn exact(
    subject: &str,
    name: &'static str,
    f: impl FnOnce() -> CoreResult<(usize, usize)>,
) -> Check {
    let outcome = match f() {
        Ok((mismatches, compared)) => Outcome::Exact {
            mismatches,
            compared,
        },
        Err(e) => Outcome::Error(e.to_string()),
    };
    Check {
        subject: subject.into(),
        name,
        outcome,
    }
}

fn skipped(subject: &str, name: &'static str, reason: &str) -> Check {
    Check {
        subject: subject.into(),
        name,
        outcome: Outcome::Skipped(reason.into()),
    }
}

/// Accumulates exact comparisons.
#[derive(Default)]
struct Tally {
    mismatches: usize,
    compared: usize,
}

impl Tally {
    fn compare<T: PartialEq>(&mut self, a: &T, b: &T) {
        self.compared += 1;
        if a != b {
            self.mismatches += 1;
        }
    }

    fn compare_slices<T: PartialEq>(&mut self, a: &[T], b: &[T]) {
        if a.len() != b.len() {
            self.compared += 1;
            self.mismatches += 1;
            return;
        }
        for (x, y) in a.iter().zip(b) {
            self.compare(x, y);
        }
    }

    fn result(self) -> (usize, usize) {
        (self.mismatches, self.compared)
    }
}

fn worst<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values
        .into_iter()
        .fold(0.0, |w, v| if v.is_nan() { f64::NAN } else { w.max(v) })
}

fn try_worst<I: IntoIterator<Item = CoreResult<f64>>>(values: I) -> CoreResult<f64> {
    let mut w: f64 = 0.0;
    for v in values {
        let v = v?;
        w = if v.is_nan() || w.is_nan() {
            f64::NAN
        } else {
            w.max(v)
        };
    }
    Ok(w)
}

/// Checks independent of any graph.
pub fn global_checks() -> Vec<Check> {
    let subject = "global";
    vec![
        deviation(
            subject,
            "Bessel power series vs integral representation (relative)",
            1e-9,
            || {
                let mut values = Vec::new();
                for n in 0..=20 {
                    for t in [0.01, 0.1, 1.0, 5.0, 20.0] {
                        let series = bessel_i(n, t, 1e-15)?.value;
                        let integral = bessel_i_quadrature_converged(n, t, 1e-13)?.value;
                        values.push((series - integral).abs() / integral.abs().max(1.0));
                    }
                }
                Ok(worst(values))
            },
        ),
        deviation(
            subject,
            "Laplace transform of e^{-t} I_n(t) vs closed form",
            1e-9,
            || {
                let mut values = Vec::new();
                for n in 0..=6 {
                    for s in [0.5, 1.0, 2.0] {
                        let (numeric, closed) = laplace_identity_check(n, s, 1e-11)?;
                        values.push((numeric - closed).abs());
                    }
                }
                Ok(worst(values))
            },
        ),
    ]
}

fn counting_oracle(g: &Graph, bases: &[Vertex], transitive: bool) -> CoreResult<(usize, usize)> {
    let mut tally = Tally::default();
    for &x0 in bases {
        let paths = path_counts(g, x0, ORACLE_LENGTH)?;
        let geodesics = geodesic_counts(g, x0, ORACLE_LENGTH)?;
        let three_term = geodesic_counts_three_term(g, x0, ORACLE_LENGTH)?;
        for k in 0..=ORACLE_LENGTH {
            let brute_geodesics = brute_force_geodesic_counts(g, x0, k)?;
            tally.compare_slices(paths.row(k), &brute_force_path_counts(g, x0, k)?);
            tally.compare_slices(geodesics.row(k), &brute_geodesics);
            tally.compare_slices(three_term.row(k), &brute_geodesics);
        }
        if transitive {
            let closed =
                closed_geodesics_at_vertex(g, x0, ORACLE_LENGTH, TransitivityPolicy::Assume)?;
            for (k, count) in closed.iter().enumerate() {
                let found = enumerate_closed_geodesics(g, x0, k, ORACLE_LENGTH)?.len();
                tally.compare(count, &BigInt::from(found));
            }
        }
    }
    if g.is_finite_graph() {
        let totals = closed_geodesics_total(g, ORACLE_LENGTH)?;
        for (k, total) in totals.iter().enumerate() {
            tally.compare(
                total,
                &brute_force_closed_geodesic_total(g, k, ORACLE_LENGTH)?,
            );
        }
    }
    Ok(tally.result())
}

/// Checks on a finite `(q+1)`-regular graph.
pub fn finite_graph_checks(
    subject: &str,
    g: &Graph,
    x0: Vertex,
    order: usize,
    policy: TransitivityPolicy,
) -> Vec<Check> {
    let mut checks = Vec::new();
    let (q, spectrum) = match g
        .regularity()
        .and_then(|r| Ok((r.q, SpectralData::new(g)?)))
    {
        Ok(pair) => pair,
        Err(e) => {
            checks.push(Check {
                subject: subject.into(),
                name: "graph setup",
                outcome: Outcome::Error(e.to_string()),
            });
            return checks;
        }
    };
    let n = g.vertex_count();
    let (verdict, transitive) = transitivity_verdict(g, policy);
    let not_transitive = format!("needs vertex transitivity ({verdict})");
    let bases: Vec<Vertex> = if n <= ALL_BASES_LIMIT {
        (0..n).collect()
    } else {
        vec![x0]
    };

    checks.push(exact(
        subject,
        "counting recursions vs exhaustive enumeration",
        || counting_oracle(g, &bases, transitive),
    ));

    let mut ode_values = Vec::new();
    checks.push(deviation(
        subject,
        "heat kernel: Bessel series vs spectral",
        1e-7,
        || {
            let mut values = Vec::new();
            for &t in &HEAT_TIMES {
                for &base in &bases {
                    let series = heat_kernel_series_all(g, base, t, 1e-12)?;
                    let ode = heat_kernel_ode(g, base, t, 1e-11)?;
                    for x in 0..n {
                        values.push((series.values[x] - spectrum.heat_kernel(base, x, t)).abs());
                        ode_values.push((series.values[x] - ode[x]).abs());
                    }
                }
            }
            Ok(worst(values))
        },
    ));
    checks.push(deviation(
        subject,
        "heat kernel: Bessel series vs ODE integration",
        1e-6,
        || {
            Ok(if ode_values.is_empty() {
                f64::NAN
            } else {
                worst(ode_values)
            })
        },
    ));

    checks.push(deviation(
        subject,
        "adjacency moments vs path counts (relative)",
        1e-9,
        || {
            let paths = path_counts(g, x0, 8)?;
            let mut values = Vec::new();
            for k in 0..=8 {
                for x in 0..n {
                    let exact = f64_of(paths.at(k, x));
                    values.push(
                        (spectrum.adjacency_moment(x0, x, k as u32) - exact).abs() / exact.max(1.0),
                    );
                }
            }
            Ok(worst(values))
        },
    ));

    let name = "diagonal from tree kernel plus closed geodesics";
    checks.push(if transitive {
        deviation(subject, name, 1e-8, || {
            try_worst([0.5, 1.0].map(|t| {
                corollary_diagonal(g, x0, t, 1e-12, TransitivityPolicy::Assume)
                    .map(|d| (d - spectrum.heat_kernel(x0, x0, t)).abs())
            }))
        })
    } else {
        skipped(subject, name, &not_transitive)
    });

    let counts = closed_geodesics_total(g, order);
    let log = counts
        .clone()
        .and_then(|c| zeta_log_series_from_counts(&c, order));
    checks.push(exact(
        subject,
        "zeta: Euler product over prime geodesics",
        || {
            let counts = counts.clone()?;
            let log = log.clone()?;
            let euler =
                euler_product_series(&prime_geodesic_counts(&counts, order)?, order)?.log()?;
            let mut tally = Tally::default();
            tally.compare_slices(euler.coefficients(), log.coefficients());
            Ok(tally.result())
        },
    ));
    let determinant = ihara_determinant_from_spectrum(&spectrum, order);
    checks.push(exact(
        subject,
        "zeta: determinant formula recovers N_m",
        || {
            let counts = counts.clone()?;
            let determinant = determinant.clone()?;
            let mut tally = Tally::default();
            tally.compare_slices(&determinant.counts[1..], &counts[1..]);
            Ok(tally.result())
        },
    ));
    checks.push(deviation(
        subject,
        "zeta: determinant coefficients before rounding",
        1e-6,
        || Ok(determinant.clone()?.max_rounding_deviation),
    ));
    let name = "zeta: N_m = n N_m^0";
    checks.push(if transitive {
        exact(subject, name, || {
            let counts = counts.clone()?;
            let local = closed_geodesics_at_vertex(g, x0, order, TransitivityPolicy::Assume)?;
            let mut tally = Tally::default();
            for (total, at_base) in counts.iter().zip(&local) {
                tally.compare(total, &(at_base * BigInt::from(n)));
            }
            Ok(tally.result())
        })
    } else {
        skipped(subject, name, &not_transitive)
    });
    checks.push(deviation(
        subject,
        "zeta: count series vs spectral closed form",
        1e-8,
        || {
            let long =
                zeta_log_series_from_counts(&closed_geodesics_total(g, LONG_ORDER)?, LONG_ORDER)?;
            let qf = q as f64;
            try_worst([0.02, 0.05, 0.1].map(|s| {
                let u = s / qf;
                zeta_from_spectrum(&spectrum, u)
                    .map(|closed| (long.evaluate(u).exp() - closed).abs())
            }))
        },
    ));

    let name = "G-transform of the diagonal heat kernel vs zeta log-derivative";
    checks.push(if transitive {
        deviation(subject, name, 1e-6, || {
            let closed = closed_geodesics_at_vertex(g, x0, LONG_ORDER, TransitivityPolicy::Assume)?;
            let limit = Envelope::finite_heat_kernel(q).u_limit(q);
            try_worst([0.02, 0.05].into_iter().filter(|&u| u < limit).map(|u| {
                let transform = g_transform_numeric(
                    |t| spectrum.heat_kernel(x0, x0, t),
                    q,
                    u,
                    Envelope::finite_heat_kernel(q),
                    1e-10,
                )?;
                Ok((transform.value - zeta_log_derivative(&closed, q, u)).abs())
            }))
        })
    } else {
        skipped(subject, name, &not_transitive)
    });

    let far = g
        .distances_from(x0)
        .iter()
        .enumerate()
        .max_by_key(|(_, d)| d.unwrap_or(0))
        .map(|(x, _)| x)
        .unwrap_or(x0);
    let name = "two-variable zeta: series vs spectral";
    checks.push(if far != x0 {
        deviation(subject, name, 1e-8, || {
            let z = two_variable_zeta(g, x0, far, 30)?;
            let qf = q as f64;
            try_worst([0.02, 0.1].map(|s| {
                z.spectral_value(s / qf)
                    .map(|v| (z.series_value(s / qf) - v).abs())
            }))
        })
    } else {
        skipped(subject, name, "graph has a single vertex")
    });
    checks
}

fn f64_of(n: &BigInt) -> f64 {
    n.to_string().parse().unwrap_or(f64::NAN)
}

/// Checks on the `(q+1)`-regular tree.
pub fn tree_checks(subject: &str, q: u32) -> Vec<Check> {
    let mut checks = Vec::new();
    let qf = q as f64;
    let grid = || {
        TREE_TIMES
            .into_iter()
            .flat_map(|t| (0..=TREE_RADII).map(move |r| (t, r)))
    };

    let name = "tree kernel: Bessel series vs integral formulas";
    checks.push(if q >= 2 {
        deviation(subject, name, 1e-8, || {
            try_worst(grid().map(|(t, r)| {
                let series = tree_heat_kernel(q, t, r, 1e-14)?.value;
                Ok((series - tree_heat_kernel_cy(q, t, r, 1e-13)?).abs())
            }))
        })
    } else {
        skipped(subject, name, "the integral formulas need q >= 2")
    });
    checks.push(deviation(
        subject,
        "tree kernel: heat equation residual",
        1e-8,
        || try_worst(grid().map(|(t, r)| tree_heat_residual(q, t, r, 1e-13).map(f64::abs))),
    ));
    checks.push(exact(subject, "tree kernel: values in (0, 1)", || {
        let mut tally = Tally::default();
        for (t, r) in grid() {
            let v = tree_heat_kernel(q, t, r, 1e-14)?.value;
            tally.compare(&(v > 0.0 && v < 1.0), &true);
        }
        Ok(tally.result())
    }));
    checks.push(deviation(
        subject,
        "tree kernel: total mass is 1",
        1e-6,
        || {
            try_worst(
                [0.5, 1.0, 2.0].map(|t| tree_ball_mass(q, t, 1e-9).map(|(m, _)| (m - 1.0).abs())),
            )
        },
    ));
    checks.push(deviation(
        subject,
        "horocyclic solution: residual",
        1e-8,
        || {
            try_worst(
                [0.5, 1.0, 2.0]
                    .into_iter()
                    .flat_map(|t| (-5..=5).map(move |n| horocycle_residual(q, t, n).map(f64::abs))),
            )
        },
    ));
    checks.push(deviation(
        subject,
        "tree zeta identity: spectral zeta = 1",
        1e-7,
        || {
            let measure = kesten_tree_measure(q)?;
            let mut grid: Vec<f64> = [0.05, 0.1, 0.2]
                .into_iter()
                .filter(|&u| u < 1.0 / qf)
                .collect();
            if grid.is_empty() {
                grid.push(0.5 / qf);
            }
            try_worst(
                grid.into_iter()
                    .map(|u| zeta_spectral(&measure, q, u, 1e-13).map(|z| (z - 1.0).abs())),
            )
        },
    ));
    checks.push(exact(
        subject,
        "Kesten-McKay moments vs tree closed walks",
        || {
            let measure = kesten_tree_measure(q)?;
            let mut tally = Tally::default();
            for (k, walks) in tree_closed_walk_counts(q, 12).iter().enumerate() {
                let exact = f64_of(walks);
                let scale = (2.0 * qf.sqrt()).powi(k as i32);
                let moment = measure.adjacency_moment(q, k as u32, 1e-14 * scale)?;
                let close =
                    moment.round() == exact && (moment - exact).abs() <= 1e-9 * exact.max(1.0);
                tally.compare(&close, &true);
            }
            Ok(tally.result())
        },
    ));
    checks.push(deviation(
        subject,
        "G-transform of building blocks: u^{k-1}",
        1e-6,
        || {
            let mut values = Vec::new();
            for k in 0..=6u32 {
                for s in [0.1, 0.25] {
                    let u = s / qf.sqrt();
                    let transform = g_transform_numeric(
                        |t| building_block(q, k, t, 1e-16),
                        q,
                        u,
                        Envelope::building_block(q, k),
                        1e-9,
                    )?;
                    values.push((transform.value - u.powi(k as i32 - 1)).abs());
                }
            }
            Ok(worst(values))
        },
    ));
    checks.push(deviation(
        subject,
        "G-transform of the tree diagonal",
        1e-7,
        || {
            try_worst([0.25, 0.5].map(|s| {
                let u = s / qf.sqrt();
                let transform = g_transform_numeric(
                    |t| tree_heat_kernel(q, t, 0, 1e-14).map_or(f64::NAN, |v| v.value),
                    q,
                    u,
                    Envelope::tree_kernel(q),
                    1e-10,
                )?;
                Ok((transform.value - (1.0 / u - (qf - 1.0) * u / (1.0 - u * u))).abs())
            }))
        },
    ));
    let ball = tree_ball(q, ORACLE_LENGTH);
    checks.push(exact(
        subject,
        "counting recursions vs exhaustive enumeration",
        || counting_oracle(&ball, &[0], true),
    ));
    checks.push(exact(subject, "no closed geodesics on the tree", || {
        let closed =
            closed_geodesics_at_vertex(&ball, 0, ORACLE_LENGTH, TransitivityPolicy::Assume)?;
        let mut tally = Tally::default();
        for (k, count) in closed.iter().enumerate() {
            tally.compare(count, &BigInt::from(u8::from(k == 0)));
        }
        Ok(tally.result())
    }));
    checks
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    schema: &'static str,
    command: &'static str,
    checks: Vec<CheckRecord>,
    passed: usize,
    failed: usize,
    skipped: usize,
}

#[derive(Debug, Serialize)]
struct CheckRecord {
    subject: String,
    check: &'static str,
    status: &'static str,
    worst: Option<Float>,
    tolerance: Option<Float>,
    mismatches: Option<usize>,
    compared: Option<usize>,
    note: Option<String>,
}

impl From<&Check> for CheckRecord {
    fn from(check: &Check) -> Self {
        let mut record = CheckRecord {
            subject: check.subject.clone(),
            check: check.name,
            status: check.status().label(),
            worst: None,
            tolerance: None,
            mismatches: None,
            compared: None,
            note: None,
        };
        match &check.outcome {
            Outcome::Deviation { worst, tolerance } => {
                record.worst = Some(Float(*worst));
                record.tolerance = Some(Float(*tolerance));
            }
            Outcome::Exact {
                mismatches,
                compared,
            } => {
                record.mismatches = Some(*mismatches);
                record.compared = Some(*compared);
            }
            Outcome::Skipped(note) | Outcome::Error(note) => record.note = Some(note.clone()),
        }
        record
    }
}

/// All checks for the configured graph, or for every builtin when none is given.
pub fn collect_checks(config: &RunConfig) -> Result<Vec<Check>, CliError> {
    let mut checks = global_checks();
    let sources: Vec<GraphSource> = match &config.graph {
        Some(source) => vec![source.clone()],
        None => BUILTIN_GRAPHS
            .iter()
            .map(|name| GraphSource::Builtin((*name).into()))
            .chain(
                BUILTIN_TREES
                    .iter()
                    .map(|&q| GraphSource::Tree { q, radius: 0 }),
            )
            .collect(),
    };
    for source in &sources {
        let subject = source.label();
        match source {
            &GraphSource::Tree { q, .. } => checks.extend(tree_checks(&subject, q)),
            _ => {
                let g = load_graph(source, 0)?;
                graph_q(&g, config)?;
                g.check_vertex(config.base_vertex)?;
                checks.extend(finite_graph_checks(
                    &subject,
                    &g,
                    config.base_vertex,
                    config.order,
                    config.transitivity,
                ));
            }
        }
    }
    Ok(checks)
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let checks = collect_checks(config)?;
    let count = |status: Status| checks.iter().filter(|c| c.status() == status).count();
    let (passed, failed, skipped) = (
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Skip),
    );
    let failures: Vec<String> = checks
        .iter()
        .filter(|c| c.status() == Status::Fail)
        .map(|c| format!("{}: {}: {}", c.subject, c.name, c.detail()))
        .collect();
    let text = match config.format {
        Format::Text => {
            let mut text: String = checks.iter().map(|c| c.line() + "\n").collect();
            text.push_str(&format!(
                "summary: {passed} passed, {failed} failed, {skipped} skipped\n"
            ));
            text
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = checks
                .iter()
                .map(|c| {
                    let r = CheckRecord::from(c);
                    vec![
                        r.subject,
                        r.check.into(),
                        r.status.into(),
                        opt_float(r.worst.map(|f| f.0)),
                        opt_float(r.tolerance.map(|f| f.0)),
                        r.mismatches.map(|m| m.to_string()).unwrap_or_default(),
                        r.compared.map(|m| m.to_string()).unwrap_or_default(),
                        r.note.unwrap_or_default(),
                    ]
                })
                .collect();
            to_csv(
                &[
                    "subject",
                    "check",
                    "status",
                    "worst",
                    "tolerance",
                    "mismatches",
                    "compared",
                    "note",
                ],
                &rows,
            )?
        }
        Format::Json => to_json(&VerifyReport {
            schema: SCHEMA_VERSION,
            command: "verify",
            checks: checks.iter().map(CheckRecord::from).collect(),
            passed,
            failed,
            skipped,
        })?,
    };
    Ok(Report { text, failures })
}

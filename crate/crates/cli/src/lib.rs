//! Command-line front end for `heatzeta-core`.
//!
//! Four commands share one [`RunConfig`]:
//!
//! * `analyze` tabulates the counting functions around a base vertex;
//! * `heat` tabulates heat-kernel values from the Bessel series next to an
//!   independent reference (the Laplacian spectrum, or the integral formulas
//!   on the tree);
//! * `zeta` reports zeta coefficients from closed-geodesic counts, prime
//!   geodesics and the determinant formula;
//! * `verify` runs the identity suite over the builtin graphs.
//!
//! # Graph files
//!
//! A plain-text graph holds one undirected edge per line as two 0-based
//! vertex indices `u v`; blank lines and `#` comments are ignored, repeated
//! lines give multi-edges and `u u` gives a self-loop. The JSON form is
//! `{"vertices": n, "edges": [[u, v], ...]}`. Files starting with `{` are
//! read as JSON. Parse errors report the file and line.
//!
//! # Reports and exit codes
//!
//! JSON reports carry `"schema": "1"` and keep a fixed key order; floats are
//! written with 15 significant digits, so identical runs give identical
//! bytes. The process exits with 0 when every check passes, 2 on input
//! errors and 3 when an invariant fails.

pub mod analyze;
pub mod args;
pub mod config;
pub mod error;
pub mod format;
pub mod heat;
pub mod input;
pub mod verify;
pub mod zeta;

use std::ffi::OsString;

use clap::Parser;
use heatzeta_core::graph::{Graph, GraphKind};

pub use args::Cli;
pub use config::{Command, Format, GraphSource, RunConfig};
pub use error::CliError;

/// Rendered output of a command plus the invariants it found violated.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub failures: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn exit_code(&self) -> u8 {
        if self.passed() {
            0
        } else {
            3
        }
    }
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    config.validate()?;
    match config.command {
        Command::Analyze => analyze::run(config),
        Command::Heat => heat::run(config),
        Command::Zeta => zeta::run(config),
        Command::Verify => verify::run(config),
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// the report to `--out` or returns it for standard output.
///
/// Returns the exit code, the text destined for standard output, and the
/// diagnostics destined for standard error.
pub fn run_args<I, T>(args: I) -> (u8, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                (0, text, String::new())
            } else {
                (2, String::new(), text)
            };
        }
    };
    let outcome = cli.into_config().and_then(|config| {
        let report = run(&config)?;
        let stdout = match &config.out {
            Some(path) => {
                std::fs::write(path, &report.text).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                String::new()
            }
            None => report.text.clone(),
        };
        Ok((report, stdout))
    });
    match outcome {
        Ok((report, stdout)) => {
            let stderr: String = report
                .failures
                .iter()
                .map(|f| format!("invariant failure: {f}\n"))
                .collect();
            (report.exit_code(), stdout, stderr)
        }
        Err(e) => (e.exit_code(), String::new(), format!("error: {e}\n")),
    }
}

/// `q` of a regular graph, checked against `--q` when both are present.
pub(crate) fn graph_q(g: &Graph, config: &RunConfig) -> Result<u32, CliError> {
    let q = g.regularity()?.q;
    if let (Some(given), GraphKind::Finite) = (config.q, g.kind()) {
        if given != q {
            return Err(CliError::Input(format!(
                "--q {given} does not match the graph, which is {}-regular (q = {q})",
                q + 1
            )));
        }
    }
    Ok(q)
}

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use heatzeta_core::graph::{TransitivityPolicy, DEFAULT_TRANSITIVITY_CAP};

use crate::config::{Command, Format, GraphSource, RunConfig};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CommandArg {
    /// Counting tables: paths, geodesics, closed and prime geodesics.
    Analyze,
    /// Heat kernel values with a cross-check column.
    Heat,
    /// Zeta coefficients from counts, primes and the determinant formula.
    Zeta,
    /// Run the identity suite and exit nonzero on any failure.
    Verify,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Text,
}

/// Heat kernels and Ihara zeta functions of (q+1)-regular graphs.
///
/// Graph files hold one edge "u v" per line (0-based, `#` comments allowed)
/// or a JSON object {"vertices": n, "edges": [[u, v], ...]}.
#[derive(Debug, Parser)]
#[command(name = "heatzeta", version)]
pub struct Cli {
    #[arg(value_enum)]
    command: CommandArg,

    /// Builtin name (k<n>, c<n>, k33, cube, petersen), `tree`, or a graph file.
    #[arg(long)]
    graph: Option<String>,

    /// Tree parameter: the tree is (q+1)-regular.
    #[arg(long)]
    q: Option<u32>,

    /// Largest distance tabulated by `heat` on the tree.
    #[arg(long, default_value_t = 5)]
    radius: usize,

    /// Series order M (default 8 for analyze, 12 otherwise).
    #[arg(long)]
    order: Option<usize>,

    /// Comma-separated times.
    #[arg(long = "t", value_delimiter = ',', default_values_t = [0.1, 0.5, 1.0, 2.0])]
    times: Vec<f64>,

    /// Comma-separated zeta arguments in (0, 1/q) (default {0.1, 0.25, 0.5}/q).
    #[arg(long = "u", value_delimiter = ',')]
    u_grid: Option<Vec<f64>>,

    #[arg(long, default_value_t = 1e-10)]
    tol: f64,

    #[arg(long, value_enum)]
    format: Option<FormatArg>,

    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Base vertex x0.
    #[arg(long, default_value_t = 0)]
    x0: usize,

    /// Treat the graph as vertex transitive without searching for automorphisms.
    #[arg(long)]
    assume_transitive: bool,

    /// Largest vertex count for the automorphism search.
    #[arg(long, default_value_t = DEFAULT_TRANSITIVITY_CAP)]
    transitivity_cap: usize,
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let command = match self.command {
            CommandArg::Analyze => Command::Analyze,
            CommandArg::Heat => Command::Heat,
            CommandArg::Zeta => Command::Zeta,
            CommandArg::Verify => Command::Verify,
        };
        let mut config = RunConfig::new(command);
        config.graph = self
            .graph
            .as_deref()
            .map(|name| GraphSource::resolve(name, self.q, self.radius))
            .transpose()?;
        config.q = self.q;
        config.times = self.times;
        config.u_grid = self.u_grid;
        if let Some(order) = self.order {
            config.order = order;
        }
        config.tol = self.tol;
        if let Some(format) = self.format {
            config.format = match format {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
                FormatArg::Text => Format::Text,
            };
        }
        config.out = self.out;
        config.base_vertex = self.x0;
        config.transitivity = if self.assume_transitive {
            TransitivityPolicy::Assume
        } else {
            TransitivityPolicy::Verify {
                cap: self.transitivity_cap,
            }
        };
        config.validate()?;
        Ok(config)
    }
}

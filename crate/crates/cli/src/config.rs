use std::path::PathBuf;

use heatzeta_core::graph::{builtin, TransitivityPolicy, DEFAULT_TRANSITIVITY_CAP};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Heat,
    Zeta,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Heat => "heat",
            Command::Zeta => "zeta",
            Command::Verify => "verify",
        }
    }

    pub fn default_order(self) -> usize {
        match self {
            Command::Analyze => 8,
            Command::Heat | Command::Zeta | Command::Verify => 12,
        }
    }
}

/// Where the graph comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    Builtin(String),
    /// The `(q+1)`-regular tree; `radius` bounds the tabulated distances.
    Tree {
        q: u32,
        radius: usize,
    },
    File(PathBuf),
}

impl GraphSource {
    /// Resolves a `--graph` argument: `tree`, a builtin name, or a file path.
    pub fn resolve(name: &str, q: Option<u32>, radius: usize) -> Result<Self, CliError> {
        if name.eq_ignore_ascii_case("tree") {
            let q = q.ok_or_else(|| CliError::Input("--graph tree needs --q".into()))?;
            if q == 0 {
                return Err(CliError::Input("--q must be at least 1".into()));
            }
            return Ok(GraphSource::Tree { q, radius });
        }
        if builtin(name).is_some() {
            return Ok(GraphSource::Builtin(name.to_ascii_lowercase()));
        }
        let path = PathBuf::from(name);
        if path.is_file() {
            return Ok(GraphSource::File(path));
        }
        Err(CliError::Input(format!(
            "unknown graph {name:?}: not a builtin (k<n>, c<n>, k33, cube, petersen, tree) and not a readable file"
        )))
    }

    pub fn label(&self) -> String {
        match self {
            GraphSource::Builtin(name) => name.clone(),
            GraphSource::Tree { q, .. } => format!("tree(q={q})"),
            GraphSource::File(path) => path.display().to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    /// One line per check; the default for `verify`.
    Text,
}

/// A validated command invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub graph: Option<GraphSource>,
    /// Degree parameter given with `--q`; checked against non-tree graphs.
    pub q: Option<u32>,
    pub times: Vec<f64>,
    /// `None` selects `{0.1, 0.25, 0.5} / q`.
    pub u_grid: Option<Vec<f64>>,
    pub order: usize,
    pub tol: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub base_vertex: usize,
    pub transitivity: TransitivityPolicy,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            graph: None,
            q: None,
            times: vec![0.1, 0.5, 1.0, 2.0],
            u_grid: None,
            order: command.default_order(),
            tol: 1e-10,
            format: if command == Command::Verify {
                Format::Text
            } else {
                Format::Json
            },
            out: None,
            base_vertex: 0,
            transitivity: TransitivityPolicy::Verify {
                cap: DEFAULT_TRANSITIVITY_CAP,
            },
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Input(format!(
                "--tol must be positive, got {}",
                self.tol
            )));
        }
        if self.order < 1 {
            return Err(CliError::Input("--order must be at least 1".into()));
        }
        if self.times.is_empty() {
            return Err(CliError::Input("--t needs at least one time".into()));
        }
        if let Some(t) = self.times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
            return Err(CliError::Input(format!(
                "times must be finite and non-negative, got {t}"
            )));
        }
        if let Some(grid) = &self.u_grid {
            if grid.is_empty() {
                return Err(CliError::Input("--u needs at least one value".into()));
            }
            if let Some(u) = grid.iter().find(|u| !(u.is_finite() && **u > 0.0)) {
                return Err(CliError::Input(format!(
                    "u values must be positive, got {u}"
                )));
            }
        }
        if self.graph.is_none() && self.command != Command::Verify {
            return Err(CliError::Input(format!(
                "{} needs --graph",
                self.command.name()
            )));
        }
        if self.format == Format::Text && self.command != Command::Verify {
            return Err(CliError::Input(format!(
                "--format text is only available for verify; use csv or json for {}",
                self.command.name()
            )));
        }
        if self.q == Some(0) {
            return Err(CliError::Input("--q must be at least 1".into()));
        }
        Ok(())
    }

    /// The u-grid for a graph with parameter `q`, each value in `(0, 1/q)`.
    pub fn u_grid_for(&self, q: u32) -> Result<Vec<f64>, CliError> {
        let limit = 1.0 / q as f64;
        let grid = match &self.u_grid {
            Some(grid) => grid.clone(),
            None => vec![0.1 * limit, 0.25 * limit, 0.5 * limit],
        };
        if let Some(u) = grid.iter().find(|&&u| !(u > 0.0 && u < limit)) {
            return Err(CliError::Input(format!(
                "u = {u} outside (0, 1/q) = (0, {limit}) for q = {q}"
            )));
        }
        Ok(grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let config = RunConfig::new(Command::Verify);
        assert!(config.validate().is_ok());
        assert_eq!(config.format, Format::Text);
        assert_eq!(RunConfig::new(Command::Analyze).order, 8);
    }

    #[test]
    fn invalid_settings_are_input_errors() {
        let mut config = RunConfig::new(Command::Zeta);
        config.graph = Some(GraphSource::Builtin("k4".into()));
        config.tol = 0.0;
        assert_eq!(config.validate().unwrap_err().exit_code(), 2);
        config.tol = 1e-8;
        config.order = 0;
        assert!(config.validate().is_err());
        config.order = 4;
        config.times = vec![-1.0];
        assert!(config.validate().is_err());
        config.times = vec![1.0];
        assert!(config.validate().is_ok());
        config.graph = None;
        assert!(config.validate().is_err());
    }

    #[test]
    fn u_grid_domain() {
        let mut config = RunConfig::new(Command::Zeta);
        assert_eq!(config.u_grid_for(2).unwrap(), vec![0.05, 0.125, 0.25]);
        config.u_grid = Some(vec![0.1, 0.4]);
        assert!(config.u_grid_for(2).is_ok());
        assert!(config.u_grid_for(3).is_err());
    }

    #[test]
    fn graph_resolution() {
        assert_eq!(
            GraphSource::resolve("K4", None, 5).unwrap(),
            GraphSource::Builtin("k4".into())
        );
        assert_eq!(
            GraphSource::resolve("tree", Some(2), 5).unwrap(),
            GraphSource::Tree { q: 2, radius: 5 }
        );
        assert!(GraphSource::resolve("tree", None, 5).is_err());
        assert!(GraphSource::resolve("no-such-graph", None, 5).is_err());
    }
}

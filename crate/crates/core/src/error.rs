use alloc::string::String;

/// Errors raised by the numerical and combinatorial routines of this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("I_{order}({argument}) overflows f64; use the exponentially scaled variant")]
    Overflow { order: u32, argument: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("vertex {vertex} out of range for a graph with {vertices} vertices")]
    VertexOutOfRange { vertex: usize, vertices: usize },

    #[error("edge {edge} is fixed by its involution (half-loops are not allowed)")]
    HalfLoop { edge: usize },

    #[error("edge {edge}: involution is not consistent ({reason})")]
    BadInvolution { edge: usize, reason: &'static str },

    #[error("graph is disconnected: vertex {vertex} is not reachable from vertex 0")]
    Disconnected { vertex: usize },

    #[error(
        "graph is not regular: vertex {vertex} has degree {degree}, vertex 0 has degree {expected}"
    )]
    NotRegular {
        vertex: usize,
        degree: usize,
        expected: usize,
    },

    #[error("regular degree {degree} is too small; need degree q + 1 with q >= 1")]
    DegreeTooSmall { degree: usize },

    #[error("graph is not vertex transitive: no automorphism maps vertex {from} to vertex {to}")]
    NotVertexTransitive { from: usize, to: usize },

    #[error("vertex transitivity undecided: {vertices} vertices exceeds the search cap {cap}")]
    TransitivityUnknown { vertices: usize, cap: usize },

    #[error("enumeration length {length} exceeds the cap {cap}")]
    EnumerationCap { length: usize, cap: usize },

    #[error("operation needs a finite graph, but the input is a truncated infinite tree")]
    InfiniteGraph,

    #[error("inconsistent closed-geodesic counts at length {length}: {reason}")]
    InconsistentCounts { length: usize, reason: &'static str },

    #[error("quadrature did not converge: achieved error {achieved:e}, requested {requested:e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    #[error("ODE step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("u = {u} outside the convergence domain (0, {limit})")]
    OutOfDomain { u: f64, limit: f64 },

    #[error("log of non-positive quadratic factor {value:e} at u = {u}")]
    NonPositiveLogArgument { u: f64, value: f64 },

    #[error("{vertices} vertices exceeds the dense eigen-solve limit {cap}")]
    TooLargeForSpectral { vertices: usize, cap: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

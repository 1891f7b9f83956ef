use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polygon is self-intersecting: segments {0} and {1} cross")]
    SelfIntersecting(usize, usize),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("mesh file {path}: line {line}: {msg}")]
    MeshFormat { path: PathBuf, line: usize, msg: String },

    #[error("kernel evaluated at coincident points")]
    Singular,

    #[error("vector field: {0}")]
    Field(String),

    #[error("no coercivity guarantee available for the normal field")]
    NoCoercivityGuarantee,

    #[error("unsupported polynomial degree {0} (expected 0 or 1)")]
    UnsupportedDegree(usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("operator {0} requires a vector field")]
    MissingField(&'static str),

    #[error("{0}")]
    Unsupported(String),

    #[error("diagonal scaling entry {index} is not positive ({value:e})")]
    NonPositiveScaling { index: usize, value: f64 },

    #[error("GMRES stagnated after {iterations} iterations (relative residual {residual:e})")]
    Stagnation { iterations: usize, residual: f64 },

    #[error("GMRES did not reach tolerance {tol:e} in {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64, tol: f64 },

    #[error("GMRES residual {residual:e} at iteration {iteration} exceeds the certified bound {bound:e}")]
    ElmanBoundViolated { iteration: usize, residual: f64, bound: f64 },

    #[error("singular linear system")]
    SingularSystem,

    #[error("point lies on the boundary (distance {0:e})")]
    PointOnBoundary(f64),

    #[error("configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

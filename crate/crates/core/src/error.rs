use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix must have dimension at least 1")]
    EmptyMatrix,

    #[error("not Hermitian: asymmetry {residual:e} exceeds allowed {allowed:e}")]
    HermiticityViolation { residual: f64, allowed: f64 },

    #[error("not symmetric: entry ({row}, {col}) differs from its transpose")]
    SymmetryViolation { row: usize, col: usize },

    #[error("not unitary: max |U^H U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigensolver failed to converge on a {n}x{n} matrix")]
    ConvergenceFailure { n: usize },

    #[error("max eigenvalue {max_eigenvalue} would overflow exp; use log_trace_exp")]
    OverflowRisk { max_eigenvalue: f64 },

    #[error("input contains a non-finite value")]
    NonFiniteInput,

    #[error("function `{name}` expects {expected} arguments, got {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("unknown function `{0}` (expected lse, max, min, sum or pnorm:<p>)")]
    UnknownFunction(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("trial with seed {seed:#018x} failed: {source}")]
    Trial {
        seed: u64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

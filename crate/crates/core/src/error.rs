use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} has zero degree; the normalized Laplacian is undefined")]
    IsolatedVertex { vertex: usize },

    #[error("dense matrix of order {order} exceeds the configured cap of {cap}")]
    SizeOverflow { order: usize, cap: usize },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("a {rows}x{cols} matrix cannot be split into {m1}x{n1} blocks of size {m2}x{n2}")]
    BadFactorization {
        rows: usize,
        cols: usize,
        m1: usize,
        n1: usize,
        m2: usize,
        n2: usize,
    },

    #[error("recovered Kronecker factor is not symmetric and nonnegative (deviation {deviation:e})")]
    AsymmetricFactor { deviation: f64 },

    #[error("parameter {name} = {value} is out of range")]
    NonPositiveParam { name: &'static str, value: f64 },

    #[error("requested {requested} new edges but only {available} zero positions exist")]
    InsufficientZeros { requested: usize, available: usize },

    #[error("ring degree {k} is out of range for {n} vertices (need 2 <= k < n)")]
    DegreeOutOfRange { k: usize, n: usize },

    #[error("invalid similarity matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operator is identically zero")]
    ZeroOperator,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

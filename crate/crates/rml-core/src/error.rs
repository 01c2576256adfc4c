use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by instance parsing, model building and solving.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("monomial degree {degree} exceeds the enumeration cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("index sets are not a partition: {msg}")]
    InvalidPartition { msg: String },

    #[error("triple set is not proper: {msg}")]
    Improper { msg: String },

    #[error("domain mismatch: {msg}")]
    Domain { msg: String },

    #[error("size guard exceeded: {msg}")]
    SizeGuard { msg: String },

    #[error("construction error: {msg}")]
    Construction { msg: String },

    #[error("solver failed with status {status}; model dumped to {dump}")]
    Solver { status: String, dump: PathBuf },

    #[error("solver iteration limit {limit} exceeded; model dumped to {dump}")]
    IterationLimit { limit: usize, dump: PathBuf },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

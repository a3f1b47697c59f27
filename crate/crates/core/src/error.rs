use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse error classes, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Numeric,
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("n = {n} is not a perfect {dim}-th power; the lattice cannot tile the torus")]
    NotPerfectPower { n: usize, dim: usize },

    #[error(
        "vertex {vertex} is isolated and alpha = 0: the normalized Laplacian is singular (use alpha > 0)"
    )]
    IsolatedVertex { vertex: usize },

    #[error("matrix order {n} exceeds the dense eigensolver cap {cap}; use the circulant path or a smaller n")]
    CapExceeded { n: usize, cap: usize },

    #[error("circulant spectrum has imaginary residue {residue:e} at mode {mode}")]
    ImaginaryResidue { mode: usize, residue: f64 },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("unknown config keys: {}", .0.join(", "))]
    UnknownKeys(Vec<String>),

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidParameter { .. }
            | Error::NotPerfectPower { .. }
            | Error::DimensionMismatch { .. }
            | Error::Unsupported(_)
            | Error::UnknownKeys(_)
            | Error::Config(_)
            | Error::Json(_) => ErrorClass::Config,
            Error::IsolatedVertex { .. }
            | Error::CapExceeded { .. }
            | Error::ImaginaryResidue { .. }
            | Error::Eigensolver(_) => ErrorClass::Numeric,
            Error::Io { .. } | Error::Parse { .. } => ErrorClass::Io,
        }
    }
}

use thiserror::Error;

use crate::eigensolver::SolveReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("unsupported spin pattern: {0}")]
    UnsupportedPattern(String),

    #[error("site {site} is out of range for a lattice of {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("|m| = {m} exceeds spin magnitude {s}")]
    LadderDomain { s: String, m: String },

    #[error("configuration does not belong to this lattice: {0}")]
    InvalidConfiguration(String),

    #[error("operator/vector mismatch: {0}")]
    Mismatch(String),

    #[error("sector dimension {dim} exceeds the dense limit {limit}")]
    DenseLimit { dim: usize, limit: usize },

    #[error("empty magnetization sector")]
    EmptySector,

    #[error("eigensolver did not converge: {report}")]
    NoConvergence { report: SolveReport },

    #[error("{0}")]
    OutOfRange(String),

    #[error("duplicate site {0} in site list")]
    DuplicateSite(usize),

    #[error("invalid partial-transpose mask: {0}")]
    InvalidMask(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

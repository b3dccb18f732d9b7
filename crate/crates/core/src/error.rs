use crate::ring::Degree;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum Error {
    #[error("operands belong to different ring instances ({0} vs {1})")]
    InstanceMismatch(String, String),
    #[error("unsupported coefficient domain: {0}")]
    UnsupportedDomain(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: Degree, found: Degree },
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("no partition of unity of type ({0}, {neg})", neg = -*.0)]
    NoPartition(Degree),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("not a chain complex: {0}")]
    NotAComplex(String),
    #[error("hypercube faces do not commute: {0}")]
    NonCommutingFaces(String),
    #[error("not a chain map: {0}")]
    NotAChainMap(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("operator does not raise the filtration; witness degree {0}")]
    NotRaising(Degree),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

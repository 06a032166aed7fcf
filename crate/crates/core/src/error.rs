use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field order {0}: supported orders are 2,3,4,5,7,8,9,11,13,16")]
    UnsupportedOrder(u32),
    #[error("ambient mismatch: ({n1}, q={q1}) vs ({n2}, q={q2})")]
    AmbientMismatch { n1: u32, q1: u32, n2: u32, q2: u32 },
    #[error("enumeration cap exceeded: {count} subspaces > cap {cap}")]
    EnumerationCap { count: u128, cap: u128 },
    #[error("search vertex cap exceeded: {count} vertices > cap {cap}")]
    VertexCap { count: usize, cap: usize },
    #[error("sigma must be positive")]
    NonpositiveSigma,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("search requires an exact (rational) sigma")]
    InexactSearchWeights,
    #[error("certificate requires sigma strictly below the threshold {threshold}")]
    NotBelowThreshold { threshold: String },
}

pub type Result<T> = std::result::Result<T, Error>;

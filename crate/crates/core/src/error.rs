use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge {index} has {found} vertices, expected {expected}")]
    WrongArity {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("edge {index} repeats vertex {vertex}")]
    RepeatedVertex { index: usize, vertex: u32 },
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: u32, n: u32 },
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<u32>),
    #[error("invalid uniformity r = {r} for n = {n}")]
    InvalidUniformity { n: u32, r: usize },
    #[error("uniformity mismatch: {left} vs {right}")]
    UniformityMismatch { left: usize, right: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("set is not progression-free: {0}")]
    NotProgressionFree(String),
    #[error("embedding rejected: max element {max} does not satisfy {factor}*max < t = {t}")]
    EmbeddingRejected { max: u64, t: u64, factor: u64 },

    #[error("template modulus t = {t} must be a prime greater than r - 1 = {}", r - 1)]
    BadModulus { t: u64, r: usize },
    #[error("template difference set is not verified for uniformity {r}")]
    UnverifiedDifferenceSet { r: usize },
    #[error("template certification failed: {0}")]
    CertificationFailed(String),
    #[error("template is not verified (edge count {edges} exceeds verify cap {cap})")]
    UnverifiedTemplate { edges: usize, cap: usize },

    #[error("triangle enumeration cap of {cap} exceeded")]
    TriangleCapExceeded { cap: u64 },
    #[error("node budget of {budget} exhausted; best kept {best_kept}, upper bound {upper_bound}")]
    BudgetExhausted {
        budget: u64,
        best_kept: usize,
        upper_bound: usize,
    },
    #[error("census work limit of {limit} nodes exceeded")]
    WorkLimitExceeded { limit: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Budget and cap exhaustion are resource outcomes, distinct from bad input.
    pub fn is_exhaustion(&self) -> bool {
        matches!(
            self,
            Error::TriangleCapExceeded { .. }
                | Error::BudgetExhausted { .. }
                | Error::WorkLimitExceeded { .. }
        )
    }
}

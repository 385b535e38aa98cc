use thiserror::Error;

/// Unified error type for the whole crate.
///
/// Shape mismatches inside matrix arithmetic are programming errors and
/// panic with both shapes in the message; everything a caller can trigger
/// with data (files, group tables, module actions, resource caps, failed
/// stabilization certificates) comes back as one of these.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime (supported scalars are prime fields F_p with p < 2^16)")]
    NotPrime(u64),

    #[error("basis rows are linearly dependent ({rows} rows of length {cols}, rank {rank})")]
    DependentBasis { rows: usize, cols: usize, rank: usize },

    #[error("group table is invalid: {0}")]
    GroupValidation(String),

    #[error("subgroup is invalid: {0}")]
    SubgroupValidation(String),

    #[error("module action is invalid: {0}")]
    ModuleValidation(String),

    #[error("map is not equivariant: conflict at group element {element} (position {row},{col})")]
    NotEquivariant { element: usize, row: usize, col: usize },

    #[error("matrix dimension {dim} exceeds the configured cap {cap} (set TATEKIT_MAX_DIM to raise it)")]
    DimensionCap { dim: usize, cap: usize },

    #[error("stabilization certificate failed: {0}")]
    Certificate(String),

    #[error("exactness check failed: {0}")]
    Exactness(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
}

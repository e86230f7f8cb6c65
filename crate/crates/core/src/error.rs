use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("slot mismatch: {0}")]
    SlotMismatch(String),

    #[error("empty generator set")]
    EmptyInput,

    #[error("generators do not span the ambient space (rank {rank} < {dim})")]
    NotFullDimensional { rank: usize, dim: usize },

    #[error("generated cone contains a line")]
    ContainsLine,

    #[error("zero generator")]
    ZeroGenerator,

    #[error("functional is not strictly positive on ray {ray}")]
    PhiNotInterior { ray: usize },

    #[error("point is not in the interior of the maximal tensor product")]
    NotInterior,

    #[error("level k must be at least 1")]
    InvalidLevel,

    #[error("too many facets for subset enumeration: {0} > {max}", max = crate::polytope::MAX_ENUMERATED_FACETS)]
    TooManyFacets(usize),

    #[error("operator is not symmetric")]
    NotSymmetric,

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("certificate failed verification: {0}")]
    Certificate(String),

    #[error("claim failed: {0}")]
    ClaimFailed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

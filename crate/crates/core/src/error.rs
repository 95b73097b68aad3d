use thiserror::Error;

/// Errors raised by the symbolic and numeric pipelines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("inverse of a non-unit: {0}")]
    NonUnit(String),
    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: u32, right: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("series has a nonzero constant term where a nilpotent one is required")]
    NotNilpotentSeries,
    #[error("Birkhoff factorization needs an identity constant term: {0}")]
    NonIdentityConstant(String),
    #[error("metric coefficient depends on z at (n, m) = ({n}, {m})")]
    ZDependence { n: u32, m: u32 },
    #[error("metric has a nonzero off-diagonal coefficient at (n, m) = ({n}, {m})")]
    OffDiagonal { n: u32, m: u32 },
    #[error("singular linear system at order {order}: rank {rank} < {unknowns}")]
    SingularSystem {
        order: usize,
        rank: usize,
        unknowns: usize,
    },
    #[error("inconsistent linear system at order {order}")]
    InconsistentSystem { order: usize },
    #[error("hard Lefschetz fails: {0}")]
    HardLefschetz(String),
    #[error("operator is not nilpotent")]
    NotNilpotent,
    #[error("step size underflow at x = {x}")]
    StepSizeUnderflow { x: f64 },
    #[error("trajectory diverged at x = {x}")]
    Divergence { x: f64 },
    #[error("integration did not converge: {0}")]
    NonConvergent(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised anywhere in the simulation stack.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is numerically rank deficient (smallest/largest singular value ratio {ratio:.3e})")]
    RankDeficient { ratio: f64 },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("operation requires at least one subspace")]
    EmptyList,

    #[error("matrix is not Hermitian (relative asymmetry {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("invalid principal angles: {0}")]
    InvalidAngles(String),

    #[error("invalid network configuration: {0}")]
    InvalidConfig(String),

    #[error("assignment infeasible: {users} receivers for {transmitters} transmitters")]
    InfeasibleAssignment { users: usize, transmitters: usize },

    #[error("cost matrix entry ({row}, {col}) is not finite")]
    NonFiniteCost { row: usize, col: usize },

    #[error("brute-force assignment limited to N <= 10, K <= 5 (got {rows}x{cols})")]
    TooLarge { rows: usize, cols: usize },

    #[error("scheme {scheme} does not match channel framework {framework}")]
    FrameworkMismatch { scheme: String, framework: String },

    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),

    #[error("invalid experiment: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

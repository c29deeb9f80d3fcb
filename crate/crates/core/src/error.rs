use alloc::string::String;

/// Errors raised by the operator-algebra routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator or vector contains a non-finite entry")]
    NonFinite,

    #[error("operator is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("operator is not positive (minimum eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("not a density operator: {0}")]
    NotDensity(String),

    #[error("basis is not orthonormal or incomplete: {0}")]
    InvalidBasis(String),

    #[error("invalid temperature {0}; use the zero-temperature limit explicitly")]
    InvalidTemperature(f64),

    #[error("levels {n} and {m} are degenerate")]
    DegeneratePair { n: usize, m: usize },

    #[error("level {0} is out of range")]
    LevelOutOfRange(usize),

    #[error("level {0} is undefined (vanishing weight)")]
    UndefinedLevel(usize),

    #[error("level {0} is not an interior level")]
    NotInterior(usize),

    #[error("action profile has not been unwrapped")]
    NotUnwrapped,

    #[error("bracketing levels have equal energies")]
    DegenerateEnergies,

    #[error("at least {needed} defined levels are required, found {found}")]
    InsufficientLevels { needed: usize, found: usize },

    #[error("action gradient never changes sign")]
    NoStationaryPoint,

    #[error("time grid is empty")]
    EmptyGrid,

    #[error("non-finite time or step {0}")]
    InvalidTime(f64),

    #[error("overlap between a={a} and b={b} vanishes (|<b|a>| = {magnitude:e})")]
    VanishingOverlap { a: usize, b: usize, magnitude: f64 },

    #[error("pre- and post-conditions are orthogonal (|<b|a>| = {magnitude:e})")]
    OrthogonalConditions { magnitude: f64 },

    #[error("invalid coarse-graining window {0}")]
    InvalidWindow(f64),

    #[error("POVM has no outcomes")]
    EmptyPovm,

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("no estimate for outcome '{0}'")]
    MissingEstimate(String),

    #[error("probability {0} lies outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("state is not an eigenstate of the operator (residual {residual:e})")]
    NotEigenstate { residual: f64 },

    #[error("non-positive parameter {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse grouping used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Precondition,
    Numerical,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Input => 2,
            ErrorClass::Precondition => 3,
            ErrorClass::Numerical => 4,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("variable index {index} out of range for d = {d}")]
    VariableOutOfRange { index: usize, d: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("conjugating matrix is numerically singular (condition number {cond:e})")]
    SingularConjugator { cond: f64 },

    #[error("size cap exceeded: {requested} > {cap}")]
    SizeCap { requested: usize, cap: usize },

    #[error("tuple is not pure: joint spectral radius {rho} is not below 1")]
    NotPure { rho: f64 },

    #[error("tuple is not irreducible")]
    NotIrreducible,

    #[error("joint spectral radius {rho} is not 1 within tolerance")]
    NotUnitRadius { rho: f64 },

    #[error("Perron eigenvector extraction failed: {0}")]
    PerronFailure(String),

    #[error("decomposition failed: {0}")]
    DecompositionFailure(String),

    #[error("cutoff {cutoff} is below polynomial degree {degree}")]
    CutoffBelowDegree { cutoff: usize, degree: usize },

    #[error("ideal is not homogeneous")]
    NonHomogeneousSpec,

    #[error("{0} is not a primitive root of unity")]
    NotRootOfUnity(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            Syntax { .. }
            | VariableOutOfRange { .. }
            | DimensionMismatch(_)
            | InvalidInput(_)
            | Io(_)
            | Json(_) => ErrorClass::Input,
            SingularConjugator { .. }
            | SizeCap { .. }
            | NotPure { .. }
            | NotIrreducible
            | NotUnitRadius { .. }
            | CutoffBelowDegree { .. }
            | NonHomogeneousSpec
            | NotRootOfUnity(_) => ErrorClass::Precondition,
            PerronFailure(_) | DecompositionFailure(_) => ErrorClass::Numerical,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        use Error::*;
        match self {
            Syntax { .. } => "syntax",
            VariableOutOfRange { .. } => "variable-out-of-range",
            DimensionMismatch(_) => "dimension-mismatch",
            InvalidInput(_) => "invalid-input",
            SingularConjugator { .. } => "singular-conjugator",
            SizeCap { .. } => "size-cap",
            NotPure { .. } => "not-pure",
            NotIrreducible => "not-irreducible",
            NotUnitRadius { .. } => "not-unit-radius",
            PerronFailure(_) => "perron-failure",
            DecompositionFailure(_) => "decomposition-failure",
            CutoffBelowDegree { .. } => "cutoff-below-degree",
            NonHomogeneousSpec => "non-homogeneous-spec",
            NotRootOfUnity(_) => "not-root-of-unity",
            Io(_) => "io",
            Json(_) => "json",
        }
    }
}

use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {0} is odd; a complex structure needs an even dimension")]
    OddDimension(usize),

    #[error("dimension {0} is too small (need at least {1})")]
    DimensionTooSmall(usize, usize),

    #[error("basis is not orthonormal (Gram deviation {0:e})")]
    NonOrthonormalBasis(f64),

    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not skew-symmetric (residual {0:e})")]
    NotSkew(f64),

    #[error("matrix is not symmetric (residual {0:e})")]
    NotSymmetric(f64),

    #[error("not a complex structure: {0}")]
    NotComplexStructure(String),

    #[error("vector is not a unit vector (norm {0})")]
    NotUnit(f64),

    #[error("vectors are not orthonormal (Gram deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("tau/A pairing violates the normalization convention: {0}")]
    ConventionViolation(String),

    #[error("no eigenvalue of multiplicity >= {needed} in the Jacobi spectrum {spectrum:?}")]
    NoDominantEigenvalue { needed: usize, spectrum: Vec<f64> },

    #[error("two distinct Jacobi eigenvalues {0} and {1}; kappa is ambiguous from one direction in dimension 3")]
    AmbiguousKappa(f64, f64),

    #[error("per-direction kappa values disagree ({0} vs {1})")]
    InconsistentKappa(f64, f64),

    #[error("tensor is not almost isotropic: {0}")]
    NotAlmostIsotropic(String),

    #[error("rank-one parts carry opposite signs; no single tau exists")]
    InconsistentTau,

    #[error("could not resolve column signs of A (relative residual {0:e})")]
    SignResolutionFailure(f64),

    #[error("tensor fails the Kähler symmetry (residual {0:e})")]
    NotKahler(f64),

    #[error("Kähler structure violated: {0}")]
    StructureViolation(String),

    #[error("operator is zero")]
    ZeroOperator,

    #[error("no sample carries a tangent vector")]
    EmptySamples,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("parse error: {0}")]
    ParseError(String),

    #[error("unsupported schema version {0}")]
    SchemaVersionUnsupported(u32),

    #[error("tensor violates the {identity} identity (residual {residual:e})")]
    SymmetryViolation { identity: &'static str, residual: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

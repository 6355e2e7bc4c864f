use alloc::string::String;

/// Every failure mode of the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:.3e} > tol {tol:.3e})")]
    NonHermitianInput { residual: f64, tol: f64 },
    #[error("eigenvalue {min_eigenvalue:.3e} is too small for log or a negative power")]
    SingularForLog { min_eigenvalue: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("operator is singular or ill-conditioned (condition number {condition:.3e})")]
    SingularOperator { condition: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis is real-linearly dependent (real rank {rank} < {vectors} vectors)")]
    DegenerateBasis { rank: usize, vectors: usize },
    #[error("subspace is not standard")]
    NotStandard,
    #[error("Hilbert space dimension {dim} exceeds cap {cap}")]
    DimensionCapExceeded { dim: usize, cap: usize },
    #[error("vector is not cyclic (rank {rank} < {dim})")]
    NotCyclic { rank: usize, dim: usize },
    #[error("vector is not separating (rank {rank} < algebra dimension {dim})")]
    NotSeparating { rank: usize, dim: usize },
    #[error("mode count {modes} outside 1..={cap}")]
    ModeCapExceeded { modes: usize, cap: usize },
    #[error("mode index {mode} out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },
    #[error("operator is not homogeneous under the grading (residual {residual:.3e})")]
    WrongParity { residual: f64 },
    #[error("mode regions overlap")]
    OverlappingRegions,
    #[error("covariance is not faithful (eigenvalue {eigenvalue:.3e} within margin of 0 or 1)")]
    NotFaithful { eigenvalue: f64 },
    #[error("antiunitary does not preserve the grading and vacuum")]
    InvalidAntiunitary,
    #[error("axis {axis} invalid for spacetime dimension {dim}")]
    BadAxis { axis: usize, dim: usize },
    #[error("plane ({i}, {j}) invalid for spacetime dimension {dim}")]
    BadPlane { i: usize, j: usize, dim: usize },
    #[error("malformed cover word: {0}")]
    MalformedWord(String),
    #[error("malformed region: {0}")]
    MalformedRegion(String),
    #[error("unsupported dimension {0}")]
    BadDimension(usize),
    #[error("unsupported spin configuration: {0}")]
    UnsupportedSpin(String),
    #[error("bad wedge: {0}")]
    BadWedge(String),
    #[error("wedges are not orthogonal")]
    NonOrthogonalWedges,
    #[error("bad sample configuration: {0}")]
    BadSeed(String),
}

pub type Result<T> = core::result::Result<T, Error>;

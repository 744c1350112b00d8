use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not Hermitian (max |m - m†| = {residual:e})")]
    NonHermitianInput { residual: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal mass {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },
    #[error("unsupported matrix dimension {0}")]
    UnsupportedDimension(usize),
    #[error("{0} entries do not form a square matrix")]
    NotSquare(usize),
    #[error("rows have unequal lengths")]
    Ragged,
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("ket norm is {norm}, expected 1")]
    InvalidKet { norm: f64 },
    #[error("ket has {got} amplitudes but the system dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polarization epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),
    #[error("invalid spin {0:?}: expected a positive half-integer such as \"3/2\"")]
    InvalidSpin(String),
    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),
    #[error("not a deviation matrix: {0}")]
    NotDeviationMatrix(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RedfieldError {
    #[error("time must be non-negative, got {0} ms")]
    NegativeTime(f64),
    #[error("relaxation time {name} must be positive and finite, got {value}")]
    InvalidTime { name: &'static str, value: f64 },
    #[error("the quadrupolar propagator is defined for 4x4 matrices, got {0}x{0}")]
    WrongDimension(usize),
    #[error("Δ is not Hermitian and traceless: {0}")]
    InvalidDelta(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormalizeError {
    #[error("σ is zero (max entry {0:e}); it carries no polarization")]
    DegenerateSigma(f64),
    #[error("α must be positive, got {0}")]
    InvalidAlpha(f64),
    #[error("normalized matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e}); α = {alpha:e} is too small")]
    NotPsd { alpha: f64, min_eigenvalue: f64 },
    #[error("σ0 does not match ε(|ψ⟩⟨ψ| − 1/N) (mismatch {0:e})")]
    InconsistentInitialState(f64),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObservableError {
    #[error("invalid two-qubit state: {0}")]
    InvalidState(String),
    #[error("matrix is not of X form (largest non-X entry {0:e})")]
    NotXState(f64),
    #[error("phase-point grid supports even dimensions 2..=8, got {0}")]
    UnsupportedDimension(usize),
    #[error("state dimension {state} does not match grid dimension {grid}")]
    DimensionMismatch { state: usize, grid: usize },
    #[error("Wigner value at (q={q}, p={p}) has imaginary residue {residue:e}")]
    ComplexWigner { q: usize, p: usize, residue: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A module failure inside a trajectory computation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Redfield(#[from] RedfieldError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error(transparent)]
    Observable(#[from] ObservableError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("invalid scenario: {0}")]
    InvalidConfig(String),
    #[error("at t = {t_ms} ms: {source}")]
    AtTime {
        t_ms: f64,
        #[source]
        source: PipelineError,
    },
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: parse error{}: {message}", .record.map(|r| format!(" in record {r}")).unwrap_or_default())]
    Parse {
        path: String,
        record: Option<usize>,
        message: String,
    },
    #[error("{path}: record {record} (t = {t_ms} ms) rejected: {reason}")]
    NonPhysicalRecord {
        path: String,
        record: usize,
        t_ms: f64,
        reason: String,
    },
    #[error("nothing to export: trajectory is empty")]
    EmptyTrajectory,
}

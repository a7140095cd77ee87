use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Fock dimension {dim}: need at least 2")]
    InvalidDimension { dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Fock truncation too small: leakage {leakage:e} exceeds {threshold:e} at dim {dim}")]
    TruncationTooSmall {
        leakage: f64,
        threshold: f64,
        dim: usize,
    },

    #[error("operator is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("time step must be positive, got {dt}")]
    NonPositiveStep { dt: f64 },

    #[error("Hermitian eigendecomposition failed (dim {dim}, max |entry| {max_entry:e})")]
    EigenFailure { dim: usize, max_entry: f64 },

    #[error("ill-conditioned logical basis: |<-a|a>| = {overlap} >= 0.5")]
    IllConditionedBasis { overlap: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("time {t} outside the protocol window [0, {tau}]")]
    TimeOutOfRange { t: f64, tau: f64 },

    #[error("counterdiabatic term is singular at theta = {theta}, chi = {chi}")]
    SingularCounterdiabatic { theta: f64, chi: f64 },

    #[error("degenerate two-level Hamiltonian (delta_z = omega = 0)")]
    DegenerateHamiltonian,

    #[error("degeneracy lies on the parameter manifold (chi = {chi})")]
    OnManifoldDegeneracy { chi: f64 },

    #[error("zero ramp velocity at interior sample {index} (theta = {theta})")]
    ZeroVelocity { index: usize, theta: f64 },

    #[error("insufficient sampling: {points} points, need at least {required}")]
    InsufficientSampling { points: usize, required: usize },

    #[error("degenerate Bloch readout at sample {index}: vector length {length:e}")]
    DegenerateReadout { index: usize, length: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

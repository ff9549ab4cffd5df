use crate::numerics::C64;
use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is numerically singular (rcond = {rcond:.3e})")]
    SingularMatrix { rcond: f64 },
    #[error("eigensolver failed to converge (lapack info = {info})")]
    ConvergenceFailure { info: i32 },
    #[error("Sylvester spectra overlap: smallest eigenvalue gap {gap:.3e}")]
    SpectraOverlap { gap: f64 },
    #[error("leading polynomial coefficient is degenerate")]
    DegenerateLeadingCoefficient,
    #[error("time step too large: dt*|H| = {0:.3e} exceeds the RK4 stability cap")]
    StepTooLarge(f64),
    #[error("energy {energy} is resonant with an auxiliary-cluster eigenvalue")]
    ResonantEnergy { energy: C64 },
    #[error("auxiliary block is numerically singular")]
    SingularAuxiliary,
    #[error("target hopping equals the existing one; nothing to synthesize")]
    NoSynthesisNeeded,
    #[error("auxiliary cluster is not dissipative: eigenvalue {eigenvalue} has Im >= 0")]
    NonDissipativeAuxiliary { eigenvalue: C64 },
    #[error("degenerate bond: |theta + iG| below tolerance")]
    DegenerateBond,
    #[error("scattering linear system is singular")]
    SingularScatteringSystem,
    #[error("zero vector")]
    ZeroVector,
    #[error("scan range does not bracket the transition")]
    NoBracket,
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mode dimension {0}: every mode needs at least two Fock levels")]
    InvalidDimension(usize),
    #[error("mode index {index} out of range for a space with {modes} modes")]
    ModeIndexOutOfRange { index: usize, modes: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operators act on different Fock spaces")]
    SpaceMismatch,
    #[error("Hamiltonian is not Hermitian (max |H - H^dagger| = {0:e})")]
    NonHermitian(f64),
    #[error("negative decay rate {0}")]
    NegativeRate(f64),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("steady state is degenerate or the solve failed (residual {residual:e}, {detail})")]
    DegenerateSteadyState { residual: f64, detail: String },
    #[error("g2 is undefined at zero occupation")]
    UndefinedCorrelation,
    #[error("step size underflow at t = {t} (h = {step:e})")]
    StepSizeUnderflow { t: f64, step: f64 },
    #[error("integrator exceeded {0} steps without reaching the end of the grid")]
    ToleranceFailure(usize),
    #[error("time grid must be strictly increasing")]
    InvalidTimeGrid,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

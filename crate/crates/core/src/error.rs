use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("state vector has (near) zero norm")]
    ZeroVector,
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("matrix is not Hermitian (max |A - A^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("Hermitian eigensolver did not converge")]
    EigensolveFailure,
    #[error("operators do not commute (||[A,B]|| = {norm:e}, tolerance {tol:e})")]
    DoNotCommute { norm: f64, tol: f64 },
    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("wave packet too narrow for the grid: sigma = {sigma}, dx = {dx}")]
    PacketTooNarrow { sigma: f64, dx: f64 },
    #[error("wave function support reaches the grid boundary")]
    PacketNearBoundary,
    #[error("grid too narrow for Hermite function {k}: boundary amplitude {amplitude:e}")]
    GridTooNarrow { k: usize, amplitude: f64 },
    #[error("time step violates the stability guard: {0}")]
    StabilityViolation(String),
    #[error("need at least {needed} trajectory samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("no probability reached the screen (transmitted {transmitted:e})")]
    NoTransmission { transmitted: f64 },
    #[error("invalid angular momentum 2j = {0} (must be 1..=40)")]
    InvalidJ(u32),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

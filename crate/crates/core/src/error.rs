use thiserror::Error;

/// Errors raised by graph construction, classification, bases and sweeps.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order n = {n} is too small (need n >= 3)")]
    OrderTooSmall { n: u64 },

    #[error("order n = {n} exceeds the configured cap of {cap}")]
    OrderTooLarge { n: u64, cap: u64 },

    #[error("offset {offset} out of range for n = {n} (need 1 <= a <= n/2)")]
    OffsetOutOfRange { n: u64, offset: u64 },

    #[error("offsets must be strictly increasing, got {offsets:?}")]
    NotStrictlyIncreasing { offsets: Vec<u64> },

    #[error("offset list is empty")]
    NoOffsets,

    #[error("n = {n} is not prime")]
    NotPrime { n: u64 },

    #[error("exact arithmetic needs n < 2^32, got {n}")]
    ArithmeticOverflow { n: u64 },

    #[error("expected a 4-regular spec with a1 < a2, got {offsets:?}")]
    InvalidPair { offsets: Vec<u64> },

    #[error("index {index} out of range for order {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("real eigenbases need odd order, got n = {n}")]
    EvenOrderUnsupported { n: usize },

    #[error("sweep orders must be odd, got n = {n}")]
    EvenOrder { n: usize },

    #[error("sweep orders must be strictly increasing ({prev} then {next})")]
    OrdersNotIncreasing { prev: usize, next: usize },

    #[error("expected {expected} angles, got {got}")]
    ThetaLengthMismatch { expected: usize, got: usize },

    #[error("angle {theta} outside [0, pi/2]")]
    ThetaOutOfRange { theta: f64 },

    #[error("density p = {p} outside the admissible range {range}")]
    DensityOutOfRange { p: f64, range: &'static str },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("vector norm {norm} is not 1 within 1e-10")]
    NotNormalized { norm: f64 },

    #[error("Jacobi did not converge in {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("spectral gap audit failed down to gap_tol {gap_tol:e}")]
    AuditFailed { gap_tol: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for failures of a numerical procedure rather than of input validation.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::AuditFailed { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

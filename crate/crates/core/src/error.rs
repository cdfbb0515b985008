use thiserror::Error;

/// Errors raised by space construction, operator algebra, encoding maps,
/// measurements, and protocol runs.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("mode count {0} out of range (1..=12)")]
    ModeCountOutOfRange(usize),

    #[error("Majorana index {index} out of range (1..={max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("Majorana indices must be distinct: {0:?}")]
    IndexClash(Vec<usize>),

    #[error("invalid pairing: {0}")]
    InvalidPairing(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("space has {actual} modes, expected {expected}")]
    WrongSpaceSize { expected: usize, actual: usize },

    #[error("sector leakage {leakage:.3e} exceeds tolerance {tol:.1e}")]
    SectorLeakage { leakage: f64, tol: f64 },

    #[error("unknown gate name `{0}`")]
    UnknownGate(String),

    #[error("gate `{gate}` is not defined in the {sector} sector")]
    UndefinedSector { gate: String, sector: String },

    #[error("observable is not an involution (deviation {0:.3e})")]
    NotInvolutive(f64),

    #[error("forced outcome {outcome:+} for `{label}` has probability {prob:.3e} < 1e-12")]
    ForcedOutcomeUnreachable {
        label: String,
        outcome: i8,
        prob: f64,
    },

    #[error("forced outcome sequence exhausted at measurement `{0}`")]
    ForcedSequenceExhausted(String),

    #[error("state leaks outside the computational span by {0:.3e}")]
    DecodeLeakage(f64),

    #[error("state is not in the even-parity sector (deviation {0:.3e})")]
    NotEvenSector(f64),

    #[error("L2 correction fails the basis-mapping check (leakage {0:.3e})")]
    BadCorrection(f64),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid divisibility chain: {0}")]
    InvalidChain(String),

    #[error("value {value} exceeds chain capacity {capacity}")]
    CapacityExceeded { value: u64, capacity: u64 },

    #[error("digit {digit} at position {position} is not below radix {radix}")]
    DigitOutOfRange { position: usize, digit: u64, radix: u64 },

    #[error("exact arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid cylinder: residue {residue} modulo {modulus}")]
    InvalidCylinder { residue: u64, modulus: u64 },

    #[error("invalid periodic set: {0}")]
    InvalidPeriodicSet(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no chain modulus up to {largest} keeps the gap below {epsilon} on the window")]
    NoModulusFound { epsilon: f64, largest: u64 },

    #[error("beatty floor at n = {n} cannot be certified with the stored approximation")]
    PrecisionExhausted { n: u64 },

    #[error("window {window} is smaller than the modulus {modulus}")]
    WindowTooSmall { window: u64, modulus: u64 },

    #[error("membership is only decidable up to {limit}, window {window} requested")]
    WindowUndecidable { window: u64, limit: u64 },

    #[error("distribution support is unbounded")]
    UnboundedSupport,

    #[error("{requested} pairwise coprime chains requested, {available} available")]
    InsufficientCoprimeChains { requested: usize, available: usize },

    #[error("i/o failure: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by malformed input rather than by the computation.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidChain(_)
                | Error::Parse(_)
                | Error::InvalidArgument(_)
                | Error::InvalidCylinder { .. }
                | Error::InvalidPeriodicSet(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

use thiserror::Error;

/// Errors raised by the library. Measure-invariant violations are reported
/// as data (see [`crate::measure::Violation`]), not through this type.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("symbol {symbol} out of range for alphabet of size {size}")]
    SymbolOutOfRange { symbol: usize, size: usize },

    #[error("word {0} is not admissible")]
    Inadmissible(String),

    #[error("cylinder depth {requested} exceeds table depth {depth}")]
    DepthExceeded { requested: usize, depth: usize },

    #[error("table measure has no value for admissible word {0}")]
    MissingCylinder(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("operation requires a Markov measure")]
    NotMarkov,
}

pub type Result<T> = std::result::Result<T, Error>;

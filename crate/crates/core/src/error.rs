use thiserror::Error;

use crate::slp::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid SLP: {0}")]
    InvalidSlp(ValidationReport),
    #[error("text too short: need at least 2 symbols, got {0}")]
    TextTooShort(usize),
    #[error("symbol {symbol} outside alphabet of size {sigma}")]
    SymbolOutOfAlphabet { symbol: u32, sigma: u32 },
    #[error("bad magic")]
    BadMagic,
    #[error("truncated payload: {0}")]
    Truncated(String),
    #[error("{0} trailing bytes after payload")]
    TrailingBytes(usize),
    #[error("invalid grammar: {0}")]
    InvalidGrammar(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("expansion length overflows 64 bits")]
    LengthOverflow,
    #[error("symbol {0} does not fit in a byte")]
    NotByte(u32),
    #[error("parameter out of range: {0}")]
    Param(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Malformed or invalid input data (files, SLPs, texts).
    pub fn is_format(&self) -> bool {
        matches!(
            self,
            Error::InvalidSlp(_)
                | Error::TextTooShort(_)
                | Error::SymbolOutOfAlphabet { .. }
                | Error::BadMagic
                | Error::Truncated(_)
                | Error::TrailingBytes(_)
                | Error::InvalidGrammar(_)
                | Error::Parse { .. }
                | Error::LengthOverflow
                | Error::NotByte(_)
                | Error::Param(_)
        )
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

macro_rules! ensure_invariant {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::Invariant(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure_invariant;

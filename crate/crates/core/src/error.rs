use alloc::string::String;
use core::fmt;

/// Errors raised by the constructions in this crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A point or parameter lies outside the admissible range.
    Range(String),
    /// An input violates a structural precondition (not prefix-closed,
    /// not injective, unsorted, ...).
    Invalid(String),
    /// A search ran out of its budget before reaching a decision.
    Budget(String),
    /// The hypothesis of the selected decoder case does not hold.
    CaseMismatch(String),
    /// A checked invariant failed; this indicates a bug or a bad instance.
    InvariantViolation(String),
    /// Text input could not be parsed.
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Range(m) => write!(f, "out of range: {m}"),
            Error::Invalid(m) => write!(f, "invalid input: {m}"),
            Error::Budget(m) => write!(f, "budget exhausted: {m}"),
            Error::CaseMismatch(m) => write!(f, "case mismatch: {m}"),
            Error::InvariantViolation(m) => write!(f, "invariant violated: {m}"),
            Error::Parse(m) => write!(f, "parse error: {m}"),
        }
    }
}

impl core::error::Error for Error {}

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::Error::$kind(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;

use alloc::string::String;
use core::fmt;

/// Errors raised by the exact and numeric layers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A cyclotomic order above [`crate::MAX_ORDER`] was requested.
    OrderTooLarge(u64),
    /// `embed` target is not a multiple of the source order.
    OrderMismatch { from: u32, to: u32 },
    DivisionByZero,
    /// Two circles were expected to live at the same point.
    DifferentPoints,
    /// A Stokes count that must be an integer was not (internal bug).
    NonInteger(String),
    /// Rank bookkeeping failed (parent class or unmodify).
    IncompatibleRank { needed: u64, available: u64 },
    /// A transform produced data that is not compatible.
    Incompatible(String),
    /// Some operation has no meaning on its input.
    Undefined(String),
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OrderTooLarge(n) => {
                write!(f, "cyclotomic order {} exceeds the cap {}", n, crate::MAX_ORDER)
            }
            Error::OrderMismatch { from, to } => {
                write!(f, "cannot embed order {} into order {}", from, to)
            }
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::DifferentPoints => f.write_str("circles live at different points"),
            Error::NonInteger(s) => write!(f, "expected an integer count, got {}", s),
            Error::IncompatibleRank { needed, available } => {
                write!(f, "rank {} needed but only {} available", needed, available)
            }
            Error::Incompatible(s) => write!(f, "incompatible data: {}", s),
            Error::Undefined(s) => write!(f, "undefined: {}", s),
            Error::InvalidInput(s) => write!(f, "invalid input: {}", s),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

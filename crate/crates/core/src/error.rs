use core::fmt;

/// Errors raised by constructors and operations in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two inputs that must agree in length do not.
    DimensionMismatch { expected: usize, actual: usize },
    /// A scalar field is outside its admissible range.
    InvalidValue { field: &'static str, value: f64 },
    /// A sequence that must be nonempty (or contain a positive entry) is not.
    Empty { what: &'static str },
    /// The firm has already run through its configured period budget.
    PeriodOverflow { period: usize, max: usize },
    /// A period index beyond the scenario horizon was requested.
    OutOfRange { index: usize, len: usize },
    /// The requested check is only defined for serial occupation durations.
    InapplicableRegime { parallelism: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, actual } => {
                write!(f, "dimension mismatch: expected {expected}, got {actual}")
            }
            Error::InvalidValue { field, value } => {
                write!(f, "invalid value for `{field}`: {value}")
            }
            Error::Empty { what } => write!(f, "{what} must not be empty"),
            Error::PeriodOverflow { period, max } => {
                write!(f, "period {period} exceeds the configured maximum of {max}")
            }
            Error::OutOfRange { index, len } => {
                write!(f, "period index {index} out of range (horizon is {len})")
            }
            Error::InapplicableRegime { parallelism } => {
                write!(
                    f,
                    "cycle dominance is only defined for fully serial occupations \
                     (parallelism = 0), got {parallelism}"
                )
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

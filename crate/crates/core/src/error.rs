use std::fmt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the function (e.g. `n = 0`).
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural precondition failed, such as `t_i` not dividing `n`.
    #[error("constraint violated: {0}")]
    Constraint(String),

    /// A quantity that must be an integer by theorem came out fractional,
    /// or a division that must be exact left a remainder. Always a bug.
    #[error("non-integral intermediate in {context}: {detail}")]
    NonIntegral {
        context: &'static str,
        detail: String,
    },

    /// Two routes that must agree produced different values. Always a bug.
    #[error("internal inconsistency in {context}: {detail}")]
    Inconsistent {
        context: &'static str,
        detail: String,
    },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    /// The brute-force oracle refused to run.
    #[error("oracle budget exceeded: needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    /// The floating-point Ramanujan sum drifted too far from an integer.
    #[error("floating-point residual {residual:e} too large for c_{n}({m})")]
    Residual { n: u64, m: i64, residual: f64 },

    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    /// True for the variants that can only come from a defect in this crate.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::NonIntegral { .. } | Error::Inconsistent { .. })
    }
}

/// A parse failure with the byte offset at which it was detected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

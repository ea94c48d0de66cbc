use thiserror::Error;

/// Failure modes of the algebra layer.
///
/// The variants fall into three families which the command line maps onto
/// distinct exit codes: configuration and mathematical errors, precision
/// errors (the working precision is too small to decide something), and
/// schema errors raised while reading serialized objects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("substitution diverges: {0} is not in the maximal ideal")]
    SubstitutionDiverges(String),
    #[error("invalid action parameter: {0}")]
    InvalidAction(String),
    #[error("not a polynomial: nonzero row {row} beyond degree {max_deg}")]
    NotPolynomial { row: usize, max_deg: usize },
    #[error("not divisible: reduced order is not visible below precision {0}")]
    NotDivisible(u32),
    #[error("not preparable: reduced order is not visible below precision {0}")]
    NotPreparable(u32),
    #[error("internal precision loss: {0}")]
    InternalPrecisionLoss(String),
    #[error("linear system singular at precision: {0}")]
    SystemSingularAtPrecision(String),
    #[error("degenerate action: sigma fixes 1+X modulo m^{0}")]
    DegenerateAction(u32),
    #[error("element vanished at precision after {steps} descent steps")]
    VanishedAtPrecision { steps: usize },
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Errors caused by working at too small a precision rather than by bad input.
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            Error::InternalPrecisionLoss(_)
                | Error::SystemSingularAtPrecision(_)
                | Error::VanishedAtPrecision { .. }
                | Error::PrecisionInsufficient(_)
                | Error::NotDivisible(_)
                | Error::NotPreparable(_)
        )
    }

    pub fn is_schema(&self) -> bool {
        matches!(self, Error::Schema(_) | Error::Io(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Schema(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero: ({numerator}) / ({denominator})")]
    DivisionByZero {
        numerator: String,
        denominator: String,
    },

    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("denominator evaluates to the zero polynomial (expression at byte {offset})")]
    ZeroDenominator { offset: usize },

    #[error("entry A[{row}][{col}]: {source}")]
    Entry {
        row: usize,
        col: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("components[{index}]: {source}")]
    Component {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("denominator depends on the fiber variables; use Maclaurin truncation")]
    UnsupportedDenominator,

    #[error("invalid document: {0}")]
    Document(String),

    #[error("field is not homogeneous of degree {expected}")]
    NotHomogeneous { expected: u32 },

    #[error("denominator has vanishing constant term in y; the polar set contains y = 0")]
    VanishingConstantTerm,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("field has non-constant (x-dependent) coefficients")]
    NonConstantCoefficient,

    #[error("characteristic polynomial has x-dependent coefficients: {0}")]
    NonConstantCharpoly(String),

    #[error("point {0} is a pole")]
    PoleAtPoint(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("integer coefficient of {bits} bits exceeds the limit of {limit} bits")]
    CoefficientOverflow { bits: u64, limit: u64 },
}

impl Error {
    pub(crate) fn at_entry(self, row: usize, col: usize) -> Error {
        Error::Entry {
            row,
            col,
            source: Box::new(self),
        }
    }

    pub(crate) fn at_component(self, index: usize) -> Error {
        Error::Component {
            index,
            source: Box::new(self),
        }
    }

    /// True for errors caused by malformed user input.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Syntax { .. }
            | Error::ZeroDenominator { .. }
            | Error::DimensionMismatch { .. }
            | Error::UnsupportedDenominator
            | Error::Document(_)
            | Error::NotHomogeneous { .. }
            | Error::VanishingConstantTerm
            | Error::SingularMatrix
            | Error::NonConstantCoefficient
            | Error::NonSquare { .. }
            | Error::DivisionByZero { .. } => true,
            Error::Entry { source, .. } | Error::Component { source, .. } => {
                source.is_input_error()
            }
            _ => false,
        }
    }
}

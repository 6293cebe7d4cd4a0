//! Error type shared by the whole crate.
//!
//! Display strings start with the variant name so that diagnostics printed by
//! downstream binaries stay grep-able.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Two operands of an elementwise or convolution operation disagree in length.
    #[error("LengthMismatch: left operand has {left} entries, right operand has {right}")]
    LengthMismatch { left: usize, right: usize },

    /// An operation that needs at least one entry received an empty vector.
    #[error("EmptyInput: operation requires a vector with at least one entry")]
    EmptyInput,

    /// Input contains NaN or infinite components.
    #[error("NonFiniteInput: input contains NaN or infinite entries")]
    NonFiniteInput,

    /// Variant A symmetrization requires a real leading entry.
    #[error(
        "NonRealLeadingEntry: |Im(x[0])| = {imag:.3e} exceeds tolerance {tol:.3e}; \
         variant B accepts arbitrary complex vectors"
    )]
    NonRealLeadingEntry { imag: f64, tol: f64 },

    /// Stored length is inconsistent with the (variant, n) metadata.
    #[error("VariantMismatch: variant/n metadata implies length {expected}, got {actual}")]
    VariantMismatch { expected: usize, actual: usize },

    /// Polynomial square root failed: the input is not a square within tolerance.
    #[error(
        "NotAPerfectSquare: relative factorization residual {residual:.3e} exceeds tolerance {tol:.3e}"
    )]
    NotAPerfectSquare { residual: f64, tol: f64 },

    /// First significant autocorrelation coefficient sits at an odd index, so no
    /// polynomial square root exists.
    #[error("OddLeadingIndex: first significant coefficient is at odd index {index}")]
    OddLeadingIndex { index: usize },

    /// A caller-supplied parameter is out of range.
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),

    /// Underlying filesystem failure while reading or writing artifacts.
    #[error("Io: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed artifact contents (CSV or JSON).
    #[error("Parse: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by malformed or unreadable input rather than by
    /// the mathematics of the problem instance.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::LengthMismatch { .. }
                | Error::EmptyInput
                | Error::NonFiniteInput
                | Error::VariantMismatch { .. }
                | Error::InvalidParameter(_)
                | Error::Io(_)
                | Error::Parse(_)
        )
    }
}

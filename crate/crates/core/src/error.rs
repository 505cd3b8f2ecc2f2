use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at byte {offset} in {input:?}: {message}")]
    Parse {
        input: String,
        offset: usize,
        message: String,
    },

    /// Well-formed input naming an object that does not exist (e.g. `F6`).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("no concrete witness for {0}: shape-only factors are formula-level")]
    NoWitness(String),

    #[error("ring of order {order} exceeds the oracle bound {bound}")]
    TooLarge { order: u128, bound: usize },

    #[error("connection set rejected: {0}")]
    ConnectionSet(String),

    /// A character sum with non-negligible imaginary part.
    #[error("character sum {index} has imaginary part {imag:e}")]
    NonReal { index: usize, imag: f64 },

    #[error("non-integral spectrum: {0}")]
    NonIntegral(String),

    /// Two independent computations of the same quantity disagree.
    #[error("verification mismatch in {context}: expected {expected}, found {found}")]
    Mismatch {
        context: String,
        expected: String,
        found: String,
    },

    /// A spectral verdict contradicts the corresponding classification criterion.
    #[error("theorem mismatch for {subject}: {detail}")]
    TheoremMismatch { subject: String, detail: String },

    #[error("bundle rejected: {0}")]
    Bundle(String),
}

impl Error {
    pub(crate) fn mismatch(
        context: impl Into<String>,
        expected: impl ToString,
        found: impl ToString,
    ) -> Self {
        Error::Mismatch {
            context: context.into(),
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    /// True for errors that mean two computations disagreed, as opposed to bad input.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::Mismatch { .. } | Error::TheoremMismatch { .. } | Error::NonIntegral(_)
        )
    }
}

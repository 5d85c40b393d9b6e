//! Error type shared by the whole crate.

use thiserror::Error;

/// Errors reported by multi-index operations and series evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operation requires a nonempty multi-index")]
    EmptyIndex,

    #[error("multi-index entries must be >= 1")]
    ZeroPart,

    #[error("operation is undefined for the multi-index (1)")]
    UnitIndex,

    #[error("subset element {element} outside the admissible range 1..={max}")]
    SubsetOutOfRange { element: u32, max: u32 },

    #[error("encoding weight must be >= 1")]
    ZeroWeight,

    #[error("sequence prefix too short: need at least {need} values, got {got}")]
    PrefixTooShort { need: usize, got: usize },

    #[error("multi-index is not admissible (leading entry must be >= 2): {0}")]
    NotAdmissible(String),

    #[error("exponent list has length {got} but the multi-index has weight {want}")]
    ExponentLengthMismatch { got: usize, want: u32 },

    #[error("term count {got} too small: need at least {min}")]
    TermCountTooSmall { got: u64, min: u64 },

    #[error("truncation bound {got} too small: need at least {min}")]
    TruncationTooSmall { got: u64, min: u64 },

    #[error("parameter {name} = {got} outside the supported range {min}..={max}")]
    OutOfRange {
        name: &'static str,
        got: u64,
        min: u64,
        max: u64,
    },

    #[error("Re z = {re} is not above the abscissa of convergence {abscissa}")]
    BelowAbscissa { re: f64, abscissa: i64 },

    #[error("z = {re}{im:+}i is too close to a pole of the series")]
    NearPole { re: f64, im: f64 },

    #[error("evaluation produced a non-finite value")]
    NonFinite,

    #[error("invalid pattern matrix: {0}")]
    InvalidPattern(String),

    #[error("derivative order {0} outside the supported range 0..=4")]
    DerivativeOrder(u32),

    #[error("step size {0} outside the supported range (0, 0.1]")]
    StepSize(f64),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use num_rational::BigRational;
use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// All arithmetic in this crate is exact, so errors report exact witnesses
/// (the offending point, the exact sum, the mismatched measures) rather than
/// approximate diagnostics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point `{point}` is not in space `{space}`")]
    UnknownPoint { space: String, point: String },

    #[error("weight {weight} at point `{point}` is negative")]
    NegativeWeight { point: String, weight: BigRational },

    #[error("weights sum to {sum}, expected exactly 1")]
    NotNormalized { sum: BigRational },

    #[error("mixing weights are not convex: {reason}")]
    WeightsNotConvex { reason: String },

    #[error("space mismatch: expected `{expected}`, got `{actual}`")]
    SpaceMismatch { expected: String, actual: String },

    #[error("space `{space}` is not a product space")]
    NotProductSpace { space: String },

    #[error(
        "measure is not absolutely continuous w.r.t. the reference: \
         point `{witness}` has positive mass but zero reference mass"
    )]
    NotAbsolutelyContinuous { witness: String },

    #[error(
        "row at `{omega}` has the wrong {side} marginal: expected {expected}, got {actual}"
    )]
    MarginalMismatch {
        omega: String,
        side: String,
        expected: String,
        actual: String,
    },

    #[error("{cells} cells exceed the vertex enumeration bound of {bound}")]
    EnumerationBoundExceeded { cells: usize, bound: usize },

    #[error("ensemble size {n} is odd; alternating measurement needs an even count")]
    OddEnsembleSize { n: u64 },

    #[error("correlation coefficient is undefined: a marginal variance is zero")]
    UndefinedCoefficient,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("validation of {object} failed: {reason}")]
    Validation { object: String, reason: String },

    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Side of the parameter space an estimate escaped to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    Zero,
    Infinite,
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Boundary::Zero => f.write_str("0"),
            Boundary::Infinite => f.write_str("infinity"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cell counts must be nonnegative (got {0})")]
    NegativeCount(i64),
    #[error("table is empty: all four counts are zero")]
    EmptyTable,
    #[error("odds ratio must be positive and finite (got {0})")]
    InvalidPsi(f64),
    #[error("P-value must lie in [0, 1] (got {0})")]
    InvalidP(f64),
    #[error("level must lie strictly between 0 and 1 (got {0})")]
    InvalidAlpha(f64),
    #[error("test count must be at least 1")]
    InvalidK,
    #[error("estimate lies on the boundary of the parameter space ({0})")]
    BoundaryEstimate(Boundary),
    #[error("a margin of the table is zero, so an expected count is zero")]
    ZeroExpectedCount,
    #[error("a cell of the table is zero")]
    ZeroCell,
    #[error("standard error must be positive and finite (got {0})")]
    NonpositiveSe(f64),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("curve has no points")]
    EmptyCurve,
    #[error("unsupported output format `{0}`")]
    UnsupportedFormat(String),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("prior interval has zero width")]
    DegeneratePrior,
    #[error("iteratively reweighted least squares did not converge in {0} iterations")]
    NonConvergence(usize),
    #[error("data are separated; the maximum-likelihood estimate is at {0}")]
    SeparatedData(Boundary),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

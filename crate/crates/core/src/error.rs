use thiserror::Error;

use crate::stein_weiss::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("field has {got} samples, grid expects {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("multiplier is not finite at frequency {frequency:?}")]
    NonFiniteMultiplier { frequency: Vec<f64> },

    #[error("negative-order operator requires mean-zero input (mean coefficient {0:e})")]
    NonZeroMean(f64),

    #[error("axis {axis} outside 1..={dim}")]
    InvalidAxis { axis: usize, dim: usize },

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("a sample sits at |x| = 0; use a cell-centered grid for singular weights")]
    SampleAtOrigin,

    #[error("grid too coarse for dyadic analysis: {0}")]
    GridTooCoarse(String),

    #[error("dyadic level 2^{level}/L outside partition range {min}..={max}")]
    LevelOutOfRange { level: i32, min: i32, max: i32 },

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("Schur sums diverge at endpoint exponents (s = {s}, d/q = {ratio})")]
    SchurDivergent { s: f64, ratio: f64 },

    #[error("J diverges: exponent d - d/q - s = {0} is not positive")]
    JDiverges(f64),

    #[error("Stein-Weiss parameters rejected: {0}")]
    SteinWeiss(Violation),

    #[error("direct quadrature limited to n <= {max} in d = {dim} (got n = {n})")]
    GridLimit { dim: usize, n: usize, max: usize },

    #[error("cutoffs collapse: {0}")]
    CutoffCollapse(String),

    #[error("malformed field file: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// True for errors caused by caller-supplied parameters or inputs, as
    /// opposed to failures inside a computation.
    pub fn is_usage(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}

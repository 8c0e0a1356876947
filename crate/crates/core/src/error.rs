use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("distance matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("distance matrix is empty")]
    EmptySpace,
    #[error("nonzero diagonal entry at ({i},{i})")]
    NonZeroDiagonal { i: usize },
    #[error("matrix is not symmetric at ({i},{j})")]
    NonSymmetric { i: usize, j: usize },
    #[error("off-diagonal entry ({i},{j}) is not positive")]
    NegativeOrZeroOffDiagonal { i: usize, j: usize },
    #[error("triangle inequality fails: d({i},{k}) > d({i},{j}) + d({j},{k})")]
    TriangleViolation { i: usize, j: usize, k: usize },
    #[error("arithmetic overflow while checking triple ({i},{j},{k})")]
    Overflow { i: usize, j: usize, k: usize },
    #[error("map is not a permutation: {reason}")]
    NotAPermutation { reason: String },
    #[error("point index {index} out of range for a space of {n} points")]
    PointOutOfRange { index: usize, n: usize },
    #[error("empty argument: {0}")]
    EmptyArgument(&'static str),
    #[error("space has a single point")]
    SingletonSpace,
    #[error("exponent must be nonzero")]
    ZeroExponent,
    #[error("negative scale {0}")]
    NegativeScale(Rational),
    #[error("window is not a walk in the pseudo-orbit graph: step {step} ({from} -> {to})")]
    NotAWalk { step: usize, from: usize, to: usize },
    #[error("automaton state cap {cap} exceeded ({reached} states reached)")]
    StateCapExceeded { cap: usize, reached: usize },
    #[error("oracle enumeration budget {budget} exceeded")]
    ExplosionGuard { budget: usize },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("unknown point label {0:?}")]
    UnknownPoint(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "NotSquare",
            Error::EmptySpace => "EmptySpace",
            Error::NonZeroDiagonal { .. } => "NonZeroDiagonal",
            Error::NonSymmetric { .. } => "NonSymmetric",
            Error::NegativeOrZeroOffDiagonal { .. } => "NegativeOrZeroOffDiagonal",
            Error::TriangleViolation { .. } => "TriangleViolation",
            Error::Overflow { .. } => "Overflow",
            Error::NotAPermutation { .. } => "NotAPermutation",
            Error::PointOutOfRange { .. } => "PointOutOfRange",
            Error::EmptyArgument(_) => "EmptyArgument",
            Error::SingletonSpace => "SingletonSpace",
            Error::ZeroExponent => "ZeroExponent",
            Error::NegativeScale(_) => "NegativeScale",
            Error::NotAWalk { .. } => "NotAWalk",
            Error::StateCapExceeded { .. } => "StateCapExceeded",
            Error::ExplosionGuard { .. } => "ExplosionGuard",
            Error::BadParams(_) => "BadParams",
            Error::UnknownPoint(_) => "UnknownPoint",
            Error::Parse(_) => "ParseError",
        }
    }

    /// Indices named by the error, if any.
    pub fn indices(&self) -> Vec<usize> {
        match *self {
            Error::NotSquare { row, .. } => vec![row],
            Error::NonZeroDiagonal { i } => vec![i],
            Error::NonSymmetric { i, j } | Error::NegativeOrZeroOffDiagonal { i, j } => vec![i, j],
            Error::TriangleViolation { i, j, k } | Error::Overflow { i, j, k } => vec![i, j, k],
            Error::PointOutOfRange { index, .. } => vec![index],
            _ => Vec::new(),
        }
    }
}

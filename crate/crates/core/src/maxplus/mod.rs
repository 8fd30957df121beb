//! Exact max-plus scalar and matrix arithmetic.

mod graph;
mod matrix;
mod residual;
mod scalar;
mod star;

use thiserror::Error;

pub use graph::{analyze_graph, CircuitSign, GraphAnalysis};
pub use matrix::{Matrix, UpperMatrix};
pub use residual::residual;
pub use scalar::{
    format_rational, parse_rational, Rational, Scalar, ScalarParseError, UpperScalar,
};
pub(crate) use star::star_times_unchecked;
pub use star::{greatest_solution, is_fixed_point, kleene_star, saturate};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MaxPlusError {
    #[error("dimension mismatch in {op}: {left:?} against {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op} needs a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("{len} entries cannot fill a {rows}x{cols} matrix")]
    BadShape {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("Kleene star does not exist: a circuit has positive weight")]
    NoStar,
    #[error("saturation needs every circuit to be strictly negative (found {sign:?})")]
    NotContracting { sign: CircuitSign },
}

impl MaxPlusError {
    pub(crate) fn dims(op: &'static str, left: (usize, usize), right: (usize, usize)) -> Self {
        MaxPlusError::DimensionMismatch { op, left, right }
    }
}

//! Atom systems: text format, preprocessing and conversion to matrices.

mod atom;
mod fill;
mod parse;
mod preprocess;

pub use atom::{Atom, AtomDisplay, AtomStats, MapSystem, Targets};
pub use fill::{fill_matrices, MatrixSystem};
pub use parse::{parse_atoms, ParseError, ParseErrorKind};
pub use preprocess::{classify, preprocess, Classification};

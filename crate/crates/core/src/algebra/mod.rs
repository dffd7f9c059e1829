//! Exact integer and Laurent-polynomial arithmetic.
//!
//! Everything downstream (Alexander polynomials, homology of fibrations,
//! linking matrices) reduces to the three pieces collected here:
//! [`LaurentPolynomial`], the fraction-free determinants on
//! [`IntegerMatrix`] and [`PolyMatrix`], and [`smith_normal_form`].

mod laurent;
mod matrix;
mod snf;

pub use laurent::{LaurentPolynomial, SymmetryWitness};
pub use matrix::{IntegerMatrix, PolyMatrix};
pub use snf::{smith_normal_form, SmithDecomposition};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix data has {len} entries, expected {rows}x{cols}")]
    BadShape {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("rows have unequal lengths (row {row} has {len}, expected {expected})")]
    RaggedRows {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("cannot evaluate a polynomial with negative exponents at t = 0")]
    EvalAtZero,
    #[error("the zero polynomial has no symmetry witness")]
    ZeroPolynomial,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

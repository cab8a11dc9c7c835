//! Exact arithmetic over the rationals and small cyclotomic fields, sparse
//! exact rank/nullspace, and intertwiner-space computation.

pub mod cyclotomic;
pub mod intertwiner;
pub mod matrix;

pub use cyclotomic::Cyclotomic;
pub use intertwiner::intertwiner_dimension;
pub use matrix::{same_row_span, ExactMatrix, ExactScalar, SparseRow};

pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Rational `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

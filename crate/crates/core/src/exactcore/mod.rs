//! Exact arithmetic over Q, Q[x] and Q(x), and exact dense linear algebra.

pub mod linalg;
pub mod matrix;
pub mod modular;
pub mod poly;
pub mod ratfunc;
pub mod roots;

pub use linalg::{charpoly, charpoly_coeffs, determinant, minpoly, nullspace, poly_at_matrix, rank, rref, Echelon};
pub use matrix::{Coeff, Matrix, QMatrix, RfMatrix};
pub use modular::modular_kernel;
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use poly::UniPoly;
pub use ratfunc::{ratfunc_arith, ArithOp, RatFunc};
pub use roots::{coprime_basis, integer_roots, rational_roots, squarefree_decomposition, squarefree_part, SquarefreeDecomposition};

/// Shorthand for an integer-valued rational.
pub fn qint(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Shorthand for `num / den`.
pub fn qfrac(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

//! Exact arithmetic over a prime field: polynomials, monomial bases, Macaulay
//! matrices, dense and sparse elimination, and graded quotient rings.

pub mod dense;
pub mod field;
pub mod monomial;
pub mod poly;
pub mod quotient;
pub mod sparse;

pub use dense::{DenseMat, RowBasis, Rref};
pub use field::{PrimeField, DEFAULT_PRIME};
pub use monomial::{binomial, count_monomials, monomial_basis, monomial_index, Monomial};
pub use poly::Polynomial;
pub use quotient::QuotientRing;
pub use sparse::{coefficient_matrix, ExactMatrix};

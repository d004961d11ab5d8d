//! Desk-scale machinery for counting integral points on weighted covers of
//! affine space: exact sparse polynomials, brute-force bounded-height
//! enumeration, determinant-method auxiliary polynomials, absolute
//! irreducibility tests, twisted lines, and an experiment harness.

pub mod budget;
pub mod detmethod;
pub mod enumerate;
pub mod harness;
pub mod irreducible;
pub mod linalg;
pub mod poly;
pub mod twisted;

pub use budget::{Budget, BudgetExceeded};
pub use poly::{CoverPolynomial, IntPolynomial, Monomial, PolyError, VarNames, WeightVector};

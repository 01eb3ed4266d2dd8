//! Exact arithmetic in the rational function field Q(q).
//!
//! A [`QScalar`] is kept in a canonical reduced form, so equality of values
//! is structural equality and zero-testing is a field check. The public view
//! is a pair of Laurent polynomials whose denominator has lowest-degree
//! coefficient 1.

mod backend;
mod field;
pub(crate) mod modp;
mod poly;

pub use backend::{Backend, EvalAt, Exact, Scalar};
pub use field::{LaurentPoly, QError, QScalar};

//! The two scalar backends behind one field interface: exact [`QScalar`]
//! values, and exact rationals obtained by fixing `q` at a rational point.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{QError, QScalar};

/// Field operations needed by the construction and the verifier.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, QError>;

    fn div(&self, o: &Self) -> Result<Self, QError> {
        Ok(self.mul(&o.inv()?))
    }

    fn from_i64(n: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Reduction modulo a large prime at a fixed image of q, if defined.
    fn residue(&self) -> Option<u64>;
}

impl Scalar for QScalar {
    fn zero() -> Self {
        QScalar::zero()
    }
    fn residue(&self) -> Option<u64> {
        QScalar::residue(self)
    }
    fn one() -> Self {
        QScalar::one()
    }
    fn is_zero(&self) -> bool {
        QScalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self, QError> {
        QScalar::inv(self)
    }
    fn from_i64(n: i64) -> Self {
        QScalar::from_int(n)
    }
    fn is_one(&self) -> bool {
        QScalar::is_one(self)
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn residue(&self) -> Option<u64> {
        let d = super::modp::inv(super::modp::from_bigint(self.denom()))?;
        Some(super::modp::mul(super::modp::from_bigint(self.numer()), d))
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self, QError> {
        if Zero::is_zero(self) {
            Err(QError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
}

/// Maps elements of Q(q) into a concrete scalar type.
pub trait Backend: Clone + Send + Sync + fmt::Debug + 'static {
    type S: Scalar;

    fn lift(&self, x: &QScalar) -> Self::S;

    fn q_pow(&self, k: i64) -> Self::S {
        self.lift(&QScalar::q_pow(k))
    }

    /// Short label recorded in outputs.
    fn describe(&self) -> String;
}

/// Exact arithmetic in Q(q).
#[derive(Clone, Copy, Debug, Default)]
pub struct Exact;

impl Backend for Exact {
    type S = QScalar;
    fn lift(&self, x: &QScalar) -> QScalar {
        x.clone()
    }
    fn q_pow(&self, k: i64) -> QScalar {
        QScalar::q_pow(k)
    }
    fn describe(&self) -> String {
        "exact".into()
    }
}

/// Exact rational arithmetic with `q` fixed at a nonzero rational point.
#[derive(Clone, Debug)]
pub struct EvalAt {
    point: BigRational,
}

impl EvalAt {
    pub fn new(point: BigRational) -> Result<Self, QError> {
        if Zero::is_zero(&point) {
            return Err(QError::ZeroPoint);
        }
        Ok(EvalAt { point })
    }

    /// The default generic point `q = 3/2`.
    pub fn generic() -> Self {
        EvalAt {
            point: BigRational::new(3.into(), 2.into()),
        }
    }

    pub fn point(&self) -> &BigRational {
        &self.point
    }
}

impl Backend for EvalAt {
    type S = BigRational;
    fn lift(&self, x: &QScalar) -> BigRational {
        x.eval_at(&self.point)
            .expect("scalar has a pole at the evaluation point")
    }
    fn q_pow(&self, k: i64) -> BigRational {
        let base = if k < 0 {
            self.point.recip()
        } else {
            self.point.clone()
        };
        num_traits::pow::pow(base, k.unsigned_abs() as usize)
    }
    fn describe(&self) -> String {
        format!("eval:{}", self.point)
    }
}

//! Canonical form and arithmetic of [`QScalar`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::poly::ZPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot evaluate at q = 0")]
    ZeroPoint,
    #[error("denominator vanishes at q = {0}")]
    Pole(BigRational),
    #[error("malformed scalar: {0}")]
    Malformed(String),
}

/// A finitely supported map from integer exponents to rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(exp: i64, c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        self.terms.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn eval(&self, v: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            acc += c * pow_rat(v, *e);
        }
        acc
    }

    /// Splits into `scale * q^shift * z` with `z` an integer polynomial.
    fn to_zpoly(&self) -> (BigRational, i64, ZPoly) {
        let Some(lo) = self.min_exp() else {
            return (BigRational::zero(), 0, ZPoly::zero());
        };
        let hi = *self.terms.keys().next_back().unwrap();
        let mut lcm = BigInt::one();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            coeffs[(e - lo) as usize] = c.numer() * (&lcm / c.denom());
        }
        (
            BigRational::new(BigInt::one(), lcm),
            lo,
            ZPoly::from_coeffs(coeffs),
        )
    }
}

fn pow_rat(v: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { v.recip() } else { v.clone() };
    num_traits::pow::pow(base, e.unsigned_abs() as usize)
}

/// Canonical element of Q(q): `scale * q^shift * num(q) / den(q)` where
/// `num` and `den` are primitive integer polynomials with positive nonzero
/// constant terms and no common factor. Zero has `scale == 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QScalar {
    scale: BigRational,
    shift: i64,
    num: ZPoly,
    den: ZPoly,
}

impl QScalar {
    pub fn zero() -> Self {
        QScalar {
            scale: BigRational::zero(),
            shift: 0,
            num: ZPoly::one(),
            den: ZPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        QScalar {
            scale: r,
            shift: 0,
            num: ZPoly::one(),
            den: ZPoly::one(),
        }
    }

    /// The monomial `q^k`.
    pub fn q_pow(k: i64) -> Self {
        QScalar {
            scale: BigRational::one(),
            shift: k,
            num: ZPoly::one(),
            den: ZPoly::one(),
        }
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// Quantum integer `[n] = (q^n - q^-n) / (q - q^-1)`.
    pub fn qint(n: i64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let m = n.unsigned_abs() as usize;
        let coeffs = (0..2 * m - 1)
            .map(|i| if i % 2 == 0 { BigInt::one() } else { BigInt::zero() })
            .collect();
        let v = QScalar {
            scale: BigRational::one(),
            shift: 1 - m as i64,
            num: ZPoly::from_coeffs(coeffs),
            den: ZPoly::one(),
        };
        if n < 0 {
            -v
        } else {
            v
        }
    }

    pub fn from_laurent(num: &LaurentPoly, den: &LaurentPoly) -> Result<Self, QError> {
        if den.is_zero() {
            return Err(QError::DivisionByZero);
        }
        let (sn, en, zn) = num.to_zpoly();
        if zn.is_zero() {
            return Ok(Self::zero());
        }
        let (sd, ed, zd) = den.to_zpoly();
        Ok(Self::build(sn / sd, en - ed, zn, zd))
    }

    pub fn from_laurent_poly(p: &LaurentPoly) -> Self {
        let one = LaurentPoly::monomial(0, BigRational::one());
        Self::from_laurent(p, &one).expect("nonzero denominator")
    }

    /// Normalizes arbitrary integer polynomial data into canonical form.
    fn build(mut scale: BigRational, mut shift: i64, mut num: ZPoly, mut den: ZPoly) -> Self {
        if num.is_zero() || scale.is_zero() {
            return Self::zero();
        }
        let k = num.low_zeros();
        num.drop_low(k);
        shift += k as i64;
        let k = den.low_zeros();
        den.drop_low(k);
        shift -= k as i64;
        let cn = num.make_primitive();
        let cd = den.make_primitive();
        scale *= BigRational::new(cn, cd);
        let g = num.gcd(&den);
        if !g.is_one() {
            num = num.div_exact(&g);
            den = den.div_exact(&g);
        }
        QScalar {
            scale,
            shift,
            num,
            den,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.scale.is_one() && self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// `Some(k)` when the value is exactly `c * q^k` for a rational `c`.
    pub fn as_monomial(&self) -> Option<(BigRational, i64)> {
        if self.is_zero() {
            return None;
        }
        (self.num.is_one() && self.den.is_one()).then(|| (self.scale.clone(), self.shift))
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        match self.as_monomial() {
            Some((c, 0)) => Some(c),
            _ => None,
        }
    }

    /// Numerator as a Laurent polynomial, paired with [`Self::denominator`].
    pub fn numerator(&self) -> LaurentPoly {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        // scale * N / D = (scale / d0) * N / (D / d0)
        let k = &self.scale / BigRational::from_integer(self.den.0[0].clone());
        LaurentPoly::from_terms(
            self.num
                .0
                .iter()
                .enumerate()
                .map(|(i, c)| (self.shift + i as i64, &k * BigRational::from_integer(c.clone()))),
        )
    }

    /// Denominator as a polynomial with constant coefficient 1.
    pub fn denominator(&self) -> LaurentPoly {
        if self.is_zero() {
            return LaurentPoly::monomial(0, BigRational::one());
        }
        let d0 = self.den.0[0].clone();
        LaurentPoly::from_terms(
            self.den
                .0
                .iter()
                .enumerate()
                .map(|(i, c)| (i as i64, BigRational::new(c.clone(), d0.clone()))),
        )
    }

    pub fn inv(&self) -> Result<Self, QError> {
        if self.is_zero() {
            return Err(QError::DivisionByZero);
        }
        Ok(QScalar {
            scale: self.scale.recip(),
            shift: -self.shift,
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, QError> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, QError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Exact value at `q = v`.
    pub fn eval_at(&self, v: &BigRational) -> Result<BigRational, QError> {
        if v.is_zero() {
            return Err(QError::ZeroPoint);
        }
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        let d = self.den.eval(v);
        if d.is_zero() {
            return Err(QError::Pole(v.clone()));
        }
        Ok(&self.scale * pow_rat(v, self.shift) * self.num.eval(v) / d)
    }

    fn mul_impl(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let (n1, d2) = if g1.is_one() {
            (self.num.clone(), o.den.clone())
        } else {
            (self.num.div_exact(&g1), o.den.div_exact(&g1))
        };
        let (n2, d1) = if g2.is_one() {
            (o.num.clone(), self.den.clone())
        } else {
            (o.num.div_exact(&g2), self.den.div_exact(&g2))
        };
        QScalar {
            scale: &self.scale * &o.scale,
            shift: self.shift + o.shift,
            num: n1.mul(&n2),
            den: d1.mul(&d2),
        }
    }

    fn add_impl(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let shift = self.shift.min(o.shift);
        let g = self.den.gcd(&o.den);
        let (d1, d2) = if g.is_one() {
            (self.den.clone(), o.den.clone())
        } else {
            (self.den.div_exact(&g), o.den.div_exact(&g))
        };
        let l = self.scale.denom().lcm(o.scale.denom());
        let k1 = self.scale.numer() * (&l / self.scale.denom());
        let k2 = o.scale.numer() * (&l / o.scale.denom());
        let t1 = self
            .num
            .mul(&d2)
            .shifted((self.shift - shift) as usize)
            .scale(&k1);
        let t2 = o.num.mul(&d1).shifted((o.shift - shift) as usize).scale(&k2);
        let mut num = t1.add(&t2);
        if num.is_zero() {
            return Self::zero();
        }
        let k = num.low_zeros();
        num.drop_low(k);
        let c = num.make_primitive();
        let mut rest = g;
        if !rest.is_one() {
            let h = num.gcd(&rest);
            if !h.is_one() {
                num = num.div_exact(&h);
                rest = rest.div_exact(&h);
            }
        }
        QScalar {
            scale: BigRational::new(c, l),
            shift: shift + k as i64,
            num,
            den: d1.mul(&d2).mul(&rest),
        }
    }

    /// Serializes as `{"num": [[exp, n, d], ...], "den": [...]}` with
    /// ascending exponents.
    /// Value modulo a large prime at a fixed image of q; `None` if the
    /// value has a pole there.
    pub fn residue(&self) -> Option<u64> {
        use super::modp;
        if self.is_zero() {
            return Some(0);
        }
        let x = modp::Q_POINT;
        let scale = modp::mul(modp::from_bigint(self.scale.numer()), modp::inv(modp::from_bigint(self.scale.denom()))?);
        let shift = if self.shift >= 0 {
            modp::pow(x, self.shift as u64)
        } else {
            modp::inv(modp::pow(x, self.shift.unsigned_abs()))?
        };
        let d = modp::inv(self.den.eval_mod(x))?;
        Some(modp::mul(modp::mul(scale, shift), modp::mul(self.num.eval_mod(x), d)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let enc = |p: &LaurentPoly| {
            serde_json::Value::Array(
                p.terms()
                    .map(|(e, c)| serde_json::json!([e, c.numer().to_string(), c.denom().to_string()]))
                    .collect(),
            )
        };
        serde_json::json!({ "num": enc(&self.numerator()), "den": enc(&self.denominator()) })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, QError> {
        let dec = |v: Option<&serde_json::Value>| -> Result<LaurentPoly, QError> {
            let arr = v
                .and_then(|x| x.as_array())
                .ok_or_else(|| QError::Malformed("expected coefficient list".into()))?;
            let mut p = LaurentPoly::zero();
            for t in arr {
                let t = t
                    .as_array()
                    .filter(|t| t.len() == 3)
                    .ok_or_else(|| QError::Malformed("expected [exp, num, den]".into()))?;
                let e = t[0]
                    .as_i64()
                    .ok_or_else(|| QError::Malformed("exponent".into()))?;
                let big = |x: &serde_json::Value| -> Result<BigInt, QError> {
                    match x {
                        serde_json::Value::String(s) => s.parse().ok(),
                        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
                        _ => None,
                    }
                    .ok_or_else(|| QError::Malformed("coefficient".into()))
                };
                let d = big(&t[2])?;
                if d.is_zero() {
                    return Err(QError::Malformed("zero coefficient denominator".into()));
                }
                p.add_term(e, BigRational::new(big(&t[1])?, d));
            }
            Ok(p)
        };
        Self::from_laurent(&dec(v.get("num"))?, &dec(v.get("den"))?)
    }
}

impl Default for QScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a> Add<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn add(self, o: &QScalar) -> QScalar {
        self.add_impl(o)
    }
}

impl<'a> Sub<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn sub(self, o: &QScalar) -> QScalar {
        self.add_impl(&-o)
    }
}

impl<'a> Mul<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn mul(self, o: &QScalar) -> QScalar {
        self.mul_impl(o)
    }
}

/// Panics on division by zero; use [`QScalar::checked_div`] otherwise.
impl<'a> Div<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn div(self, o: &QScalar) -> QScalar {
        self.checked_div(o).expect("division by zero in Q(q)")
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        let mut v = self.clone();
        v.scale = -v.scale;
        v
    }
}

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(mut self) -> QScalar {
        self.scale = -self.scale;
        self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QScalar> for QScalar {
            type Output = QScalar;
            fn $m(self, o: QScalar) -> QScalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a QScalar> for QScalar {
            type Output = QScalar;
            fn $m(self, o: &QScalar) -> QScalar {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

fn fmt_laurent(p: &LaurentPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (e, c) in p.terms() {
        let neg = c.is_negative();
        let a = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let unit = a.is_one();
        if !unit || e == 0 {
            write!(f, "{a}")?;
        }
        if e != 0 {
            if !unit {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "q")?;
            } else {
                write!(f, "q^{e}")?;
            }
        }
    }
    Ok(())
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den = self.denominator();
        let den_is_one = den.terms().count() == 1;
        if den_is_one {
            fmt_laurent(&self.numerator(), f)
        } else {
            write!(f, "(")?;
            fmt_laurent(&self.numerator(), f)?;
            write!(f, ")/(")?;
            fmt_laurent(&den, f)?;
            write!(f, ")")
        }
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Serde view matching [`QScalar::to_json`].
impl Serialize for QScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        QScalar::from_json(&v).map_err(serde::de::Error::custom)
    }
}

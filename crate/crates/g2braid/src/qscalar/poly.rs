//! Dense integer polynomials, used as the working representation behind
//! [`QScalar`](super::QScalar). Coefficients are stored in ascending degree
//! order with no trailing zeros; the zero polynomial is the empty vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct ZPoly(pub(crate) Vec<BigInt>);

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly(Vec::new())
    }

    pub fn one() -> Self {
        ZPoly(vec![BigInt::one()])
    }

    pub fn from_coeffs(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        ZPoly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lead(&self) -> &BigInt {
        self.0.last().expect("lead of zero polynomial")
    }

    /// Number of vanishing low-order coefficients.
    pub fn low_zeros(&self) -> usize {
        self.0.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn drop_low(&mut self, k: usize) {
        if k > 0 {
            self.0.drain(..k);
        }
    }

    pub fn shifted(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.0.iter().cloned());
        ZPoly(c)
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return ZPoly::zero();
        }
        ZPoly(self.0.iter().map(|c| c * k).collect())
    }

    pub fn div_scalar(&self, k: &BigInt) -> Self {
        ZPoly(self.0.iter().map(|c| c / k).collect())
    }

    /// Divides out the content and makes the constant term positive. Returns
    /// the signed factor removed. The constant term must be nonzero.
    pub fn make_primitive(&mut self) -> BigInt {
        let mut g = self.content();
        if self.0[0].is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in self.0.iter_mut() {
                *c /= &g;
            }
        }
        g
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(match (self.0.get(i), o.0.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        ZPoly::from_coeffs(c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return ZPoly::zero();
        }
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        let mut c = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        ZPoly::from_coeffs(c)
    }

    /// Exact quotient `self / d`; panics if the division leaves a remainder.
    pub fn div_exact(&self, d: &Self) -> Self {
        if d.is_one() {
            return self.clone();
        }
        if self.is_zero() {
            return ZPoly::zero();
        }
        let dn = d.degree();
        let ld = d.lead();
        let mut r = self.0.clone();
        assert!(r.len() > dn, "inexact polynomial division");
        let mut q = vec![BigInt::zero(); r.len() - dn];
        for k in (0..q.len()).rev() {
            let top = &r[k + dn];
            if top.is_zero() {
                continue;
            }
            let (qc, rem) = top.div_rem(ld);
            assert!(rem.is_zero(), "inexact polynomial division");
            for (j, dc) in d.0.iter().enumerate() {
                r[k + j] -= &qc * dc;
            }
            q[k] = qc;
        }
        assert!(r.iter().all(|c| c.is_zero()), "inexact polynomial division");
        ZPoly::from_coeffs(q)
    }

    /// Pseudo-remainder of `self` by `d`, with content removed along the way.
    fn prem_primitive(&self, d: &Self) -> Self {
        let dn = d.degree();
        let ld = d.lead();
        let mut r = self.0.clone();
        while r.len() > dn && !r.is_empty() {
            let k = r.len() - 1 - dn;
            let lr = r.last().unwrap().clone();
            let g = lr.gcd(ld);
            let mr = ld / &g;
            let md = &lr / &g;
            for c in r.iter_mut() {
                *c *= &mr;
            }
            for (j, dc) in d.0.iter().enumerate() {
                r[k + j] -= &md * dc;
            }
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        let mut p = ZPoly(r);
        if !p.is_zero() {
            let c = p.content();
            if !c.is_one() {
                p = p.div_scalar(&c);
            }
        }
        p
    }

    /// Primitive gcd with positive lowest nonzero coefficient. Both inputs
    /// must be nonzero with nonzero constant terms.
    pub fn gcd(&self, o: &Self) -> Self {
        if self.degree() == 0 || o.degree() == 0 {
            return ZPoly::one();
        }
        if self == o {
            let mut g = self.clone();
            g.make_primitive();
            return g;
        }
        let (mut a, mut b) = if self.degree() >= o.degree() {
            (self.clone(), o.clone())
        } else {
            (o.clone(), self.clone())
        };
        let ca = a.content();
        a = a.div_scalar(&ca);
        let cb = b.content();
        b = b.div_scalar(&cb);
        while !b.is_zero() {
            if b.degree() == 0 {
                return ZPoly::one();
            }
            let r = a.prem_primitive(&b);
            a = b;
            b = r;
        }
        a.make_primitive();
        a
    }

    pub fn eval_mod(&self, x: u64) -> u64 {
        self.0.iter().rev().fold(0, |acc, c| super::modp::add(super::modp::mul(acc, x), super::modp::from_bigint(c)))
    }

    pub fn eval(&self, v: &num_rational::BigRational) -> num_rational::BigRational {
        let mut acc = num_rational::BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * v + num_rational::BigRational::from_integer(c.clone());
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> ZPoly {
        ZPoly::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn gcd_of_products_recovers_common_factor() {
        let f = p(&[1, 1]);
        let g = p(&[1, 0, 1]);
        let h = p(&[2, -3, 1]);
        let a = f.mul(&g);
        let b = f.mul(&h);
        assert_eq!(a.gcd(&b), f);
        assert_eq!(g.gcd(&h), ZPoly::one());
    }

    #[test]
    fn exact_division_inverts_multiplication() {
        let a = p(&[3, 0, -2, 5]);
        let b = p(&[1, 4, 1]);
        assert_eq!(a.mul(&b).div_exact(&b), a);
    }

    #[test]
    fn content_and_sign_are_removed() {
        let mut a = p(&[-4, 6, 8]);
        let k = a.make_primitive();
        assert_eq!(k, BigInt::from(-2));
        assert_eq!(a, p(&[2, -3, -4]));
    }
}

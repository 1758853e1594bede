//! Dense univariate polynomials over the integers.
//!
//! Coefficients are stored in ascending order with no trailing zeros, so the
//! zero polynomial is the empty vector. This is the backing store for
//! [`QScalar`](super::QScalar); only the handful of operations that the
//! rational-function field needs are implemented.

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly(Vec::new())
    }

    pub fn one() -> Self {
        IntPoly(vec![BigInt::one()])
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = IntPoly(vec![c]);
        p.trim();
        p
    }

    /// c * q^k
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        IntPoly(v)
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly(coeffs);
        p.trim();
        p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    fn trim(&mut self) {
        while matches!(self.0.last(), Some(c) if c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    /// Degree of the polynomial; zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn neg(&self) -> Self {
        IntPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i).cloned().unwrap_or_else(BigInt::zero);
            let b = other.0.get(i).cloned().unwrap_or_else(BigInt::zero);
            v.push(a + b);
        }
        Self::from_coeffs(v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(v)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Gcd of all coefficients (non-negative); 0 for the zero polynomial.
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

    /// Divide every coefficient by `d` (must divide exactly).
    pub fn div_scalar(&self, d: &BigInt) -> Self {
        debug_assert!(!d.is_zero());
        IntPoly(
            self.0
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(d);
                    debug_assert!(r.is_zero());
                    q
                })
                .collect(),
        )
    }

    /// Pseudo-remainder of self by `d` (d nonzero). Used by the primitive
    /// Euclidean gcd; the scaling factor is irrelevant because callers reduce
    /// to primitive parts at every step.
    fn pseudo_rem(&self, d: &Self) -> Self {
        let mut r = self.clone();
        let dd = d.degree();
        let lead = d.leading();
        while !r.is_zero() && r.degree() >= dd {
            let shift = r.degree() - dd;
            let c = r.leading();
            // r := lead * r - c * q^shift * d
            let mut v: Vec<BigInt> = r.0.iter().map(|a| a * &lead).collect();
            for (i, b) in d.0.iter().enumerate() {
                v[i + shift] -= &c * b;
            }
            r = Self::from_coeffs(v);
        }
        r
    }

    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let c = self.content();
        self.div_scalar(&c)
    }

    /// Gcd in Z[q], normalized with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.positive_leading();
        }
        if other.is_zero() {
            return self.positive_leading();
        }
        let content = self.content().gcd(&other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                break;
            }
            a = b;
            b = r.primitive_part();
        }
        let g = b.positive_leading();
        g.mul(&Self::constant(content))
    }

    fn positive_leading(&self) -> Self {
        if self.leading().sign() == Sign::Minus {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact division (panics if not exact); quotient stays in Z[q] for the
    /// gcd-cofactor divisions this is used for.
    pub fn exact_div(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Self::zero();
        }
        let mut r = self.0.clone();
        let dd = d.degree();
        let lead = d.leading();
        assert!(self.degree() >= dd);
        let mut q = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            let (qq, rr) = c.div_rem(&lead);
            assert!(rr.is_zero(), "inexact polynomial division");
            q[k] = qq.clone();
            for (i, b) in d.0.iter().enumerate() {
                r[k + i] -= &qq * b;
            }
        }
        assert!(r.iter().all(|c| c.is_zero()), "inexact polynomial division");
        Self::from_coeffs(q)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.0.iter().rev() {
            acc = acc * x + big_to_f64(c);
        }
        acc
    }
}

pub fn big_to_f64(c: &BigInt) -> f64 {
    num::ToPrimitive::to_f64(c).unwrap_or(f64::NAN)
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.sign() == Sign::Minus {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.sign() == Sign::Minus {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if k == 1 {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// Number of nonzero terms, used by the display code to decide on parentheses.
pub fn term_count(p: &IntPoly) -> usize {
    p.coeffs().iter().filter(|c| !c.is_zero()).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn gcd_of_cyclotomic_like_factors() {
        // gcd(1 - q^4, 1 - q^2) = 1 - q^2 up to sign normalization
        let a = p(&[1, 0, 0, 0, -1]);
        let b = p(&[1, 0, -1]);
        let g = a.gcd(&b);
        assert_eq!(g, p(&[-1, 0, 1]));
        assert_eq!(a.exact_div(&g).mul(&g), a);
    }

    #[test]
    fn exact_div_roundtrip() {
        let a = p(&[2, 3, 1]); // (1+q)(2+q)
        let b = p(&[1, 1]);
        assert_eq!(a.exact_div(&b), p(&[2, 1]));
    }

    #[test]
    fn display_forms() {
        assert_eq!(p(&[1, 0, 3]).to_string(), "3*q^2 + 1");
        assert_eq!(p(&[0, -1]).to_string(), "-q");
        assert_eq!(p(&[]).to_string(), "0");
    }
}

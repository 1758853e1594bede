//! Exact arithmetic in Q(q), the field of rational functions of the
//! deformation parameter with rational coefficients.
//!
//! Every symbolic result of the engine lives here. The representation is
//! canonical: numerator and denominator are integer polynomials with
//! gcd 1 (content included) and the denominator has a positive leading
//! coefficient, so equality of values is equality of representations.
//! Negative powers of q are folded into the denominator.

mod poly;

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use thiserror::Error;

pub use poly::IntPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QFieldError {
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("pole at q = {at}: denominator {den} vanishes")]
    Pole { at: BigRational, den: String },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A rational function of q over the rationals, kept in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QScalar {
    num: IntPoly,
    den: IntPoly,
}

impl QScalar {
    fn make(num: IntPoly, den: IntPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut s = QScalar { num, den };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = IntPoly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if !g.is_one() {
            self.num = self.num.exact_div(&g);
            self.den = self.den.exact_div(&g);
        }
        if self.den.leading().is_negative() {
            self.num = self.num.neg();
            self.den = self.den.neg();
        }
    }

    pub fn zero() -> Self {
        QScalar { num: IntPoly::zero(), den: IntPoly::one() }
    }

    pub fn one() -> Self {
        QScalar { num: IntPoly::one(), den: IntPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        QScalar { num: IntPoly::constant(BigInt::from(n)), den: IntPoly::one() }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0);
        Self::make(
            IntPoly::constant(BigInt::from(n)),
            IntPoly::constant(BigInt::from(d)),
        )
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::make(
            IntPoly::constant(r.numer().clone()),
            IntPoly::constant(r.denom().clone()),
        )
    }

    /// The generator q itself.
    pub fn q() -> Self {
        QScalar { num: IntPoly::monomial(BigInt::one(), 1), den: IntPoly::one() }
    }

    /// q^k for any integer k; negative powers land in the denominator.
    pub fn q_pow(k: i64) -> Self {
        if k >= 0 {
            QScalar { num: IntPoly::monomial(BigInt::one(), k as usize), den: IntPoly::one() }
        } else {
            QScalar {
                num: IntPoly::one(),
                den: IntPoly::monomial(BigInt::one(), (-k) as usize),
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.den
    }

    pub fn inverse(&self) -> Result<Self, QFieldError> {
        if self.is_zero() {
            return Err(QFieldError::DivisionByZero);
        }
        Ok(Self::make(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i32) -> Result<Self, QFieldError> {
        if e >= 0 {
            Ok(QScalar::make(self.num.pow(e as u32), self.den.pow(e as u32)))
        } else {
            self.inverse().map(|x| {
                QScalar::make(x.num.pow((-e) as u32), x.den.pow((-e) as u32))
            })
        }
    }

    /// Exact evaluation at a rational point; errors on a pole.
    pub fn eval_at(&self, q0: &BigRational) -> Result<BigRational, QFieldError> {
        let d = self.den.eval_rational(q0);
        if d.is_zero() {
            return Err(QFieldError::Pole { at: q0.clone(), den: self.den.to_string() });
        }
        Ok(self.num.eval_rational(q0) / d)
    }

    /// Floating-point evaluation, for the numeric oracle and reports.
    pub fn eval_f64(&self, q0: f64) -> f64 {
        self.num.eval_f64(q0) / self.den.eval_f64(q0)
    }

    /// Complex conjugation. Coefficients are real rationals, so this is the
    /// identity; it exists so the action formulas can be written as stated.
    pub fn conj(&self) -> Self {
        self.clone()
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if poly::term_count(&self.num) > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        write!(f, "/({})", self.den)
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $f:expr) => {
        impl $trait for &QScalar {
            type Output = QScalar;
            fn $method(self, rhs: &QScalar) -> QScalar {
                let f: fn(&QScalar, &QScalar) -> QScalar = $f;
                f(self, rhs)
            }
        }
        impl $trait for QScalar {
            type Output = QScalar;
            fn $method(self, rhs: QScalar) -> QScalar {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&QScalar> for QScalar {
            type Output = QScalar;
            fn $method(self, rhs: &QScalar) -> QScalar {
                $trait::$method(&self, rhs)
            }
        }
        impl $trait<QScalar> for &QScalar {
            type Output = QScalar;
            fn $method(self, rhs: QScalar) -> QScalar {
                $trait::$method(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| {
    QScalar::make(
        a.num.mul(&b.den).add(&b.num.mul(&a.den)),
        a.den.mul(&b.den),
    )
});
binop!(Sub, sub, |a, b| {
    QScalar::make(
        a.num.mul(&b.den).sub(&b.num.mul(&a.den)),
        a.den.mul(&b.den),
    )
});
binop!(Mul, mul, |a, b| {
    // Cross-reduce before multiplying to keep intermediate degrees down.
    let g1 = a.num.gcd(&b.den);
    let g2 = b.num.gcd(&a.den);
    let n1 = if g1.is_one() { a.num.clone() } else { a.num.exact_div(&g1) };
    let d2 = if g1.is_one() { b.den.clone() } else { b.den.exact_div(&g1) };
    let n2 = if g2.is_one() { b.num.clone() } else { b.num.exact_div(&g2) };
    let d1 = if g2.is_one() { a.den.clone() } else { a.den.exact_div(&g2) };
    QScalar::make(n1.mul(&n2), d1.mul(&d2))
});
binop!(Div, div, |a, b: &QScalar| {
    assert!(!b.is_zero(), "division by the zero rational function");
    a * &QScalar::make(b.den.clone(), b.num.clone())
});

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar { num: self.num.neg(), den: self.den.clone() }
    }
}
impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -&self
    }
}

impl AddAssign<&QScalar> for QScalar {
    fn add_assign(&mut self, rhs: &QScalar) {
        *self = &*self + rhs;
    }
}
impl SubAssign<&QScalar> for QScalar {
    fn sub_assign(&mut self, rhs: &QScalar) {
        *self = &*self - rhs;
    }
}
impl MulAssign<&QScalar> for QScalar {
    fn mul_assign(&mut self, rhs: &QScalar) {
        *self = &*self * rhs;
    }
}

/// The q-number [n] = (q^n - q^-n)/(q - q^-1) = q^{n-1} + q^{n-3} + ... + q^{1-n}.
pub fn q_number(n: i64) -> QScalar {
    if n == 0 {
        return QScalar::zero();
    }
    if n < 0 {
        return -q_number(-n);
    }
    // Laurent sum q^{1-n} (1 + q^2 + ... + q^{2(n-1)})
    let mut v = vec![BigInt::zero(); 2 * (n as usize) - 1];
    for i in 0..n as usize {
        v[2 * i] = BigInt::one();
    }
    QScalar::make(IntPoly::from_coeffs(v), IntPoly::one()) * QScalar::q_pow(1 - n)
}

/// Gauss binomial coefficient in base q^base_exponent.
pub fn q_binomial(n: u32, k: u32, base_exponent: i64) -> Result<QScalar, QFieldError> {
    if k > n {
        return Err(QFieldError::InvalidArgument(format!(
            "q_binomial: k = {k} exceeds n = {n}"
        )));
    }
    if base_exponent == 0 {
        return Err(QFieldError::InvalidArgument(
            "q_binomial: base exponent must be nonzero".into(),
        ));
    }
    let mut acc = QScalar::one();
    for i in 1..=k as i64 {
        let top = QScalar::one() - QScalar::q_pow(base_exponent * (n as i64 - k as i64 + i));
        let bot = QScalar::one() - QScalar::q_pow(base_exponent * i);
        acc = acc * top / bot;
    }
    Ok(acc)
}

/// Closed form of the geometric series sum_{n>=0} q^{cn} = 1/(1 - q^c).
pub fn geo_sum(c: i64) -> Result<QScalar, QFieldError> {
    if c <= 0 {
        return Err(QFieldError::InvalidArgument(format!(
            "geo_sum: exponent step must be positive, got {c}"
        )));
    }
    (QScalar::one() - QScalar::q_pow(c)).inverse()
}

/// Complex extension re + i*im over QScalar, for the action formulas with a
/// genuinely complex coefficient matrix. The engine's own results are real.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CScalar {
    pub re: QScalar,
    pub im: QScalar,
}

impl CScalar {
    pub fn real(re: QScalar) -> Self {
        CScalar { re, im: QScalar::zero() }
    }

    pub fn zero() -> Self {
        Self::real(QScalar::zero())
    }

    pub fn conj(&self) -> Self {
        CScalar { re: self.re.clone(), im: -&self.im }
    }

    pub fn abs2(&self) -> QScalar {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn add(&self, o: &Self) -> Self {
        CScalar { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Self) -> Self {
        CScalar { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &Self) -> Self {
        CScalar {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        CScalar { re: &self.re * c, im: &self.im * c }
    }
}

// ---------------------------------------------------------------------------
// Parsing of rational-function literals like "(3*q^2+1)/(2*(q^2-1))".
// ---------------------------------------------------------------------------

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn integer(&mut self) -> Result<BigInt, QFieldError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(QFieldError::Parse { pos: self.pos, msg: "expected integer".into() });
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }
}

impl QScalar {
    /// Parse a rational-function literal: integers, `q`, `^` (integer
    /// exponents), `*`, `/`, `+`, `-` and parentheses.
    pub fn parse(text: &str) -> Result<Self, QFieldError> {
        let mut lx = Lexer::new(text);
        let v = parse_sum(&mut lx)?;
        lx.skip_ws();
        if lx.pos != lx.src.len() {
            return Err(QFieldError::Parse { pos: lx.pos, msg: "trailing input".into() });
        }
        Ok(v)
    }
}

fn parse_sum(lx: &mut Lexer) -> Result<QScalar, QFieldError> {
    let mut acc = parse_product(lx)?;
    loop {
        match lx.peek() {
            Some(b'+') => {
                lx.bump();
                acc = acc + parse_product(lx)?;
            }
            Some(b'-') => {
                lx.bump();
                acc = acc - parse_product(lx)?;
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_product(lx: &mut Lexer) -> Result<QScalar, QFieldError> {
    let mut acc = parse_atom(lx)?;
    loop {
        match lx.peek() {
            Some(b'*') => {
                lx.bump();
                acc = acc * parse_atom(lx)?;
            }
            Some(b'/') => {
                lx.bump();
                let d = parse_atom(lx)?;
                if d.is_zero() {
                    return Err(QFieldError::DivisionByZero);
                }
                acc = acc / d;
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_atom(lx: &mut Lexer) -> Result<QScalar, QFieldError> {
    let base = match lx.peek() {
        Some(b'(') => {
            lx.bump();
            let v = parse_sum(lx)?;
            match lx.bump() {
                Some(b')') => v,
                _ => {
                    return Err(QFieldError::Parse { pos: lx.pos, msg: "expected ')'".into() })
                }
            }
        }
        Some(b'-') => {
            lx.bump();
            return Ok(-parse_atom(lx)?);
        }
        Some(b'q') => {
            lx.bump();
            QScalar::q()
        }
        Some(c) if c.is_ascii_digit() => {
            QScalar { num: IntPoly::constant(lx.integer()?), den: IntPoly::one() }
        }
        _ => {
            return Err(QFieldError::Parse {
                pos: lx.pos,
                msg: "expected number, q, or parenthesized expression".into(),
            })
        }
    };
    if lx.peek() == Some(b'^') {
        lx.bump();
        let negative = if lx.peek() == Some(b'-') {
            lx.bump();
            true
        } else {
            false
        };
        let e = lx.integer()?;
        let e: i32 = num::ToPrimitive::to_i32(&e).ok_or(QFieldError::Parse {
            pos: lx.pos,
            msg: "exponent too large".into(),
        })?;
        return base.pow(if negative { -e } else { e });
    }
    Ok(base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::FromPrimitive;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn common_denominator_addition() {
        let a = QScalar::parse("1/(1-q^2)").unwrap();
        let b = QScalar::parse("(-q^2)/(1-q^2)").unwrap();
        assert_eq!(a + b, QScalar::one());
    }

    #[test]
    fn factor_cancellation() {
        let x = QScalar::parse("(1-q^4)/(1-q^2)").unwrap();
        assert_eq!(x, QScalar::parse("1+q^2").unwrap());
    }

    #[test]
    fn subtraction_to_zero() {
        let x = QScalar::parse("(3*q^2+1)/(2*(q^2-1))").unwrap();
        assert!((x.clone() - x).is_zero());
    }

    #[test]
    fn eval_examples() {
        let x = QScalar::parse("(3*q^2+1)/(2*(q^2-1))").unwrap();
        assert_eq!(x.eval_at(&rat(1, 2)).unwrap(), rat(-7, 6));
        let y = QScalar::parse("2/(1-q^2)").unwrap();
        assert_eq!(y.eval_at(&rat(1, 2)).unwrap(), rat(8, 3));
        let z = QScalar::parse("1/(1-q^2)").unwrap();
        assert!(matches!(
            z.eval_at(&BigRational::from_i64(1).unwrap()),
            Err(QFieldError::Pole { .. })
        ));
    }

    #[test]
    fn eval_is_multiplicative() {
        let x = QScalar::parse("(1+q)/(1-q^3)").unwrap();
        let y = QScalar::parse("q^2-2").unwrap();
        let p = rat(2, 5);
        assert_eq!(
            (&x * &y).eval_at(&p).unwrap(),
            x.eval_at(&p).unwrap() * y.eval_at(&p).unwrap()
        );
    }

    #[test]
    fn q_numbers() {
        assert_eq!(q_number(1), QScalar::one());
        assert_eq!(q_number(3), QScalar::parse("q^-2+1+q^2").unwrap());
        assert_eq!(q_number(-2), -q_number(2));
        assert!(q_number(0).is_zero());
    }

    #[test]
    fn gauss_binomial() {
        assert_eq!(q_binomial(2, 1, 2).unwrap(), QScalar::parse("1+q^2").unwrap());
        assert_eq!(q_binomial(4, 0, 2).unwrap(), QScalar::one());
        assert!(q_binomial(1, 2, 2).is_err());
        assert!(q_binomial(2, 1, 0).is_err());
        // base q^{-2} stays rational
        let b = q_binomial(3, 1, -2).unwrap();
        assert_eq!(b, QScalar::parse("1 + q^-2 + q^-4").unwrap());
    }

    #[test]
    fn geometric_series() {
        assert_eq!(geo_sum(2).unwrap(), QScalar::parse("1/(1-q^2)").unwrap());
        assert_eq!(geo_sum(1).unwrap(), QScalar::parse("1/(1-q)").unwrap());
        assert_eq!(geo_sum(4).unwrap().eval_at(&rat(1, 2)).unwrap(), rat(16, 15));
        assert!(geo_sum(0).is_err());
    }

    #[test]
    fn canonical_negative_powers() {
        // q^{-2} + 1 = (1 + q^2)/q^2 with positive leading denominator
        let x = QScalar::q_pow(-2) + QScalar::one();
        assert_eq!(x.to_string(), "(q^2 + 1)/(q^2)");
    }
}

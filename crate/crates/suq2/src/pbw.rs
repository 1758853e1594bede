//! The coordinate *-algebra of SU_q(2) in Poincare-Birkhoff-Witt normal form.
//!
//! Generators a, b with relations
//!   ba = q ab,  b*a = q ab*,  bb* = b*b,
//!   a*a + q^2 b*b = 1,  aa* + bb* = 1.
//! Every element decomposes uniquely over the monomials a^alpha b^beta b*^gamma
//! where a negative alpha stands for a*^{|alpha|}.

use crate::qfield::QScalar;
use std::collections::BTreeMap;
use std::fmt;

/// A single generator letter of a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    A,
    AStar,
    B,
    BStar,
}

impl Letter {
    pub fn star(self) -> Self {
        match self {
            Letter::A => Letter::AStar,
            Letter::AStar => Letter::A,
            Letter::B => Letter::BStar,
            Letter::BStar => Letter::B,
        }
    }
}

/// Canonical monomial a^alpha b^beta b*^gamma.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PBWMonomial {
    /// Power of a; negative means a*^{|alpha|}.
    pub alpha: i64,
    pub beta: u32,
    pub gamma: u32,
}

impl PBWMonomial {
    pub fn new(alpha: i64, beta: u32, gamma: u32) -> Self {
        PBWMonomial { alpha, beta, gamma }
    }

    pub fn one() -> Self {
        PBWMonomial { alpha: 0, beta: 0, gamma: 0 }
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut w = Vec::new();
        let la = if self.alpha >= 0 { Letter::A } else { Letter::AStar };
        for _ in 0..self.alpha.unsigned_abs() {
            w.push(la);
        }
        for _ in 0..self.beta {
            w.push(Letter::B);
        }
        for _ in 0..self.gamma {
            w.push(Letter::BStar);
        }
        w
    }

    /// Total letter count, a rough size measure.
    pub fn length(&self) -> usize {
        self.alpha.unsigned_abs() as usize + self.beta as usize + self.gamma as usize
    }
}

impl fmt::Display for PBWMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alpha == 0 && self.beta == 0 && self.gamma == 0 {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        if self.alpha != 0 {
            let g = if self.alpha > 0 { "a" } else { "a*" };
            let p = self.alpha.unsigned_abs();
            if p == 1 {
                parts.push(g.to_string());
            } else {
                parts.push(format!("{g}^{p}"));
            }
        }
        if self.beta == 1 {
            parts.push("b".into());
        } else if self.beta > 1 {
            parts.push(format!("b^{}", self.beta));
        }
        if self.gamma == 1 {
            parts.push("b*".into());
        } else if self.gamma > 1 {
            parts.push(format!("b*^{}", self.gamma));
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// Finite linear combination of PBW monomials with QScalar coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<PBWMonomial, QScalar>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(PBWMonomial::one())
    }

    pub fn monomial(m: PBWMonomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, QScalar::one());
        AlgebraElement { terms }
    }

    pub fn gen_a() -> Self {
        Self::monomial(PBWMonomial::new(1, 0, 0))
    }

    pub fn gen_a_star() -> Self {
        Self::monomial(PBWMonomial::new(-1, 0, 0))
    }

    pub fn gen_b() -> Self {
        Self::monomial(PBWMonomial::new(0, 1, 0))
    }

    pub fn gen_b_star() -> Self {
        Self::monomial(PBWMonomial::new(0, 0, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PBWMonomial, &QScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: PBWMonomial, c: QScalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(QScalar::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(*m, -c);
        }
        out
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (m, x) in self.terms() {
            out.add_term(*m, x * c);
        }
        out
    }

    /// Right-multiply by a single generator, re-normalizing.
    fn mul_letter(&self, g: Letter) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            match g {
                Letter::B => {
                    out.add_term(PBWMonomial::new(m.alpha, m.beta + 1, m.gamma), c.clone());
                }
                Letter::BStar => {
                    out.add_term(PBWMonomial::new(m.alpha, m.beta, m.gamma + 1), c.clone());
                }
                Letter::A => {
                    // b^beta b*^gamma a = q^{beta+gamma} a b^beta b*^gamma
                    let cross = c * QScalar::q_pow((m.beta + m.gamma) as i64);
                    if m.alpha >= 0 {
                        out.add_term(PBWMonomial::new(m.alpha + 1, m.beta, m.gamma), cross);
                    } else {
                        // a*^{k} a = a*^{k-1} (1 - q^2 b*b)
                        out.add_term(
                            PBWMonomial::new(m.alpha + 1, m.beta, m.gamma),
                            cross.clone(),
                        );
                        out.add_term(
                            PBWMonomial::new(m.alpha + 1, m.beta + 1, m.gamma + 1),
                            -(cross * QScalar::q_pow(2)),
                        );
                    }
                }
                Letter::AStar => {
                    let cross = c * QScalar::q_pow(-((m.beta + m.gamma) as i64));
                    if m.alpha <= 0 {
                        out.add_term(PBWMonomial::new(m.alpha - 1, m.beta, m.gamma), cross);
                    } else {
                        // a^{k} a* = a^{k-1} (1 - bb*)
                        out.add_term(
                            PBWMonomial::new(m.alpha - 1, m.beta, m.gamma),
                            cross.clone(),
                        );
                        out.add_term(
                            PBWMonomial::new(m.alpha - 1, m.beta + 1, m.gamma + 1),
                            -cross,
                        );
                    }
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m, c) in other.terms() {
            let mut acc = self.scale(c);
            for g in m.letters() {
                acc = acc.mul_letter(g);
            }
            out = out.add(&acc);
        }
        out
    }

    /// The *-involution: reverses words and stars every letter.
    /// Coefficients are real rationals, so only the letters change.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            // (a^alpha b^beta b*^gamma)* = b^gamma b*^beta a^{-alpha}
            let mut acc =
                Self::monomial(PBWMonomial::new(0, m.gamma, m.beta)).scale(c);
            let la = if m.alpha >= 0 { Letter::AStar } else { Letter::A };
            for _ in 0..m.alpha.unsigned_abs() {
                acc = acc.mul_letter(la);
            }
            out = out.add(&acc);
        }
        out
    }
}

/// Normal form of an arbitrary word in the generators.
pub fn reduce_word(letters: &[Letter]) -> AlgebraElement {
    let mut acc = AlgebraElement::one();
    for &g in letters {
        acc = acc.mul_letter(g);
    }
    acc
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c}) {m}")?;
            }
        }
        Ok(())
    }
}

/// Parse a monomial string like "a^2 b b*" or "a*^3".
pub fn parse_monomial(text: &str) -> Result<PBWMonomial, String> {
    let mut alpha: i64 = 0;
    let mut beta: u32 = 0;
    let mut gamma: u32 = 0;
    let mut it = text.split_whitespace().peekable();
    if text.trim() == "1" {
        return Ok(PBWMonomial::one());
    }
    for tok in it {
        let (gen, pow) = match tok.find('^') {
            Some(i) => {
                let p: u32 = tok[i + 1..]
                    .parse()
                    .map_err(|_| format!("bad exponent in '{tok}'"))?;
                (&tok[..i], p)
            }
            None => (tok, 1),
        };
        match gen {
            "a" => alpha += pow as i64,
            "a*" => alpha -= pow as i64,
            "b" => beta += pow,
            "b*" => gamma += pow,
            _ => return Err(format!("unknown generator '{gen}'")),
        }
    }
    Ok(PBWMonomial::new(alpha, beta, gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::*;

    fn q2() -> QScalar {
        QScalar::q_pow(2)
    }

    #[test]
    fn defining_relations_reduce() {
        // ba = q ab
        let ba = reduce_word(&[B, A]);
        let ab = reduce_word(&[A, B]).scale(&QScalar::q());
        assert_eq!(ba, ab);
        // b*a = q ab*
        assert_eq!(
            reduce_word(&[BStar, A]),
            reduce_word(&[A, BStar]).scale(&QScalar::q())
        );
        // bb* = b*b
        assert_eq!(reduce_word(&[B, BStar]), reduce_word(&[BStar, B]));
        // aa* = 1 - bb*
        assert_eq!(
            reduce_word(&[A, AStar]),
            AlgebraElement::one().sub(&reduce_word(&[B, BStar]))
        );
        // a*a = 1 - q^2 b*b
        assert_eq!(
            reduce_word(&[AStar, A]),
            AlgebraElement::one().sub(&reduce_word(&[B, BStar]).scale(&q2()))
        );
    }

    #[test]
    fn multiply_and_adjoint_examples() {
        let b = AlgebraElement::gen_b();
        let bs = AlgebraElement::gen_b_star();
        assert_eq!(
            b.mul(&bs),
            AlgebraElement::monomial(PBWMonomial::new(0, 1, 1))
        );
        // adjoint(a b) = b* a* = q^{-1} a* b*  (adjoint of ba = q ab)
        let ab = reduce_word(&[A, B]);
        assert_eq!(ab.adjoint(), reduce_word(&[BStar, AStar]));
        assert_eq!(
            ab.adjoint(),
            AlgebraElement::monomial(PBWMonomial::new(-1, 0, 1)).scale(&QScalar::q_pow(-1))
        );
        // associativity instance: a (a* a) = (a a*) a
        let a = AlgebraElement::gen_a();
        let asa = reduce_word(&[AStar, A]);
        let aas = reduce_word(&[A, AStar]);
        assert_eq!(a.mul(&asa), aas.mul(&a));
    }

    #[test]
    fn adjoint_is_involutive_antihomomorphism() {
        let x = reduce_word(&[A, B, AStar]);
        let y = reduce_word(&[BStar, A]);
        assert_eq!(x.adjoint().adjoint(), x);
        assert_eq!(x.mul(&y).adjoint(), y.adjoint().mul(&x.adjoint()));
    }

    #[test]
    fn monomial_parser_roundtrip() {
        let m = parse_monomial("a^2 b b*").unwrap();
        assert_eq!(m, PBWMonomial::new(2, 1, 1));
        assert_eq!(parse_monomial(&m.to_string()).unwrap(), m);
        assert_eq!(parse_monomial("a*^3 b^2").unwrap(), PBWMonomial::new(-3, 2, 0));
        assert!(parse_monomial("c").is_err());
    }
}

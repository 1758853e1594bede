//! Surface syntax for one-forms.
//!
//! Grammar:
//!   expr   := term (('+' | '-') term)*
//!   term   := factor+            (juxtaposition or '*' both multiply)
//!   factor := gen ['^' int]
//!           | ('d' | 'delta') '(' expr ')'
//!           | '(' expr ')' ['^' int]
//!           | scalar atom (integer or q) ['^' int]
//! A star glued to a generator ("a*", "b*") is the adjoint; a free-standing
//! '*' is multiplication. `d` builds a true one-form (with the sign
//! operator), `delta` the associated derivation form; a well-formed
//! one-form has exactly one of them per expanded term and a single flavor
//! throughout.

use num::BigInt;
use std::fmt;
use suq2::pbw::{AlgebraElement, Letter};
use suq2::qfield::QScalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Sum(Vec<(bool, Expr)>),
    Product(Vec<Expr>),
    Pow(Box<Expr>, i32),
    Gen(Letter),
    Int(BigInt),
    QVar,
    D(Box<Expr>),
    Delta(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Gen(Letter),
    Int(BigInt),
    QVar,
    D,
    Delta,
    Plus,
    Minus,
    Times,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                toks.push((i, Tok::Times));
                i += 1;
            }
            b'/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            b'^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            b'a' | b'b' => {
                let star = i + 1 < bytes.len() && bytes[i + 1] == b'*';
                let letter = match (c, star) {
                    (b'a', false) => Letter::A,
                    (b'a', true) => Letter::AStar,
                    (b'b', false) => Letter::B,
                    (b'b', true) => Letter::BStar,
                    _ => unreachable!(),
                };
                toks.push((i, Tok::Gen(letter)));
                i += if star { 2 } else { 1 };
            }
            b'q' => {
                toks.push((i, Tok::QVar));
                i += 1;
            }
            b'd' => {
                if src[i..].starts_with("delta") {
                    toks.push((i, Tok::Delta));
                    i += 5;
                } else {
                    toks.push((i, Tok::D));
                    i += 1;
                }
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push((start, Tok::Int(src[start..i].parse().unwrap())));
            }
            _ => {
                // UTF-8 delta
                if src[i..].starts_with('\u{03b4}') {
                    toks.push((i, Tok::Delta));
                    i += '\u{03b4}'.len_utf8();
                } else {
                    return Err(ParseError {
                        pos: i,
                        msg: format!("unexpected character {:?}", src[i..].chars().next().unwrap()),
                    });
                }
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|(_, t)| t.clone());
        self.i += 1;
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.bump();
            Ok(())
        } else {
            Err(ParseError { pos: self.pos(), msg: format!("expected {what}") })
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let mut positive = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                false
            }
            Some(Tok::Plus) => {
                self.bump();
                true
            }
            _ => true,
        };
        loop {
            terms.push((positive, self.term()?));
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    positive = true;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    positive = false;
                }
                _ => break,
            }
        }
        if terms.len() == 1 && terms[0].0 {
            Ok(terms.pop().unwrap().1)
        } else {
            Ok(Expr::Sum(terms))
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Some(Tok::Times) => {
                    self.bump();
                    factors.push(self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let d = self.factor()?;
                    factors.push(Expr::Pow(Box::new(d), -1));
                }
                Some(Tok::Gen(_) | Tok::Int(_) | Tok::QVar | Tok::D | Tok::Delta | Tok::LParen) => {
                    factors.push(self.factor()?);
                }
                _ => break,
            }
        }
        if factors.len() == 1 {
            Ok(factors.pop().unwrap())
        } else {
            Ok(Expr::Product(factors))
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        let base = match self.bump() {
            Some(Tok::Gen(l)) => Expr::Gen(l),
            Some(Tok::Int(n)) => Expr::Int(n),
            Some(Tok::QVar) => Expr::QVar,
            Some(Tok::D) => {
                self.expect(Tok::LParen, "'(' after d")?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Expr::D(Box::new(inner))
            }
            Some(Tok::Delta) => {
                self.expect(Tok::LParen, "'(' after delta")?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Expr::Delta(Box::new(inner))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                inner
            }
            Some(Tok::Minus) => {
                let inner = self.factor()?;
                return Ok(Expr::Sum(vec![(false, inner)]));
            }
            _ => {
                return Err(ParseError {
                    pos,
                    msg: "expected generator, number, q, d(...), delta(...) or '('".into(),
                })
            }
        };
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let neg = if self.peek() == Some(&Tok::Minus) {
                self.bump();
                true
            } else {
                false
            };
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e: i32 = num::ToPrimitive::to_i32(&n).ok_or(ParseError {
                        pos: self.pos(),
                        msg: "exponent out of range".into(),
                    })?;
                    return Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }));
                }
                _ => {
                    return Err(ParseError { pos: self.pos(), msg: "expected integer exponent".into() })
                }
            }
        }
        Ok(base)
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let end = src.len();
    let mut p = Parser { toks, i: 0, end };
    let e = p.expr()?;
    if p.i != p.toks.len() {
        return Err(ParseError { pos: p.pos(), msg: "trailing input".into() });
    }
    Ok(e)
}

/// Unambiguous printer; `parse(print(e))` reproduces the tree up to the
/// flattening conventions used by the parser.
pub fn print(e: &Expr) -> String {
    fn atom(e: &Expr) -> String {
        match e {
            Expr::Gen(Letter::A) => "a".into(),
            Expr::Gen(Letter::AStar) => "a*".into(),
            Expr::Gen(Letter::B) => "b".into(),
            Expr::Gen(Letter::BStar) => "b*".into(),
            Expr::Int(n) => n.to_string(),
            Expr::QVar => "q".into(),
            Expr::D(inner) => format!("d({})", print(inner)),
            Expr::Delta(inner) => format!("delta({})", print(inner)),
            Expr::Pow(b, e) => {
                let bs = match &**b {
                    Expr::Sum(_) | Expr::Product(_) | Expr::Pow(..) => {
                        format!("({})", print(b))
                    }
                    other => atom(other),
                };
                if *e < 0 {
                    format!("{bs}^-{}", -e)
                } else {
                    format!("{bs}^{e}")
                }
            }
            Expr::Sum(_) | Expr::Product(_) => format!("({})", print(e)),
        }
    }
    match e {
        Expr::Sum(terms) => {
            let mut s = String::new();
            for (i, (pos, t)) in terms.iter().enumerate() {
                if i == 0 {
                    if !pos {
                        s.push_str("- ");
                    }
                } else {
                    s.push_str(if *pos { " + " } else { " - " });
                }
                let needs_paren = matches!(t, Expr::Sum(_));
                if needs_paren {
                    s.push_str(&format!("({})", print(t)));
                } else {
                    s.push_str(&print(t));
                }
            }
            s
        }
        Expr::Product(fs) => fs
            .iter()
            .map(|f| match f {
                Expr::Sum(_) => format!("({})", print(f)),
                _ => atom(f),
            })
            .collect::<Vec<_>>()
            .join(" * "),
        other => atom(other),
    }
}

// ---------------------------------------------------------------------------
// Lowering.
// ---------------------------------------------------------------------------

/// d builds true one-forms (carrying the sign operator); delta builds the
/// associated derivation forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormFlavor {
    D,
    Delta,
}

/// A lowered one-form: flavor plus the presentation sum x_i (d|delta)(y_i).
#[derive(Clone, Debug)]
pub struct LoweredForm {
    pub flavor: FormFlavor,
    pub pairs: Vec<(AlgebraElement, AlgebraElement)>,
}

impl LoweredForm {
    pub fn to_oneform(&self) -> suq2::oneform::OneForm {
        let mut a = suq2::oneform::OneForm::zero();
        for (x, y) in &self.pairs {
            a.add_pair(x, y);
        }
        a
    }
}

#[derive(Clone, Debug)]
enum Value {
    Scalar(QScalar),
    Algebra(AlgebraElement),
    Form(LoweredForm),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerError(pub String);

impl fmt::Display for LowerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for LowerError {}

fn mul_values(a: Value, b: Value) -> Result<Value, LowerError> {
    use Value::*;
    Ok(match (a, b) {
        (Scalar(x), Scalar(y)) => Scalar(x * y),
        (Scalar(x), Algebra(y)) | (Algebra(y), Scalar(x)) => Algebra(y.scale(&x)),
        (Scalar(c), Form(f)) | (Form(f), Scalar(c)) => Form(LoweredForm {
            flavor: f.flavor,
            pairs: f.pairs.into_iter().map(|(x, y)| (x.scale(&c), y)).collect(),
        }),
        (Algebra(x), Algebra(y)) => Algebra(x.mul(&y)),
        (Algebra(z), Form(f)) => Form(LoweredForm {
            flavor: f.flavor,
            pairs: f.pairs.into_iter().map(|(x, y)| (z.mul(&x), y)).collect(),
        }),
        (Form(f), Algebra(z)) => {
            // x d(y) z = x d(yz) - x y d(z)
            let mut pairs = Vec::with_capacity(f.pairs.len() * 2);
            for (x, y) in f.pairs {
                pairs.push((x.clone(), y.mul(&z)));
                pairs.push((x.mul(&y).scale(&-QScalar::one()), z.clone()));
            }
            Form(LoweredForm { flavor: f.flavor, pairs })
        }
        (Form(_), Form(_)) => {
            return Err(LowerError(
                "a well-formed one-form has exactly one d/delta per term".into(),
            ))
        }
    })
}

fn add_values(a: Value, b: Value) -> Result<Value, LowerError> {
    use Value::*;
    Ok(match (a, b) {
        (Scalar(x), Scalar(y)) => Scalar(x + y),
        (Algebra(x), Algebra(y)) => Algebra(x.add(&y)),
        (Form(mut f), Form(g)) => {
            if f.flavor != g.flavor {
                return Err(LowerError("cannot mix d and delta in one expression".into()));
            }
            f.pairs.extend(g.pairs);
            Form(f)
        }
        (Scalar(x), Algebra(y)) | (Algebra(y), Scalar(x)) => {
            Algebra(y.add(&AlgebraElement::one().scale(&x)))
        }
        _ => return Err(LowerError("cannot add a one-form to a scalar or algebra element".into())),
    })
}

fn eval(e: &Expr) -> Result<Value, LowerError> {
    use Value::*;
    Ok(match e {
        Expr::Gen(l) => Algebra(suq2::pbw::reduce_word(&[*l])),
        Expr::Int(n) => Scalar(QScalar::from_rational(&num::BigRational::from_integer(
            n.clone(),
        ))),
        Expr::QVar => Scalar(QScalar::q()),
        Expr::D(inner) | Expr::Delta(inner) => {
            let flavor = if matches!(e, Expr::D(_)) { FormFlavor::D } else { FormFlavor::Delta };
            match eval(inner)? {
                Algebra(y) => Form(LoweredForm {
                    flavor,
                    pairs: vec![(AlgebraElement::one(), y)],
                }),
                Scalar(_) => Form(LoweredForm { flavor, pairs: vec![] }),
                Form(_) => return Err(LowerError("nested d/delta is not a one-form".into())),
            }
        }
        Expr::Sum(terms) => {
            let mut acc: Option<Value> = None;
            for (positive, t) in terms {
                let mut v = eval(t)?;
                if !positive {
                    v = mul_values(Scalar(-QScalar::one()), v)?;
                }
                acc = Some(match acc {
                    None => v,
                    Some(a) => add_values(a, v)?,
                });
            }
            acc.ok_or(LowerError("empty expression".into()))?
        }
        Expr::Product(fs) => {
            let mut acc = eval(&fs[0])?;
            for f in &fs[1..] {
                acc = mul_values(acc, eval(f)?)?;
            }
            acc
        }
        Expr::Pow(b, k) => {
            let base = eval(b)?;
            match base {
                Scalar(x) => Scalar(
                    x.pow(*k)
                        .map_err(|e| LowerError(format!("scalar power: {e}")))?,
                ),
                Algebra(x) => {
                    if *k < 0 {
                        // negative powers only for a single generator
                        if let Expr::Gen(l) = &**b {
                            let star = suq2::pbw::reduce_word(&[l.star()]);
                            let mut acc = AlgebraElement::one();
                            for _ in 0..(-k) {
                                acc = acc.mul(&star);
                            }
                            Algebra(acc)
                        } else {
                            return Err(LowerError(
                                "negative powers are only defined for single generators".into(),
                            ));
                        }
                    } else {
                        let mut acc = AlgebraElement::one();
                        for _ in 0..*k {
                            acc = acc.mul(&x);
                        }
                        Algebra(acc)
                    }
                }
                Form(f) => {
                    if *k == 1 {
                        Form(f)
                    } else {
                        return Err(LowerError("one-forms cannot be raised to powers here".into()));
                    }
                }
            }
        }
    })
}

/// Lower a parsed expression to a one-form presentation.
pub fn lower(e: &Expr) -> Result<LoweredForm, LowerError> {
    match eval(e)? {
        Value::Form(f) => Ok(f),
        _ => Err(LowerError(
            "expression is not a one-form (no d/delta present)".into(),
        )),
    }
}

/// Lower an expression that should be a plain scalar (used for --q etc.).
pub fn lower_scalar(e: &Expr) -> Result<QScalar, LowerError> {
    match eval(e)? {
        Value::Scalar(s) => Ok(s),
        _ => Err(LowerError("expression is not a scalar".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_forms() {
        let e = parse("a* d(a)").unwrap();
        let f = lower(&e).unwrap();
        assert_eq!(f.flavor, FormFlavor::D);
        assert_eq!(f.pairs.len(), 1);
        let a = f.to_oneform();
        assert_eq!(a.terms().count(), 1);
    }

    #[test]
    fn powers_of_groups() {
        let e = parse("(b b*)^2 b d(b*)").unwrap();
        let f = lower(&e).unwrap();
        let a = f.to_oneform();
        let ((al, be), c) = a.terms().next().unwrap();
        assert_eq!(al, &suq2::pbw::PBWMonomial::new(0, 3, 2));
        assert_eq!(be, &suq2::pbw::PBWMonomial::new(0, 0, 1));
        assert!(c.is_one());
    }

    #[test]
    fn nested_d_is_rejected() {
        let e = parse("d(d(a))").unwrap();
        assert!(lower(&e).is_err());
        assert!(lower(&parse("a b").unwrap()).is_err());
        assert!(lower(&parse("d(a) delta(b)").unwrap()).is_err());
    }

    #[test]
    fn right_factors_are_leibnized() {
        // d(a) b = d(a b) - a d(b)
        let e = parse("d(a) b").unwrap();
        let f = lower(&e).unwrap();
        assert_eq!(f.pairs.len(), 2);
    }

    #[test]
    fn coefficients_parse() {
        let e = parse("1/(1-q^2) * (a* d(a) + q^2 * b d(b*))").unwrap();
        let f = lower(&e).unwrap();
        assert_eq!(f.pairs.len(), 2);
    }

    #[test]
    fn adjoint_star_vs_times() {
        let e = parse("2*a d(a*)").unwrap();
        let f = lower(&e).unwrap();
        let a = f.to_oneform();
        let ((al, _), c) = a.terms().next().unwrap();
        assert_eq!(al.alpha, 1);
        assert_eq!(c, &QScalar::from_int(2));
    }

    #[test]
    fn print_parse_roundtrip_examples() {
        for s in [
            "a* d(a)",
            "(b b*)^2 b d(b*)",
            "1/(1-q^2) * a* d(a) + q^2 b d(b*)",
            "- a d(b) + 3 * b* delta(a)",
        ] {
            let e = parse(s).unwrap();
            let printed = print(&e);
            let e2 = parse(&printed).unwrap();
            assert_eq!(
                print(&e2),
                printed,
                "printing is stable for {s} -> {printed}"
            );
        }
    }
}

//! Residue machinery: the *-homomorphism r from the shift-operator algebra
//! into pi_+(A) (x) pi_-(A), the functionals tau_0 and tau_1, the residue
//! formulas for the noncommutative integrals at |D|^{-1}, |D|^{-2} and
//! |D|^{-3}, right-normalization of pseudodifferential products, and the
//! membership test for the ideal R invisible to the top two residues.

use crate::qfield::{geo_sum, QFieldError, QScalar};
use crate::xalg::{word_degree, Gen, XElement};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HopfError {
    #[error("inverse Dirac power must be 1, 2 or 3, got {0}")]
    BadPower(u8),
    #[error(transparent)]
    Field(#[from] QFieldError),
}

/// Image monomial a^alpha b^m in the quotient representations pi_+- where
/// b and b* coincide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuotientMonomial {
    pub alpha: i64,
    pub m: u32,
}

impl QuotientMonomial {
    pub fn one() -> Self {
        QuotientMonomial { alpha: 0, m: 0 }
    }

    pub fn is_one(&self) -> bool {
        self.alpha == 0 && self.m == 0
    }
}

/// Which of the two quotient representations a tensor slot carries; they
/// differ only through the sign in pi_-(b) eps_n = -q^n eps_n, which enters
/// tau_0 alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepSign {
    Plus,
    Minus,
}

/// tau_1: the Haar-circle functional. 1 on the identity monomial, 0 otherwise.
pub fn tau1(x: &QuotientMonomial) -> QScalar {
    if x.is_one() {
        QScalar::one()
    } else {
        QScalar::zero()
    }
}

/// tau_0: the regularized trace remainder. Vanishes off the diagonal and on
/// the identity; on b^m it sums the geometric series (+-q^n)^m.
pub fn tau0(x: &QuotientMonomial, sign: RepSign) -> QScalar {
    if x.alpha != 0 || x.m == 0 {
        return QScalar::zero();
    }
    let s = geo_sum(x.m as i64).expect("m >= 1");
    match sign {
        RepSign::Plus => s,
        RepSign::Minus => {
            if x.m.is_multiple_of(2) {
                s
            } else {
                -s
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Quotient algebra arithmetic: ba = q ab, a*a = 1 - q^2 b^2, aa* = 1 - b^2,
// normal form a^alpha b^m.
// ---------------------------------------------------------------------------

type QEl = BTreeMap<QuotientMonomial, QScalar>;

fn qel_add(el: &mut QEl, k: QuotientMonomial, c: QScalar) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match el.entry(k) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += &c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Right-multiply a quotient element by a (da = +1) or a* (da = -1).
fn qel_mul_a(el: &QEl, da: i64) -> QEl {
    let mut out = QEl::new();
    for (k, c) in el {
        let cross = c * QScalar::q_pow(da * k.m as i64);
        let next = QuotientMonomial { alpha: k.alpha + da, m: k.m };
        if (da > 0 && k.alpha >= 0) || (da < 0 && k.alpha <= 0) {
            qel_add(&mut out, next, cross);
        } else if da > 0 {
            // a*^k a = a*^{k-1} (1 - q^2 b^2)
            qel_add(&mut out, next, cross.clone());
            qel_add(
                &mut out,
                QuotientMonomial { alpha: next.alpha, m: k.m + 2 },
                -(cross * QScalar::q_pow(2)),
            );
        } else {
            // a^k a* = a^{k-1} (1 - b^2)
            qel_add(&mut out, next, cross.clone());
            qel_add(
                &mut out,
                QuotientMonomial { alpha: next.alpha, m: k.m + 2 },
                -cross,
            );
        }
    }
    out
}

/// Product of two quotient monomials, fully expanded.
pub fn quotient_product(x: &QuotientMonomial, y: &QuotientMonomial) -> Vec<(QuotientMonomial, QScalar)> {
    let mut el = QEl::new();
    el.insert(*x, QScalar::one());
    let da = if y.alpha >= 0 { 1 } else { -1 };
    for _ in 0..y.alpha.unsigned_abs() {
        el = qel_mul_a(&el, da);
    }
    el.into_iter()
        .map(|(k, c)| (QuotientMonomial { alpha: k.alpha, m: k.m + y.m }, c))
        .collect()
}

// ---------------------------------------------------------------------------
// The r-map.
// ---------------------------------------------------------------------------

/// Image of a single generator: (pi_+ monomial, pi_- monomial, coefficient).
fn r_letter(g: Gen) -> (QuotientMonomial, QuotientMonomial, QScalar) {
    let a = |k: i64| QuotientMonomial { alpha: k, m: 0 };
    let b = QuotientMonomial { alpha: 0, m: 1 };
    match g {
        Gen::APlus => (a(1), a(1), QScalar::one()),
        Gen::AMinus => (b, b, -QScalar::q()),
        Gen::BPlus => (a(1), b, -QScalar::one()),
        Gen::BMinus => (b, a(-1), -QScalar::one()),
        Gen::APlusStar => (a(-1), a(-1), QScalar::one()),
        Gen::AMinusStar => (b, b, -QScalar::q()),
        Gen::BPlusStar => (a(-1), b, -QScalar::one()),
        Gen::BMinusStar => (b, a(1), -QScalar::one()),
    }
}

/// A finite sum of simple tensors in pi_+(A) (x) pi_-(A).
pub type TensorElement = BTreeMap<(QuotientMonomial, QuotientMonomial), QScalar>;

fn tensor_add(t: &mut TensorElement, k: (QuotientMonomial, QuotientMonomial), c: QScalar) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match t.entry(k) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += &c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// r of a single word, quotient-reduced.
pub fn r_word(w: &[Gen]) -> TensorElement {
    let mut acc = TensorElement::new();
    acc.insert((QuotientMonomial::one(), QuotientMonomial::one()), QScalar::one());
    for &g in w {
        let (p_img, m_img, coeff) = r_letter(g);
        let mut next = TensorElement::new();
        for ((p, m), c) in &acc {
            let base = c * &coeff;
            for (p2, cp) in quotient_product(p, &p_img) {
                for (m2, cm) in quotient_product(m, &m_img) {
                    tensor_add(&mut next, (p2, m2), &base * &cp * &cm);
                }
            }
        }
        acc = next;
    }
    acc
}

/// Product in pi_+(A) (x) pi_-(A), each slot quotient-reduced.
pub fn tensor_mul(a: &TensorElement, b: &TensorElement) -> TensorElement {
    let mut out = TensorElement::new();
    for ((p1, m1), c1) in a {
        for ((p2, m2), c2) in b {
            let base = c1 * c2;
            for (p, cp) in quotient_product(p1, p2) {
                for (m, cm) in quotient_product(m1, m2) {
                    tensor_add(&mut out, (p, m), &base * &cp * &cm);
                }
            }
        }
    }
    out
}

/// Homomorphic extension of r to a full element; the plain part and the
/// F-coefficient part are mapped separately (F is not in the domain of r).
pub fn r_map(t: &XElement) -> (TensorElement, TensorElement) {
    let mut plain = TensorElement::new();
    for (w, c) in t.plain_words() {
        for (k, v) in r_word(w) {
            tensor_add(&mut plain, k, v * c);
        }
    }
    let mut f = TensorElement::new();
    for (w, c) in t.f_words() {
        for (k, v) in r_word(w) {
            tensor_add(&mut f, k, v * c);
        }
    }
    (plain, f)
}

// ---------------------------------------------------------------------------
// Degree-tagged tensors. The j-shift degree is not a function of the tensor
// image (r has a kernel), so products that later need a degree filter carry
// the degree of their preimage words as an extra grading tag.
// ---------------------------------------------------------------------------

pub type GradedKey = (QuotientMonomial, QuotientMonomial, i32);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedTensor(pub BTreeMap<GradedKey, QScalar>);

impl GradedTensor {
    fn add(&mut self, k: GradedKey, c: QScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry(k) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

/// r with degree tags for the plain and F parts of an element.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedPair {
    pub plain: GradedTensor,
    pub f: GradedTensor,
}

pub fn r_graded(t: &XElement) -> GradedPair {
    let mut out = GradedPair::default();
    for (w, c) in t.plain_words() {
        let d = word_degree(w);
        for ((p, m), v) in r_word(w) {
            out.plain.add((p, m, d), v * c);
        }
    }
    for (w, c) in t.f_words() {
        let d = word_degree(w);
        for ((p, m), v) in r_word(w) {
            out.f.add((p, m, d), v * c);
        }
    }
    out
}

impl GradedPair {
    pub fn add_assign(&mut self, other: &GradedPair) {
        for (k, c) in &other.plain.0 {
            self.plain.add(*k, c.clone());
        }
        for (k, c) in &other.f.0 {
            self.f.add(*k, c.clone());
        }
    }

    pub fn scale(&self, c: &QScalar) -> GradedPair {
        let mut out = GradedPair::default();
        for (k, v) in &self.plain.0 {
            out.plain.add(*k, v * c);
        }
        for (k, v) in &self.f.0 {
            out.f.add(*k, v * c);
        }
        out
    }

    pub fn one() -> GradedPair {
        let mut out = GradedPair::default();
        out.plain
            .add((QuotientMonomial::one(), QuotientMonomial::one(), 0), QScalar::one());
        out
    }
}

/// Graded tensor images of the lift of an algebra element together with the
/// images of delta and delta^2 applied to that lift, built letter by letter
/// so that large monomials collapse in the quotient instead of expanding
/// into 2^L words. Letter weights are +-1, so the second derivative of a
/// single letter is the letter itself.
pub struct LiftImages {
    pub t: GradedPair,
    pub d1: GradedPair,
    pub d2: GradedPair,
}

pub fn r_graded_lift(x: &crate::pbw::AlgebraElement) -> LiftImages {
    use crate::pbw::Letter;
    let mut total = GradedPair::default();
    let mut total_d = GradedPair::default();
    let mut total_d2 = GradedPair::default();
    for (m, c) in x.terms() {
        let mut t = GradedPair::one();
        let mut dt = GradedPair::default();
        let mut ddt = GradedPair::default();
        for letter in m.letters() {
            let (gp, gm) = match letter {
                Letter::A => (Gen::APlus, Gen::AMinus),
                Letter::AStar => (Gen::APlusStar, Gen::AMinusStar),
                Letter::B => (Gen::BPlus, Gen::BMinus),
                Letter::BStar => (Gen::BPlusStar, Gen::BMinusStar),
            };
            let mut lt = GradedPair::default();
            let mut ldt = GradedPair::default();
            for g in [gp, gm] {
                let (p, mm, coeff) = r_letter(g);
                let d = g.degree();
                lt.plain.add((p, mm, d), coeff.clone());
                ldt.plain
                    .add((p, mm, d), coeff * QScalar::from_int(d as i64));
            }
            // Leibniz through both derivatives
            let next_d2 = {
                let mut s = full_product(&ddt, &lt);
                let cross = full_product(&dt, &ldt);
                s.add_assign(&cross);
                s.add_assign(&cross);
                s.add_assign(&full_product(&t, &lt));
                s
            };
            let next_dt = {
                let mut s = full_product(&dt, &lt);
                s.add_assign(&full_product(&t, &ldt));
                s
            };
            t = full_product(&t, &lt);
            dt = next_dt;
            ddt = next_d2;
        }
        total.add_assign(&t.scale(c));
        total_d.add_assign(&dt.scale(c));
        total_d2.add_assign(&ddt.scale(c));
    }
    LiftImages { t: total, d1: total_d, d2: total_d2 }
}

/// Full product of two graded pairs (F is central, F^2 = 1).
pub fn full_product(a: &GradedPair, b: &GradedPair) -> GradedPair {
    let mul = |x: &GradedTensor, y: &GradedTensor, out: &mut GradedTensor| {
        for ((p1, m1, d1), c1) in &x.0 {
            for ((p2, m2, d2), c2) in &y.0 {
                let base = c1 * c2;
                for (p, cp) in quotient_product(p1, p2) {
                    for (m, cm) in quotient_product(m1, m2) {
                        out.add((p, m, d1 + d2), &base * &cp * &cm);
                    }
                }
            }
        }
    };
    let mut out = GradedPair::default();
    mul(&a.plain, &b.plain, &mut out.plain);
    mul(&a.f, &b.f, &mut out.plain);
    mul(&a.plain, &b.f, &mut out.f);
    mul(&a.f, &b.plain, &mut out.f);
    out
}

// ---------------------------------------------------------------------------
// Residue functionals on degree-zero tensors.
//
//   I T |D|^{-3} = 2 (tau_1 x tau_1)(r(T)deg0)
//   I T |D|^{-2} = 2 (tau_1 x tau_0 + tau_0 x tau_1)(r(T)deg0)
//   I T |D|^{-1} = (2 tau_0 x tau_0 - 1/2 tau_1 x tau_1)(r(T)deg0)
//   I F T |D|^{-3} = I F T |D|^{-2} = 0
//   I F T |D|^{-1} = (tau_0 x tau_1 - tau_1 x tau_0)(r(T)deg0)
// ---------------------------------------------------------------------------

/// Residue at |D|^{-k} of an element given by its graded tensor image.
pub fn residue(gp: &GradedPair, k: u8) -> Result<QScalar, HopfError> {
    if !(1..=3).contains(&k) {
        return Err(HopfError::BadPower(k));
    }
    Ok(single_residue(gp, k))
}

fn single_residue(gp: &GradedPair, k: u8) -> QScalar {
    let mut acc = QScalar::zero();
    for ((p, m, d), c) in &gp.plain.0 {
        if *d != 0 {
            continue;
        }
        let val = match k {
            3 => {
                if p.is_one() && m.is_one() {
                    QScalar::from_int(2)
                } else {
                    QScalar::zero()
                }
            }
            2 => {
                (tau1(p) * tau0(m, RepSign::Minus) + tau0(p, RepSign::Plus) * tau1(m))
                    * QScalar::from_int(2)
            }
            1 => {
                tau0(p, RepSign::Plus) * tau0(m, RepSign::Minus) * QScalar::from_int(2)
                    - tau1(p) * tau1(m) * QScalar::from_ratio(1, 2)
            }
            _ => unreachable!(),
        };
        acc += &(val * c);
    }
    if k == 1 {
        for ((p, m, d), c) in &gp.f.0 {
            if *d != 0 {
                continue;
            }
            let val = tau0(p, RepSign::Plus) * tau1(m) - tau1(p) * tau0(m, RepSign::Minus);
            acc += &(val * c);
        }
    }
    acc
}

/// Residue of a single element at |D|^{-k}.
pub fn ncint(t: &XElement, k: u8) -> Result<QScalar, HopfError> {
    if !(1..=3).contains(&k) {
        return Err(HopfError::BadPower(k));
    }
    Ok(single_residue(&r_graded(t), k))
}

// Targeted pairings for products: only the tensor components that the tau
// functionals can see are assembled, which avoids materializing products of
// large elements.

type Bucket<'a> = HashMap<(i64, i64, i32), Vec<(u32, u32, &'a QScalar)>>;

fn bucket(t: &GradedTensor) -> Bucket<'_> {
    let mut map: Bucket = HashMap::new();
    for ((p, m, d), c) in &t.0 {
        map.entry((p.alpha, m.alpha, *d))
            .or_default()
            .push((p.m, m.m, c));
    }
    map
}

fn qm(alpha: i64, m: u32) -> QuotientMonomial {
    QuotientMonomial { alpha, m }
}

/// tau_1 x tau_1 of the degree-zero part of the product x.y.
fn pairing_tau11(x: &GradedTensor, y: &GradedTensor) -> QScalar {
    let by = bucket(y);
    let mut acc = QScalar::zero();
    for ((p, m, d), c) in &x.0 {
        if p.m != 0 || m.m != 0 {
            continue;
        }
        if let Some(entries) = by.get(&(-p.alpha, -m.alpha, -d)) {
            for (pm2, mm2, c2) in entries {
                if *pm2 == 0 && *mm2 == 0 {
                    acc += &(c * *c2);
                }
            }
        }
    }
    acc
}

/// Sum of tau_0 (with the slot's sign) over the full quotient product x.y.
fn tau0_of_product(x: &QuotientMonomial, y: &QuotientMonomial, sign: RepSign) -> QScalar {
    let mut acc = QScalar::zero();
    for (k, c) in quotient_product(x, y) {
        let t = tau0(&k, sign);
        if !t.is_zero() {
            acc += &(t * c);
        }
    }
    acc
}

/// tau_1 x tau_0 of the degree-zero part of x.y.
fn pairing_tau1_tau0(x: &GradedTensor, y: &GradedTensor) -> QScalar {
    let by = bucket(y);
    let mut acc = QScalar::zero();
    for ((p, m, d), c) in &x.0 {
        if p.m != 0 {
            continue;
        }
        if let Some(entries) = by.get(&(-p.alpha, -m.alpha, -d)) {
            for (pm2, mm2, c2) in entries {
                if *pm2 != 0 {
                    continue;
                }
                let t = tau0_of_product(m, &qm(-m.alpha, *mm2), RepSign::Minus);
                if !t.is_zero() {
                    acc += &(t * c * *c2);
                }
            }
        }
    }
    acc
}

/// tau_0 x tau_1 of the degree-zero part of x.y.
fn pairing_tau0_tau1(x: &GradedTensor, y: &GradedTensor) -> QScalar {
    let by = bucket(y);
    let mut acc = QScalar::zero();
    for ((p, m, d), c) in &x.0 {
        if m.m != 0 {
            continue;
        }
        if let Some(entries) = by.get(&(-p.alpha, -m.alpha, -d)) {
            for (pm2, mm2, c2) in entries {
                if *mm2 != 0 {
                    continue;
                }
                let t = tau0_of_product(p, &qm(-p.alpha, *pm2), RepSign::Plus);
                if !t.is_zero() {
                    acc += &(t * c * *c2);
                }
            }
        }
    }
    acc
}

/// tau_0 x tau_0 of the degree-zero part of x.y.
fn pairing_tau00(x: &GradedTensor, y: &GradedTensor) -> QScalar {
    let by = bucket(y);
    let mut acc = QScalar::zero();
    for ((p, m, d), c) in &x.0 {
        if let Some(entries) = by.get(&(-p.alpha, -m.alpha, -d)) {
            for (pm2, mm2, c2) in entries {
                let tp = tau0_of_product(p, &qm(-p.alpha, *pm2), RepSign::Plus);
                if tp.is_zero() {
                    continue;
                }
                let tm = tau0_of_product(m, &qm(-m.alpha, *mm2), RepSign::Minus);
                if tm.is_zero() {
                    continue;
                }
                acc += &(tp * tm * c * *c2);
            }
        }
    }
    acc
}

/// Residue at |D|^{-k} of the product of two elements given as graded pairs.
pub fn pair_residue(a: &GradedPair, b: &GradedPair, k: u8) -> Result<QScalar, HopfError> {
    if !(1..=3).contains(&k) {
        return Err(HopfError::BadPower(k));
    }
    // plain part of the product: ap.bp + af.bf ; F part: ap.bf + af.bp
    let plain_terms = [(&a.plain, &b.plain), (&a.f, &b.f)];
    let f_terms = [(&a.plain, &b.f), (&a.f, &b.plain)];
    let mut acc = QScalar::zero();
    for (x, y) in plain_terms {
        match k {
            3 => acc += &(pairing_tau11(x, y) * QScalar::from_int(2)),
            2 => {
                let v = pairing_tau1_tau0(x, y) + pairing_tau0_tau1(x, y);
                acc += &(v * QScalar::from_int(2));
            }
            1 => {
                let v = pairing_tau00(x, y) * QScalar::from_int(2)
                    - pairing_tau11(x, y) * QScalar::from_ratio(1, 2);
                acc += &v;
            }
            _ => unreachable!(),
        }
    }
    if k == 1 {
        for (x, y) in f_terms {
            acc += &(pairing_tau0_tau1(x, y) - pairing_tau1_tau0(x, y));
        }
    }
    Ok(acc)
}

/// Residue at |D|^{-3} of a triple product. Only pure-a components reach
/// tau_1 x tau_1, so the contraction runs over b-free entries.
pub fn triple_residue_d3(a: &GradedPair, b: &GradedPair, c: &GradedPair) -> QScalar {
    let pure = |t: &GradedTensor| -> Vec<(i64, i64, i32, QScalar)> {
        t.0.iter()
            .filter(|((p, m, _), _)| p.m == 0 && m.m == 0)
            .map(|((p, m, d), c)| (p.alpha, m.alpha, *d, c.clone()))
            .collect()
    };
    // plain(abc) = pa.pb.pc + pa.fb.fc + fa.pb.fc + fa.fb.pc
    let combos: [(&GradedTensor, &GradedTensor, &GradedTensor); 4] = [
        (&a.plain, &b.plain, &c.plain),
        (&a.plain, &b.f, &c.f),
        (&a.f, &b.plain, &c.f),
        (&a.f, &b.f, &c.plain),
    ];
    let mut acc = QScalar::zero();
    for (x, y, z) in combos {
        let (px, py, pz) = (pure(x), pure(y), pure(z));
        if px.is_empty() || py.is_empty() || pz.is_empty() {
            continue;
        }
        let mut zmap: HashMap<(i64, i64, i32), QScalar> = HashMap::new();
        for (pa, ma, d, cv) in &pz {
            let e = zmap.entry((*pa, *ma, *d)).or_insert_with(QScalar::zero);
            *e += cv;
        }
        for (pa1, ma1, d1, c1) in &px {
            for (pa2, ma2, d2, c2) in &py {
                if let Some(c3) = zmap.get(&(-(pa1 + pa2), -(ma1 + ma2), -(d1 + d2))) {
                    acc += &(c1 * c2 * c3);
                }
            }
        }
    }
    acc * QScalar::from_int(2)
}

// ---------------------------------------------------------------------------
// Pseudodifferential right-normalization.
// ---------------------------------------------------------------------------

/// A factor in an alternating operator product.
pub enum PdoFactor {
    Op(XElement),
    InvAbsD,
}

/// Sum of T_i |D|^{-k_i} with k_i in 0..=3, truncated below order -4 where
/// the residues vanish.
#[derive(Clone, Debug, Default)]
pub struct PdoSum {
    pub terms: Vec<(XElement, u8)>,
}

impl PdoSum {
    fn push(&mut self, t: XElement, k: u8) {
        if t.is_zero_presentation() || k > 3 {
            return;
        }
        for (existing, kk) in &mut self.terms {
            if *kk == k {
                *existing = existing.add(&t);
                return;
            }
        }
        self.terms.push((t, k));
    }
}

/// Commute every |D|^{-1} to the right using
/// |D|^{-1} T = T |D|^{-1} - delta(T) |D|^{-2} + delta^2(T) |D|^{-3} + O(-4).
pub fn normalize_pdo(factors: &[PdoFactor]) -> PdoSum {
    let total_inverse: u32 = factors
        .iter()
        .map(|f| if matches!(f, PdoFactor::InvAbsD) { 1 } else { 0 })
        .sum();
    if total_inverse > 3 {
        return PdoSum::default();
    }
    let mut sum = PdoSum::default();
    sum.terms.push((XElement::one(), 0));
    for f in factors {
        let mut next = PdoSum::default();
        match f {
            PdoFactor::InvAbsD => {
                for (t, k) in sum.terms {
                    next.push(t, k + 1);
                }
            }
            PdoFactor::Op(s) => {
                for (t, k) in sum.terms {
                    match k {
                        0 => next.push(t.mul(s), 0),
                        1 => {
                            let ds = crate::xalg::delta(s);
                            let dds = crate::xalg::delta(&ds);
                            next.push(t.mul(s), 1);
                            next.push(t.mul(&ds).scale(&-QScalar::one()), 2);
                            next.push(t.mul(&dds), 3);
                        }
                        2 => {
                            let ds = crate::xalg::delta(s);
                            next.push(t.mul(s), 2);
                            next.push(t.mul(&ds).scale(&QScalar::from_int(-2)), 3);
                        }
                        3 => next.push(t.mul(s), 3),
                        _ => unreachable!(),
                    }
                }
            }
        }
        sum = next;
    }
    sum.terms.retain(|(t, _)| !t.is_zero_presentation());
    sum
}

/// Total residue of a normalized sum; order-zero terms have no pole.
pub fn ncint_pdo(sum: &PdoSum) -> Result<QScalar, HopfError> {
    let mut acc = QScalar::zero();
    for (t, k) in &sum.terms {
        if (1..=3).contains(k) {
            acc += &ncint(t, *k)?;
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// The ideal R: kernel of (symbol x symbol) o r. The symbol map keeps the
// a-winding and kills every positive b-power, so membership is the vanishing
// of all b-free aggregated coefficients. An element with an F part belongs
// to the extended ideal iff both parts are in R.
// ---------------------------------------------------------------------------

fn part_in_r<'a>(words: impl Iterator<Item = (&'a Vec<Gen>, &'a QScalar)>) -> bool {
    let mut sums: BTreeMap<(i64, i64), QScalar> = BTreeMap::new();
    for (w, c) in words {
        for ((p, m), v) in r_word(w) {
            if p.m != 0 || m.m != 0 {
                continue;
            }
            let e = sums.entry((p.alpha, m.alpha)).or_insert_with(QScalar::zero);
            *e += &(v * c);
        }
    }
    sums.values().all(|v| v.is_zero())
}

/// True when the element is invisible to the |D|^{-2} and |D|^{-3} residues
/// against the whole algebra.
pub fn in_r(t: &XElement) -> bool {
    part_in_r(t.plain_words()) && part_in_r(t.f_words())
}


#[cfg(test)]
mod lift_tests {
    use super::*;
    use crate::pbw::{parse_monomial, AlgebraElement};
    use crate::xalg::{delta, lift};

    #[test]
    fn letterwise_lift_images_match_word_expansion() {
        for s in ["a^2 b", "a* b b*", "b^2 b*^2", "a*^2 b*", "1"] {
            let x = AlgebraElement::monomial(parse_monomial(s).unwrap());
            let imgs = r_graded_lift(&x);
            let lx = lift(&x);
            assert_eq!(imgs.t, r_graded(&lx), "t at {s}");
            assert_eq!(imgs.d1, r_graded(&delta(&lx)), "d1 at {s}");
            assert_eq!(imgs.d2, r_graded(&delta(&delta(&lx))), "d2 at {s}");
        }
    }
}

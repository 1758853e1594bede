//! One-forms as coefficient tensors over pairs of PBW multi-indices,
//! A = sum A^beta_alpha m^alpha delta(m^beta), together with
//!
//! * the balanced / a-balanced component filters,
//! * exact closed forms for the residues of A, A^2, A^3 built from
//!   geometric-series kernels, and
//! * the reduction of J-conjugated integrals to plain ones.
//!
//! Every closed form here has an independent counterpart through the
//! residue-functional pipeline (`ncint_tau`); the two must agree exactly.

use crate::hopf::{self, GradedPair};
use crate::pbw::{AlgebraElement, PBWMonomial};
use crate::qfield::{geo_sum, QScalar};
use crate::xalg::{self, XElement};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OneFormError {
    #[error("no closed form for I A^{n} |D|^-{p}; use the residue pipeline")]
    Unsupported { n: u8, p: u8 },
    #[error("power of A must be 1..=3, |D| exponent 1..=3 with n <= 3, got ({n},{p})")]
    BadArgs { n: u8, p: u8 },
}

/// Which flavor of one-form an expansion produces: the delta-one-form
/// sum x delta(y), or the true one-form sum x [D, y] = (sum x delta(y)) F.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OneFormKind {
    Delta,
    DFlag,
}

/// Coefficient tensor of a one-form over pairs of PBW multi-indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OneForm {
    coeffs: BTreeMap<(PBWMonomial, PBWMonomial), QScalar>,
}

impl OneForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, alpha: PBWMonomial, beta: PBWMonomial, c: QScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry((alpha, beta)) {
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

    /// Accumulate x delta(y) for algebra elements x, y, distributing over
    /// their PBW expansions.
    pub fn add_pair(&mut self, x: &AlgebraElement, y: &AlgebraElement) {
        for (ma, ca) in x.terms() {
            for (mb, cb) in y.terms() {
                self.add_term(*ma, *mb, ca * cb);
            }
        }
    }

    pub fn from_pair(x: &AlgebraElement, y: &AlgebraElement) -> Self {
        let mut a = Self::zero();
        a.add_pair(x, y);
        a
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(PBWMonomial, PBWMonomial), &QScalar)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in other.terms() {
            out.add_term(*a, *b, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        let mut out = Self::zero();
        for ((a, b), x) in self.terms() {
            out.add_term(*a, *b, x * c);
        }
        out
    }

    /// Coefficientwise conjugate; the identity while coefficients are real.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for ((a, b), x) in self.terms() {
            out.add_term(*a, *b, x.conj());
        }
        out
    }

    /// Presentation as pairs (x_i, y_i) with A = sum x_i delta(y_i),
    /// coefficients folded into x_i. Used by the cochain path.
    pub fn presentation(&self) -> Vec<(AlgebraElement, AlgebraElement)> {
        self.terms()
            .map(|((a, b), c)| {
                (
                    AlgebraElement::monomial(*a).scale(c),
                    AlgebraElement::monomial(*b),
                )
            })
            .collect()
    }
}

/// Expand the coefficient tensor into the shift-operator algebra.
pub fn to_x(a: &OneForm, kind: OneFormKind) -> XElement {
    let mut out = XElement::zero();
    for ((ma, mb), c) in a.terms() {
        let x = xalg::lift(&AlgebraElement::monomial(*ma));
        let dy = xalg::delta(&xalg::lift(&AlgebraElement::monomial(*mb)));
        out = out.add(&x.mul(&dy).scale(c));
    }
    match kind {
        OneFormKind::Delta => out,
        OneFormKind::DFlag => out.times_f(),
    }
}

/// The adjoint of the delta-one-form in the shift-operator algebra, for
/// selfadjointness checks modulo the ideal R.
pub fn adjoint_oneform(a: &OneForm) -> XElement {
    to_x(a, OneFormKind::Delta).adjoint()
}

// ---------------------------------------------------------------------------
// Balanced components.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BalanceKind {
    Balanced,
    ABalanced,
}

/// A filtered n-fold product tensor: tuple of index pairs -> coefficient.
pub type BalancedTensor = BTreeMap<Vec<(PBWMonomial, PBWMonomial)>, QScalar>;

fn tuple_is_a_balanced(tuple: &[(PBWMonomial, PBWMonomial)]) -> bool {
    let mut s = 0i64;
    for (a, b) in tuple {
        if a.beta != 0 || a.gamma != 0 || b.beta != 0 || b.gamma != 0 {
            return false;
        }
        s += a.alpha + b.alpha;
    }
    s == 0
}

fn tuple_is_balanced(tuple: &[(PBWMonomial, PBWMonomial)]) -> bool {
    let mut sa = 0i64;
    let mut sb = 0i64;
    let mut sbs = 0i64;
    for (a, b) in tuple {
        sa += a.alpha + b.alpha;
        sb += a.beta as i64 + b.beta as i64;
        sbs += a.gamma as i64 + b.gamma as i64;
    }
    sa == 0 && sb == sbs
}

/// Components of A^n passing the balance filter.
pub fn balanced_part(a: &OneForm, n: u8, kind: BalanceKind) -> Result<BalancedTensor, OneFormError> {
    if !(1..=3).contains(&n) {
        return Err(OneFormError::BadArgs { n, p: 0 });
    }
    let entries: Vec<_> = a.terms().collect();
    let mut out = BalancedTensor::new();
    let mut push = |tuple: Vec<(PBWMonomial, PBWMonomial)>, c: QScalar| {
        let ok = match kind {
            BalanceKind::ABalanced => tuple_is_a_balanced(&tuple),
            BalanceKind::Balanced => tuple_is_balanced(&tuple),
        };
        if ok && !c.is_zero() {
            use std::collections::btree_map::Entry;
            match out.entry(tuple) {
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
    };
    match n {
        1 => {
            for (k, c) in &entries {
                push(vec![**k], (*c).clone());
            }
        }
        2 => {
            for (k1, c1) in &entries {
                for (k2, c2) in &entries {
                    push(vec![**k1, **k2], *c1 * *c2);
                }
            }
        }
        _ => {
            for (k1, c1) in &entries {
                for (k2, c2) in &entries {
                    for (k3, c3) in &entries {
                        push(vec![**k1, **k2, **k3], *c1 * *c2 * *c3);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// True when every component of A is balanced (then so is every power).
pub fn is_balanced(a: &OneForm) -> bool {
    a.terms().all(|((al, be), _)| {
        al.alpha + be.alpha == 0
            && al.beta as i64 + be.beta as i64 == al.gamma as i64 + be.gamma as i64
    })
}

/// Degree in a of a homogeneous one-form: the common value of
/// alpha_1 + beta_1, if there is one.
pub fn a_homogeneous_degree(a: &OneForm) -> Option<i64> {
    let mut deg = None;
    for ((al, be), _) in a.terms() {
        let d = al.alpha + be.alpha;
        match deg {
            None => deg = Some(d),
            Some(x) if x == d => {}
            _ => return None,
        }
    }
    deg
}

// ---------------------------------------------------------------------------
// Geometric-series kernels.
//
// All closed forms reduce to sums    sum_{n>=0} ( q^{l + 2jn} * prod_i
// (1 - q^{2(n + c_i)})  -  [j = 0] ), where the product collects squared
// root factors q_{n+c} = sqrt(1 - q^{2(n+c)}) with the convention
// q_k = 0 for k <= 0. Closed walks on the index lattice guarantee the roots
// pair up, so the product is an honest polynomial in q^{2n}.
// ---------------------------------------------------------------------------

/// Root indices contributed by one shift block: starting offset `s`, signed
/// step `x`. Ascending blocks cover s+1..=s+x, descending ones s+x+1..=s.
fn block_roots(s: i64, x: i64, out: &mut Vec<i64>) {
    if x > 0 {
        out.extend(s + 1..=s + x);
    } else if x < 0 {
        out.extend(s + x + 1..=s);
    }
}

/// Exact value of the regularized sum described above. Panics when the
/// roots do not pair (impossible for closed walks) or when the sum would
/// diverge (j = 0 with a nonzero prefactor exponent).
fn factor_series_sum(l: i64, j: i64, roots: &[i64]) -> QScalar {
    debug_assert!(j >= 0);
    let mut mult: BTreeMap<i64, u32> = BTreeMap::new();
    for &c in roots {
        *mult.entry(c).or_insert(0) += 1;
    }
    let mut factors: Vec<(i64, u32)> = Vec::with_capacity(mult.len());
    for (c, m) in mult {
        assert!(m % 2 == 0, "unpaired root factor q_(n+{c})");
        factors.push((c, m / 2));
    }
    // First index at which every root is strictly positive.
    let n_star = factors
        .iter()
        .map(|(c, _)| 1 - c)
        .max()
        .unwrap_or(0)
        .max(0);
    // Expand prod (1 - q^{2(c + n*)} x)^m as a polynomial in x = q^{2t}.
    let mut poly = vec![QScalar::one()];
    for (c, m) in &factors {
        let r = -QScalar::q_pow(2 * (c + n_star));
        for _ in 0..*m {
            let mut next = vec![QScalar::zero(); poly.len() + 1];
            for (d, coef) in poly.iter().enumerate() {
                next[d] += coef;
                next[d + 1] += &(coef * &r);
            }
            poly = next;
        }
    }
    let mut acc = QScalar::zero();
    if j == 0 {
        // The n < n* stretch contributes -1 per step; the constant term of
        // the expansion must cancel the subtraction exactly.
        assert!(l == 0, "divergent series: j = 0 with prefactor exponent {l}");
        acc -= &QScalar::from_int(n_star);
    }
    let prefactor = QScalar::q_pow(l + 2 * j * n_star);
    for (d, coef) in poly.iter().enumerate() {
        let e = 2 * j + 2 * d as i64;
        if e == 0 {
            continue;
        }
        if coef.is_zero() {
            continue;
        }
        acc += &(&prefactor * coef * geo_sum(e).expect("positive exponent"));
    }
    acc
}

type SeriesKey = (i64, i64, Vec<i64>);

fn series_cache() -> &'static Mutex<HashMap<SeriesKey, QScalar>> {
    static CACHE: OnceLock<Mutex<HashMap<SeriesKey, QScalar>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn factor_series_sum_cached(l: i64, j: i64, mut roots: Vec<i64>) -> QScalar {
    roots.sort_unstable();
    let key = (l, j, roots);
    if let Some(v) = series_cache().lock().unwrap().get(&key) {
        return v.clone();
    }
    let v = factor_series_sum(key.0, key.1, &key.2);
    series_cache().lock().unwrap().insert(key, v.clone());
    v
}

/// w_1(beta_1, j) = sum_n ( q^{2jn} (q^{up/down}_{n,|beta_1|})^2 - [j=0] ).
pub fn w1_series(beta1: i64, j: u32) -> QScalar {
    let mut roots = Vec::new();
    block_roots(0, beta1, &mut roots);
    let copy = roots.clone();
    roots.extend(copy);
    factor_series_sum_cached(0, j as i64, roots)
}

/// The degree-two series kernel v_{beta_1, alpha'_1, beta'_1}(l, j).
pub fn v_series(beta1: i64, alpha1p: i64, beta1p: i64, l: i64, j: u32) -> QScalar {
    let mut roots = Vec::new();
    block_roots(0, beta1p, &mut roots);
    block_roots(beta1p, alpha1p, &mut roots);
    block_roots(beta1p + alpha1p, beta1, &mut roots);
    let s3 = beta1p + alpha1p + beta1;
    block_roots(s3, -s3, &mut roots);
    factor_series_sum_cached(l, j as i64, roots)
}

/// Weight of a balanced index pair in the |D|^{-2} residue of A.
fn w_coeff(alpha: &PBWMonomial, beta: &PBWMonomial) -> QScalar {
    if beta.alpha == 0 {
        return QScalar::zero();
    }
    let b1 = beta.alpha;
    let exp = b1 * (2 * alpha.gamma as i64 + beta.gamma as i64 - beta.beta as i64);
    QScalar::from_int(2 * b1)
        * QScalar::q_pow(exp)
        * w1_series(b1, alpha.gamma + beta.gamma)
}

/// Weight of a balanced pair of index pairs in the |D|^{-2} residue of A^2.
///
/// The two cross terms of the residue functional are carried by the words
/// whose a-letters are all ascending and whose b-letters are all ascending
/// (resp. all descending); both give the same series kernel, the blocks
/// entering at levels 0, beta'_1, beta'_1 + alpha'_1 and
/// beta'_1 + alpha'_1 + beta_1, and the b-powers of each block contribute
/// the entry level to the constant exponent.
fn v_coeff(
    alpha: &PBWMonomial,
    beta: &PBWMonomial,
    alpha2: &PBWMonomial,
    beta2: &PBWMonomial,
) -> QScalar {
    let pre = beta.alpha * beta2.alpha
        + (beta.beta as i64 - beta.gamma as i64) * (beta2.beta as i64 - beta2.gamma as i64);
    if pre == 0 {
        return QScalar::zero();
    }
    let b_count = |x: &PBWMonomial| x.beta as i64 + x.gamma as i64;
    let (b1, a1p, b1p) = (beta.alpha, alpha2.alpha, beta2.alpha);
    let l = b1p * b_count(alpha2) + (b1p + a1p) * b_count(beta)
        + (b1p + a1p + b1) * b_count(alpha);
    let j = alpha.gamma + beta.gamma + alpha2.gamma + beta2.gamma;
    QScalar::from_int(2 * pre) * v_series(b1, a1p, b1p, l, j)
}

// ---------------------------------------------------------------------------
// Closed-form residues.
// ---------------------------------------------------------------------------

/// I A^n |D|^{-p} in closed form, for the supported pairs
/// (1,3), (1,2), (2,3), (2,2), (3,3).
pub fn ncint_closed(a: &OneForm, n: u8, p: u8) -> Result<QScalar, OneFormError> {
    match (n, p) {
        (1, 3) => {
            let mut acc = QScalar::zero();
            for (t, c) in balanced_part(a, 1, BalanceKind::ABalanced)? {
                let (_, beta) = t[0];
                acc += &(QScalar::from_int(2 * beta.alpha) * c);
            }
            Ok(acc)
        }
        (1, 2) => {
            let mut acc = QScalar::zero();
            for (t, c) in balanced_part(a, 1, BalanceKind::Balanced)? {
                let (alpha, beta) = t[0];
                let w = w_coeff(&alpha, &beta);
                if !w.is_zero() {
                    acc += &(QScalar::from_int(2) * w * c);
                }
            }
            Ok(acc)
        }
        (2, 3) => {
            let mut acc = QScalar::zero();
            for (t, c) in balanced_part(a, 2, BalanceKind::ABalanced)? {
                let k = t[0].1.alpha * t[1].1.alpha;
                acc += &(QScalar::from_int(2 * k) * c);
            }
            Ok(acc)
        }
        (2, 2) => {
            let mut acc = QScalar::zero();
            for (t, c) in balanced_part(a, 2, BalanceKind::Balanced)? {
                let v = v_coeff(&t[0].0, &t[0].1, &t[1].0, &t[1].1);
                if !v.is_zero() {
                    acc += &(QScalar::from_int(2) * v * c);
                }
            }
            Ok(acc)
        }
        (3, 3) => {
            let mut acc = QScalar::zero();
            for (t, c) in balanced_part(a, 3, BalanceKind::ABalanced)? {
                let k = t[0].1.alpha * t[1].1.alpha * t[2].1.alpha;
                acc += &(QScalar::from_int(2 * k) * c);
            }
            Ok(acc)
        }
        (n, p) if (1..=3).contains(&n) && (1..=3).contains(&p) => {
            Err(OneFormError::Unsupported { n, p })
        }
        _ => Err(OneFormError::BadArgs { n, p }),
    }
}

/// I delta(A) A |D|^{-3} vanishes identically (antisymmetry of the weights).
pub fn ncint_delta_a_a_closed(_a: &OneForm) -> QScalar {
    QScalar::zero()
}

/// Reduction of J-conjugated integrals to plain ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JKind {
    /// I A J B J^{-1} |D|^{-3}
    I,
    /// I A J B J^{-1} |D|^{-2}
    Ii,
    /// I A^2 J B J^{-1} |D|^{-3}
    Iii,
    /// I delta(A) J A J^{-1} |D|^{-3}
    Iv,
}

pub fn ncint_j(a: &OneForm, b: &OneForm, kind: JKind) -> Result<QScalar, OneFormError> {
    let half = QScalar::from_ratio(1, 2);
    Ok(match kind {
        JKind::I => half * ncint_closed(a, 1, 3)? * ncint_closed(&b.conj(), 1, 3)?,
        JKind::Ii => {
            let t1 = ncint_closed(a, 1, 2)? * ncint_closed(&b.conj(), 1, 3)?;
            let t2 = ncint_closed(a, 1, 3)? * ncint_closed(&b.conj(), 1, 2)?;
            half * (t1 + t2)
        }
        JKind::Iii => half * ncint_closed(a, 2, 3)? * ncint_closed(&b.conj(), 1, 3)?,
        JKind::Iv => QScalar::zero(),
    })
}

// ---------------------------------------------------------------------------
// The independent residue-functional pipeline.
// ---------------------------------------------------------------------------

/// Graded tensor image of the delta-one-form, reusable across powers.
/// Built entrywise as r(lift(m^alpha)) r(delta(lift(m^beta))) with the
/// quotient collapse applied letter by letter.
pub fn graded(a: &OneForm) -> GradedPair {
    let mut out = GradedPair::default();
    for ((ma, mb), c) in a.terms() {
        let x = hopf::r_graded_lift(&AlgebraElement::monomial(*ma));
        let y = hopf::r_graded_lift(&AlgebraElement::monomial(*mb));
        out.add_assign(&hopf::full_product(&x.t, &y.d1).scale(c));
    }
    out
}

/// Graded image of delta(A): delta(x delta y) = delta(x) delta(y)
/// + x delta^2(y).
fn graded_delta(a: &OneForm) -> GradedPair {
    let mut out = GradedPair::default();
    for ((ma, mb), c) in a.terms() {
        let x = hopf::r_graded_lift(&AlgebraElement::monomial(*ma));
        let y = hopf::r_graded_lift(&AlgebraElement::monomial(*mb));
        let mut term = hopf::full_product(&x.d1, &y.d1);
        term.add_assign(&hopf::full_product(&x.t, &y.d2));
        out.add_assign(&term.scale(c));
    }
    out
}

/// I A^n |D|^{-p} through the residue functionals (n = 3 only at p = 3).
pub fn ncint_tau(a: &OneForm, n: u8, p: u8) -> Result<QScalar, OneFormError> {
    if !(1..=3).contains(&n) || !(1..=3).contains(&p) || (n == 3 && p != 3) {
        return Err(OneFormError::BadArgs { n, p });
    }
    let g = graded(a);
    Ok(match n {
        1 => hopf::residue(&g, p).expect("p in range"),
        2 => hopf::pair_residue(&g, &g, p).expect("p in range"),
        _ => hopf::triple_residue_d3(&g, &g, &g),
    })
}

/// I delta(A) A |D|^{-p} through the residue functionals.
pub fn ncint_tau_delta_a_a(a: &OneForm, p: u8) -> Result<QScalar, OneFormError> {
    if !(1..=3).contains(&p) {
        return Err(OneFormError::BadArgs { n: 2, p });
    }
    Ok(hopf::pair_residue(&graded_delta(a), &graded(a), p).expect("p in range"))
}

//! Floating-point verification oracle.
//!
//! Operators act on the explicit spinor basis v^j_{m,l} (spin up/down) at a
//! numeric value of q; per-eigenvalue diagonal sums of |D| shells are exact
//! within the truncation, and the three residues are recovered from the top
//! shells, where the shell trace is a quadratic in the eigenvalue up to a
//! geometrically small remainder.

use crate::xalg::{Gen, XElement};
use num::complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("q must lie in (0, 0.9]; got {0} (the decay knee would exceed any feasible truncation)")]
    QOutOfRange(f64),
    #[error("invalid basis vector: two_j={two_j}, m={m}, l={l}, spin={spin:?}")]
    InvalidBasisVector { two_j: u32, m: u32, l: u32, spin: Spin },
    #[error("need at least {need} shells beyond the decay knee, got {got}")]
    TooFewShells { need: usize, got: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

/// A basis spinor. Up vectors exist for 0 <= m <= 2j, 0 <= l <= 2j+1;
/// down vectors need 2j >= 1 and 0 <= l <= 2j-1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisVector {
    pub two_j: u32,
    pub m: u32,
    pub l: u32,
    pub spin: Spin,
}

impl BasisVector {
    pub fn new(two_j: u32, m: u32, l: u32, spin: Spin) -> Result<Self, OracleError> {
        let v = BasisVector { two_j, m, l, spin };
        if v.is_valid() {
            Ok(v)
        } else {
            Err(OracleError::InvalidBasisVector { two_j, m, l, spin })
        }
    }

    pub fn is_valid(&self) -> bool {
        if self.m > self.two_j {
            return false;
        }
        match self.spin {
            Spin::Up => self.l <= self.two_j + 1,
            Spin::Down => self.two_j >= 1 && self.l < self.two_j,
        }
    }

    /// Twice the |D| eigenvalue: 2(2j) + 3 for up, 2(2j) + 1 for down.
    pub fn two_d(&self) -> u32 {
        match self.spin {
            Spin::Up => 2 * self.two_j + 3,
            Spin::Down => 2 * self.two_j + 1,
        }
    }
}

fn q_root(q0: f64, k: i64) -> f64 {
    if k <= 0 {
        0.0
    } else {
        (1.0 - q0.powi(2 * k as i32)).sqrt()
    }
}

/// One shift generator applied to a basis vector; out-of-range targets and
/// vanishing root factors drop the term.
pub fn apply_gen(q0: f64, g: Gen, v: &BasisVector) -> Option<(f64, BasisVector)> {
    let (two_j, m, l) = (v.two_j as i64, v.m as i64, v.l as i64);
    let (coeff, d2j, m2, l2) = match g {
        Gen::APlus => (
            q_root(q0, m + 1) * q_root(q0, l + 1),
            1,
            m + 1,
            l + 1,
        ),
        Gen::AMinus => (q0.powi((m + l + 1) as i32), -1, m, l),
        Gen::BPlus => (q0.powi(l as i32) * q_root(q0, m + 1), 1, m + 1, l),
        Gen::BMinus => (-(q0.powi(m as i32)) * q_root(q0, l), -1, m, l - 1),
        Gen::APlusStar => (q_root(q0, m) * q_root(q0, l), -1, m - 1, l - 1),
        Gen::AMinusStar => (q0.powi((m + l + 1) as i32), 1, m, l),
        Gen::BPlusStar => (q0.powi(l as i32) * q_root(q0, m), -1, m - 1, l),
        Gen::BMinusStar => (-(q0.powi(m as i32)) * q_root(q0, l + 1), 1, m, l + 1),
    };
    if coeff == 0.0 {
        return None;
    }
    let tj = two_j + d2j;
    if tj < 0 || m2 < 0 || l2 < 0 {
        return None;
    }
    let target = BasisVector {
        two_j: tj as u32,
        m: m2 as u32,
        l: l2 as u32,
        spin: v.spin,
    };
    if !target.is_valid() {
        return None;
    }
    Some((coeff, target))
}

/// Letters act as a composed product: the rightmost letter first.
pub fn apply_word(q0: f64, word: &[Gen], v: &BasisVector) -> Option<(f64, BasisVector)> {
    let mut coeff = 1.0;
    let mut cur = *v;
    for &g in word.iter().rev() {
        let (c, next) = apply_gen(q0, g, &cur)?;
        coeff *= c;
        cur = next;
    }
    Some((coeff, cur))
}

/// The reality operator: antilinear, J^2 = -1, commuting with D.
/// Returns the phase and target; the caller conjugates inner amplitudes.
pub fn apply_j(v: &BasisVector) -> (Complex64, BasisVector) {
    let phase_power: i64 = match v.spin {
        Spin::Up => 2 * (v.m as i64 + v.l as i64) - 1,
        Spin::Down => -2 * (v.m as i64 + v.l as i64) + 1,
    };
    let phase = match phase_power.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    let target = match v.spin {
        Spin::Up => BasisVector {
            two_j: v.two_j,
            m: v.two_j - v.m,
            l: v.two_j + 1 - v.l,
            spin: Spin::Up,
        },
        Spin::Down => BasisVector {
            two_j: v.two_j,
            m: v.two_j - v.m,
            l: v.two_j - 1 - v.l,
            spin: Spin::Down,
        },
    };
    debug_assert!(target.is_valid());
    (phase, target)
}

/// A word list with numeric coefficients; the F flag contributes the spin
/// sign (words never mix spin).
#[derive(Clone, Debug)]
pub struct NumWord {
    pub coeff: f64,
    pub letters: Vec<Gen>,
    pub f_flag: bool,
}

impl NumWord {
    fn net_shift(&self) -> (i64, i64, i64) {
        let mut s = (0i64, 0i64, 0i64);
        for g in &self.letters {
            let (dj, dm, dl) = match g {
                Gen::APlus => (1, 1, 1),
                Gen::AMinus => (-1, 0, 0),
                Gen::BPlus => (1, 1, 0),
                Gen::BMinus => (-1, 0, -1),
                Gen::APlusStar => (-1, -1, -1),
                Gen::AMinusStar => (1, 0, 0),
                Gen::BPlusStar => (-1, -1, 0),
                Gen::BMinusStar => (1, 0, 1),
            };
            s = (s.0 + dj, s.1 + dm, s.2 + dl);
        }
        s
    }
}

/// Numeric form of an element of the algebra generated by X and F.
#[derive(Clone, Debug, Default)]
pub struct NumOperator {
    pub words: Vec<NumWord>,
}

impl NumOperator {
    pub fn from_x(x: &XElement, q0: f64) -> Self {
        let mut words = Vec::new();
        for (w, c) in x.plain_words() {
            words.push(NumWord { coeff: c.eval_f64(q0), letters: w.clone(), f_flag: false });
        }
        for (w, c) in x.f_words() {
            words.push(NumWord { coeff: c.eval_f64(q0), letters: w.clone(), f_flag: true });
        }
        words.retain(|w| w.coeff != 0.0);
        NumOperator { words }
    }

    /// Apply to a basis vector, producing the full expansion.
    fn apply(&self, q0: f64, v: &BasisVector) -> Vec<(Complex64, BasisVector)> {
        let mut out = Vec::new();
        for w in &self.words {
            if let Some((c, target)) = apply_word(q0, &w.letters, v) {
                let sign = if w.f_flag {
                    match v.spin {
                        Spin::Up => 1.0,
                        Spin::Down => -1.0,
                    }
                } else {
                    1.0
                };
                out.push((Complex64::new(w.coeff * c * sign, 0.0), target));
            }
        }
        out
    }
}

/// One factor of an operator expression (rightmost factor acts first).
pub enum ExprFactor {
    Op(NumOperator),
    /// J T J^{-1} for the given operator.
    JConj(NumOperator),
    /// The diagonal operator q^{2ln}.
    LPow(u32),
    /// The diagonal operator q^{2mn}.
    MPow(u32),
}

pub type OperatorExpr = Vec<ExprFactor>;

fn apply_expr(expr: &OperatorExpr, q0: f64, v: &BasisVector) -> Vec<(Complex64, BasisVector)> {
    let mut states = vec![(Complex64::new(1.0, 0.0), *v)];
    for factor in expr.iter().rev() {
        let mut next = Vec::with_capacity(states.len());
        match factor {
            ExprFactor::Op(op) => {
                for (amp, vec) in &states {
                    for (c, t) in op.apply(q0, vec) {
                        next.push((amp * c, t));
                    }
                }
            }
            ExprFactor::JConj(op) => {
                for (amp, vec) in &states {
                    // J^{-1} = -J
                    let (p1, v1) = apply_j(vec);
                    for (c, v2) in op.apply(q0, &v1) {
                        let inner = -p1 * c;
                        let (p2, v3) = apply_j(&v2);
                        next.push((amp * inner.conj() * p2, v3));
                    }
                }
            }
            ExprFactor::LPow(n) => {
                for (amp, vec) in &states {
                    let c = q0.powi((2 * vec.l * n) as i32);
                    next.push((amp * c, *vec));
                }
            }
            ExprFactor::MPow(n) => {
                for (amp, vec) in &states {
                    let c = q0.powi((2 * vec.m * n) as i32);
                    next.push((amp * c, *vec));
                }
            }
        }
        states = next;
    }
    states
}

/// Diagonal matrix element <v, expr v>.
pub fn diag_element(expr: &OperatorExpr, q0: f64, v: &BasisVector) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (amp, t) in apply_expr(expr, q0, v) {
        if t == *v {
            acc += amp;
        }
    }
    acc
}

/// Per-eigenvalue diagonal sum.
#[derive(Clone, Copy, Debug)]
pub struct ShellTrace {
    /// Twice the eigenvalue d of |D|.
    pub two_d: u32,
    pub value: Complex64,
}

fn check_q(q0: f64) -> Result<(), OracleError> {
    if q0 <= 0.0 || q0 > 0.9 {
        return Err(OracleError::QOutOfRange(q0));
    }
    Ok(())
}

/// Exact diagonal sums over every shell up to the truncation.
/// Shells are indexed by d = k + 1/2: down spinors of spin 2j sit at k = 2j,
/// up spinors at k = 2j + 1.
pub fn shell_traces(
    expr: &OperatorExpr,
    q0: f64,
    max_two_j: u32,
) -> Result<Vec<ShellTrace>, OracleError> {
    check_q(q0)?;
    if max_two_j < 6 {
        return Err(OracleError::TooFewShells { need: 6, got: max_two_j as usize });
    }
    // Fast paths. A single plain operator only needs its shift-free words.
    // A J-sandwich A (J B J^{-1}) is diagonal exactly on word pairs whose
    // net shifts cancel after reflection: if B shifts by (s, u, w), the
    // conjugated operator shifts by (s, s - u, s - w).
    enum Fast<'e> {
        Single(NumOperator),
        Sandwich(Vec<(&'e NumWord, &'e NumWord)>),
        No,
    }
    let fast = match expr.as_slice() {
        [ExprFactor::Op(op)] => {
            let words: Vec<NumWord> = op
                .words
                .iter()
                .filter(|w| w.net_shift() == (0, 0, 0))
                .cloned()
                .collect();
            Fast::Single(NumOperator { words })
        }
        [ExprFactor::Op(a), ExprFactor::JConj(b)] => {
            let mut pairs = Vec::new();
            for bw in &b.words {
                let (s, u, w) = bw.net_shift();
                for aw in &a.words {
                    if aw.net_shift() == (-s, u - s, w - s) {
                        pairs.push((aw, bw));
                    }
                }
            }
            Fast::Sandwich(pairs)
        }
        _ => Fast::No,
    };
    // Shell k receives down spinors of spin two_j = k and up spinors of
    // two_j = k - 1; the last complete shell within the truncation is
    // k = max_two_j.
    let kmax = max_two_j as usize;
    let mut traces = vec![Complex64::new(0.0, 0.0); kmax + 1];
    for two_j in 0..=max_two_j {
        for spin in [Spin::Up, Spin::Down] {
            let (l_max, k) = match spin {
                Spin::Up => (two_j + 1, two_j as usize + 1),
                Spin::Down => {
                    if two_j == 0 {
                        continue;
                    }
                    (two_j - 1, two_j as usize)
                }
            };
            if k > kmax {
                continue;
            }
            let mut shell = Complex64::new(0.0, 0.0);
            for m in 0..=two_j {
                for l in 0..=l_max {
                    let v = BasisVector { two_j, m, l, spin };
                    match &fast {
                        Fast::Single(op) => {
                            let mut acc = 0.0;
                            for w in &op.words {
                                if let Some((c, t)) = apply_word(q0, &w.letters, &v) {
                                    if t == v {
                                        let sign = match (w.f_flag, v.spin) {
                                            (true, Spin::Down) => -1.0,
                                            _ => 1.0,
                                        };
                                        acc += w.coeff * c * sign;
                                    }
                                }
                            }
                            shell += acc;
                        }
                        Fast::Sandwich(pairs) => {
                            let (p1, v1) = apply_j(&v);
                            for (aw, bw) in pairs {
                                let Some((cb, v2)) = apply_word(q0, &bw.letters, &v1) else {
                                    continue;
                                };
                                let (p2, v3) = apply_j(&v2);
                                let Some((ca, v4)) = apply_word(q0, &aw.letters, &v3) else {
                                    continue;
                                };
                                debug_assert_eq!(v4, v);
                                let mut amp = (-p1 * bw.coeff * cb).conj() * p2 * (aw.coeff * ca);
                                if aw.f_flag && matches!(v3.spin, Spin::Down) {
                                    amp = -amp;
                                }
                                if bw.f_flag && matches!(v1.spin, Spin::Down) {
                                    amp = -amp;
                                }
                                shell += amp;
                            }
                        }
                        Fast::No => shell += diag_element(expr, q0, &v),
                    }
                }
            }
            traces[k] += shell;
        }
    }
    Ok(traces
        .into_iter()
        .enumerate()
        .map(|(k, value)| ShellTrace { two_d: 2 * k as u32 + 1, value })
        .collect())
}

/// Result of the asymptotic three-point fit T(d) = c2 d^2 + c1 d + c0.
/// The components equal the residues at |D|^{-3}, |D|^{-2}, |D|^{-1}.
#[derive(Clone, Copy, Debug)]
pub struct FitResult {
    pub c2: Complex64,
    pub c1: Complex64,
    pub c0: Complex64,
    /// Change against the previous three-shell window.
    pub uncertainty: [f64; 3],
}

impl FitResult {
    pub fn converged(&self, tol: f64) -> bool {
        self.uncertainty.iter().all(|u| *u < 10.0 * tol)
    }
}

fn window_fit(traces: &[ShellTrace], top: usize) -> (Complex64, Complex64, Complex64) {
    let d = |i: usize| traces[i].two_d as f64 / 2.0;
    let (t0, t1, t2) = (
        traces[top].value,
        traces[top - 1].value,
        traces[top - 2].value,
    );
    let d0 = d(top);
    let c2 = (t0 - 2.0 * t1 + t2) / 2.0;
    let c1 = (t0 - t1) - c2 * (2.0 * d0 - 1.0);
    let c0 = t0 - c2 * d0 * d0 - c1 * d0;
    (c2, c1, c0)
}

/// Three-point solve on the top shells, with the drift against the previous
/// window reported as the uncertainty.
pub fn residues_fit(traces: &[ShellTrace]) -> Result<FitResult, OracleError> {
    if traces.len() < 5 {
        return Err(OracleError::TooFewShells { need: 5, got: traces.len() });
    }
    let top = traces.len() - 1;
    let (c2, c1, c0) = window_fit(traces, top);
    let (p2, p1, p0) = window_fit(traces, top - 1);
    Ok(FitResult {
        c2,
        c1,
        c0,
        uncertainty: [(c2 - p2).norm(), (c1 - p1).norm(), (c0 - p0).norm()],
    })
}

/// Residue of an operator expression at |D|^{-k}.
pub fn ncint_numeric(
    expr: &OperatorExpr,
    k: u8,
    q0: f64,
    max_two_j: u32,
) -> Result<(Complex64, f64), OracleError> {
    let traces = shell_traces(expr, q0, max_two_j)?;
    let fit = residues_fit(&traces)?;
    Ok(match k {
        3 => (fit.c2, fit.uncertainty[0]),
        2 => (fit.c1, fit.uncertainty[1]),
        _ => (fit.c0, fit.uncertainty[2]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbw::AlgebraElement;
    use crate::xalg::{delta, lift};

    const Q: f64 = 0.5;

    fn op_of(x: &XElement) -> OperatorExpr {
        vec![ExprFactor::Op(NumOperator::from_x(x, Q))]
    }

    #[test]
    fn identity_shell_trace_is_quadratic() {
        let expr = op_of(&XElement::one());
        let traces = shell_traces(&expr, Q, 12).unwrap();
        for t in &traces {
            let d = t.two_d as f64 / 2.0;
            if t.two_d == 1 {
                assert_eq!(t.value.re, 0.0);
            } else {
                assert!((t.value.re - 2.0 * (d * d - 0.25)).abs() < 1e-12);
            }
        }
        let fit = residues_fit(&traces).unwrap();
        assert!((fit.c2.re - 2.0).abs() < 1e-10);
        assert!(fit.c1.norm() < 1e-10);
        assert!((fit.c0.re + 0.5).abs() < 1e-10);
    }

    #[test]
    fn f_trace_vanishes_per_shell() {
        let expr = vec![ExprFactor::Op(NumOperator::from_x(&XElement::f_op(), Q))];
        let traces = shell_traces(&expr, Q, 10).unwrap();
        for t in traces {
            assert!(t.value.norm() < 1e-12);
        }
    }

    #[test]
    fn boundary_annihilation() {
        // b- on l = 0 dies
        let v = BasisVector::new(4, 2, 0, Spin::Up).unwrap();
        assert!(apply_gen(Q, Gen::BMinus, &v).is_none());
        // a+ acts with the product of two root factors
        let v = BasisVector::new(2, 1, 1, Spin::Up).unwrap();
        let (c, t) = apply_gen(Q, Gen::APlus, &v).unwrap();
        assert_eq!(t, BasisVector::new(3, 2, 2, Spin::Up).unwrap());
        let expect = (1.0 - Q.powi(4)).sqrt() * (1.0 - Q.powi(4)).sqrt();
        assert!((c - expect).abs() < 1e-14);
    }

    #[test]
    fn j_squares_to_minus_one() {
        for v in [
            BasisVector::new(3, 1, 2, Spin::Up).unwrap(),
            BasisVector::new(3, 0, 1, Spin::Down).unwrap(),
            BasisVector::new(4, 4, 5, Spin::Up).unwrap(),
        ] {
            let (p1, v1) = apply_j(&v);
            let (p2, v2) = apply_j(&v1);
            // antilinear composition: J(J v) = conj(p1) p2 v2
            let total = p1.conj() * p2;
            assert_eq!(v2, v);
            assert!((total + Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn tadpole_residue_matches_symbolic() {
        let t = lift(&AlgebraElement::gen_b()).mul(&delta(&lift(&AlgebraElement::gen_b_star())));
        let (v, _) = ncint_numeric(&op_of(&t), 1, Q, 40).unwrap();
        assert!((v.re - 8.0 / 3.0).abs() < 1e-8, "got {v}");
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn q_guard() {
        assert!(matches!(
            shell_traces(&op_of(&XElement::one()), 0.95, 10),
            Err(OracleError::QOutOfRange(_))
        ));
    }

    #[test]
    fn lq_mq_diagonal_residues() {
        // I L_q^n |D|^{-2} = I M_q^n |D|^{-2} = 2/(1 - q^{2n})
        for n in 1..=3u32 {
            let expect = 2.0 / (1.0 - Q.powi(2 * n as i32));
            let (v, _) = ncint_numeric(&vec![ExprFactor::LPow(n)], 2, Q, 40).unwrap();
            assert!((v.re - expect).abs() < 1e-10, "L^{n}: {v} vs {expect}");
            let (v, _) = ncint_numeric(&vec![ExprFactor::MPow(n)], 2, Q, 40).unwrap();
            assert!((v.re - expect).abs() < 1e-10, "M^{n}: {v} vs {expect}");
        }
    }

    #[test]
    fn j_conjugated_residue_matches_reduction() {
        // I A J A J^{-1} |D|^{-3} = 1/2 (I A |D|^{-3})^2 = 2 for A = a* delta(a)
        let a = lift(&AlgebraElement::gen_a_star()).mul(&delta(&lift(&AlgebraElement::gen_a())));
        let expr = vec![
            ExprFactor::Op(NumOperator::from_x(&a, Q)),
            ExprFactor::JConj(NumOperator::from_x(&a, Q)),
        ];
        let (v, _) = ncint_numeric(&expr, 3, Q, 50).unwrap();
        assert!((v.re - 2.0).abs() < 1e-8, "got {v}");
        assert!(v.im.abs() < 1e-10);
    }
}

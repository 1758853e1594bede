//! Assembly of the spectral-action coefficients on the SU_q(2) triple:
//! the four heat-expansion coefficients with and without the reality
//! operator, the zeta function of the unperturbed Dirac operator, the
//! central one-form eigenvalue profile xi_q, gauge-invariant combinations,
//! and the reference table of noncommutative integrals.

use crate::oneform::{self, JKind, OneForm};
use crate::pbw::{AlgebraElement, PBWMonomial};
use crate::qfield::{q_number, CScalar, QFieldError, QScalar};
use num::{BigInt, BigRational, One};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("xi_q is defined at half-odd-integer points; got 2s = {0}")]
    XiNotHalfOdd(i64),
    #[error("xi_q pole: a q-number in the denominator vanishes at 2s = {0}")]
    XiPole(i64),
    #[error(transparent)]
    Field(#[from] QFieldError),
    #[error("one-form error: {0}")]
    Form(String),
}

impl From<oneform::OneFormError> for ActionError {
    fn from(e: oneform::OneFormError) -> Self {
        ActionError::Form(e.to_string())
    }
}

/// The integrals I A^n |D|^{-p}, 1 <= n <= p <= 3, that determine the full
/// action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveIntegrals {
    pub a_d1: QScalar,
    pub a_d2: QScalar,
    pub a_d3: QScalar,
    pub a2_d2: QScalar,
    pub a2_d3: QScalar,
    pub a3_d3: QScalar,
}

impl PrimitiveIntegrals {
    /// Closed forms where available; the |D|^{-1} integral has none and is
    /// served by the residue pipeline.
    pub fn compute(a: &OneForm) -> Result<Self, ActionError> {
        Ok(PrimitiveIntegrals {
            a_d1: oneform::ncint_tau(a, 1, 1)?,
            a_d2: oneform::ncint_closed(a, 1, 2)?,
            a_d3: oneform::ncint_closed(a, 1, 3)?,
            a2_d2: oneform::ncint_closed(a, 2, 2)?,
            a2_d3: oneform::ncint_closed(a, 2, 3)?,
            a3_d3: oneform::ncint_closed(a, 3, 3)?,
        })
    }

    /// Every integral through the residue pipeline, for cross-checking.
    pub fn compute_tau(a: &OneForm) -> Result<Self, ActionError> {
        Ok(PrimitiveIntegrals {
            a_d1: oneform::ncint_tau(a, 1, 1)?,
            a_d2: oneform::ncint_tau(a, 1, 2)?,
            a_d3: oneform::ncint_tau(a, 1, 3)?,
            a2_d2: oneform::ncint_tau(a, 2, 2)?,
            a2_d3: oneform::ncint_tau(a, 2, 3)?,
            a3_d3: oneform::ncint_tau(a, 3, 3)?,
        })
    }
}

/// J-conjugated and derivation cross terms entering the general formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JProducts {
    /// I A JAJ^{-1} |D|^{-3}
    pub a_ja_d3: QScalar,
    /// I A JAJ^{-1} |D|^{-2}
    pub a_ja_d2: QScalar,
    /// I A^2 JAJ^{-1} |D|^{-3}
    pub a2_ja_d3: QScalar,
    /// I delta(A) A |D|^{-3}
    pub delta_a_a_d3: QScalar,
    /// I delta(A) JAJ^{-1} |D|^{-3}
    pub delta_a_ja_d3: QScalar,
}

impl JProducts {
    /// On SU_q(2) all five reduce to products of plain integrals.
    pub fn compute(a: &OneForm) -> Result<Self, ActionError> {
        Ok(JProducts {
            a_ja_d3: oneform::ncint_j(a, a, JKind::I)?,
            a_ja_d2: oneform::ncint_j(a, a, JKind::Ii)?,
            a2_ja_d3: oneform::ncint_j(a, a, JKind::Iii)?,
            delta_a_a_d3: oneform::ncint_delta_a_a_closed(a),
            delta_a_ja_d3: oneform::ncint_j(a, a, JKind::Iv)?,
        })
    }
}

/// Heat-expansion coefficients: the action is
/// Phi_3 Lambda^3 c3 + Phi_2 Lambda^2 c2 + Phi_1 Lambda c1 + Phi(0) c0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionCoefficients {
    pub c3: QScalar,
    pub c2: QScalar,
    pub c1: QScalar,
    pub c0: QScalar,
}

impl ActionCoefficients {
    /// The unperturbed triple: (2, 0, -1/2, 0).
    pub fn baseline() -> Self {
        ActionCoefficients {
            c3: QScalar::from_int(2),
            c2: QScalar::zero(),
            c1: QScalar::from_ratio(-1, 2),
            c0: QScalar::zero(),
        }
    }
}

/// Coefficients of the full action with reality operator on any
/// 3-dimensional triple whose F commutes with the algebra up to smoothing
/// operators, assembled verbatim from the supplied integrals.
pub fn coeffs_general(
    base: &ActionCoefficients,
    i: &PrimitiveIntegrals,
    j: &JProducts,
) -> ActionCoefficients {
    let two = QScalar::from_int(2);
    let four = QScalar::from_int(4);
    let third2 = QScalar::from_ratio(2, 3);
    ActionCoefficients {
        c3: base.c3.clone(),
        c2: &base.c2 - &(four * &i.a_d3),
        c1: &base.c1 - &(&two * &i.a_d2) + &two * &i.a2_d3 + &two * &j.a_ja_d3,
        c0: &base.c0 - &(&two * &i.a_d1)
            + &i.a2_d2
            + &j.a_ja_d2
            + &j.delta_a_a_d3
            + &j.delta_a_ja_d3
            - third2 * &i.a3_d3
            - &two * &j.a2_ja_d3,
    }
}

/// With-J coefficients for a one-form on SU_q(2).
pub fn coeffs_suq2_with_j(a: &OneForm) -> Result<ActionCoefficients, ActionError> {
    let i = PrimitiveIntegrals::compute(a)?;
    let j = JProducts::compute(a)?;
    Ok(coeffs_general(&ActionCoefficients::baseline(), &i, &j))
}

/// Coefficients without the reality operator, from supplied integrals.
pub fn coeffs_no_j_general(
    base: &ActionCoefficients,
    i: &PrimitiveIntegrals,
    delta_a_a_d3: &QScalar,
) -> ActionCoefficients {
    let half = QScalar::from_ratio(1, 2);
    let third = QScalar::from_ratio(1, 3);
    ActionCoefficients {
        c3: base.c3.clone(),
        c2: &base.c2 - &(QScalar::from_int(2) * &i.a_d3),
        c1: &base.c1 - &i.a_d2 + &i.a2_d3,
        c0: &base.c0 - &i.a_d1 + &half * &i.a2_d2 + &half * delta_a_a_d3 - third * &i.a3_d3,
    }
}

pub fn coeffs_suq2_no_j(a: &OneForm) -> Result<ActionCoefficients, ActionError> {
    let i = PrimitiveIntegrals::compute(a)?;
    Ok(coeffs_no_j_general(
        &ActionCoefficients::baseline(),
        &i,
        &oneform::ncint_delta_a_a_closed(a),
    ))
}

/// Complex-coefficient variant of the with-J assembly, for a genuinely
/// complex coefficient matrix; the conjugations act on the supplied values.
pub struct PrimitiveIntegralsC {
    pub a_d1: CScalar,
    pub a_d2: CScalar,
    pub a_d3: CScalar,
    pub a2_d2: CScalar,
    pub a2_d3: CScalar,
    pub a3_d3: CScalar,
}

pub struct ActionCoefficientsC {
    pub c3: CScalar,
    pub c2: CScalar,
    pub c1: CScalar,
    pub c0: CScalar,
}

pub fn coeffs_with_j_complex(i: &PrimitiveIntegralsC) -> ActionCoefficientsC {
    let two = QScalar::from_int(2);
    let half = QScalar::from_ratio(1, 2);
    let c3 = CScalar::real(QScalar::from_int(2));
    let c2 = i.a_d3.scale(&QScalar::from_int(-4));
    let c1 = CScalar::real(QScalar::from_ratio(-1, 2))
        .add(&i.a2_d3.sub(&i.a_d2).scale(&two))
        .add(&CScalar::real(i.a_d3.abs2()));
    let c0 = i
        .a_d1
        .scale(&QScalar::from_int(-2))
        .add(&i.a2_d2)
        .sub(&i.a3_d3.scale(&QScalar::from_ratio(2, 3)))
        .add(&i.a_d3.conj().mul(&i.a_d2.scale(&half).sub(&i.a2_d3)))
        .add(&i.a_d3.scale(&half).mul(&i.a_d2.conj()));
    ActionCoefficientsC { c3, c2, c1, c0 }
}

// ---------------------------------------------------------------------------
// Zeta function of the unperturbed Dirac operator:
// zeta_D(s) = 2 (2^{s-2} - 1) zeta(s-2) - 1/2 (2^s - 1) zeta(s).
// ---------------------------------------------------------------------------

/// zeta_D(0) vanishes exactly (the prefactor of zeta(s-2) kills the zeta(-2)
/// factor's regular value and 2^0 - 1 = 0).
pub fn zeta_d0() -> QScalar {
    QScalar::zero()
}

/// Residues of zeta_D at s = 3, 2, 1.
pub fn zeta_d_residues() -> (QScalar, QScalar, QScalar) {
    (
        QScalar::from_int(2),
        QScalar::zero(),
        QScalar::from_ratio(-1, 2),
    )
}

/// Closed form at an integer sample point: the pair (c_a, c_b) with
/// zeta_D(s) = c_a zeta(s-2) + c_b zeta(s).
pub fn zeta_d_closed_form(s: i64) -> (BigRational, BigRational) {
    let two = BigRational::from_integer(BigInt::from(2));
    let pow = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(BigInt::from(2).pow(e as u32))
        } else {
            BigRational::one() / BigRational::from_integer(BigInt::from(2).pow((-e) as u32))
        }
    };
    let ca = &two * (pow(s - 2) - BigRational::one());
    let cb = -(pow(s) - BigRational::one()) / &two;
    (ca, cb)
}

// ---------------------------------------------------------------------------
// xi_q: the eigenvalue profile of the central one-form,
// xi_q(s) = q ([2s] - 2s) / ([s + 1/2][s - 1/2]) at half-odd-integer s.
// ---------------------------------------------------------------------------

/// Argument is 2s; it must be odd so that both shifted q-numbers are integral.
pub fn xi_q(two_s: i64) -> Result<QScalar, ActionError> {
    if two_s % 2 == 0 {
        return Err(ActionError::XiNotHalfOdd(two_s));
    }
    let up = q_number((two_s + 1) / 2);
    let down = q_number((two_s - 1) / 2);
    if up.is_zero() || down.is_zero() {
        return Err(ActionError::XiPole(two_s));
    }
    let num = q_number(two_s) - QScalar::from_int(two_s);
    Ok(QScalar::q() * num / (up * down))
}

// ---------------------------------------------------------------------------
// Numeric assembly with user-supplied cutoff moments.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct CutoffMoments {
    pub phi3: f64,
    pub phi2: f64,
    pub phi1: f64,
    pub phi0: f64,
}

/// Phi_3 L^3 c3 + Phi_2 L^2 c2 + Phi_1 L c1 + Phi(0) c0 at a numeric q.
pub fn assemble(m: &CutoffMoments, lambda: f64, c: &ActionCoefficients, q0: f64) -> f64 {
    m.phi3 * lambda.powi(3) * c.c3.eval_f64(q0)
        + m.phi2 * lambda.powi(2) * c.c2.eval_f64(q0)
        + m.phi1 * lambda * c.c1.eval_f64(q0)
        + m.phi0 * c.c0.eval_f64(q0)
}

/// The three gauge-invariant combinations of the with-J coefficients.
pub fn gauge_invariants(a: &OneForm) -> Result<[QScalar; 3], ActionError> {
    let i = PrimitiveIntegrals::compute(a)?;
    Ok([
        i.a_d3.clone(),
        &i.a2_d3 - &i.a_d2,
        QScalar::from_int(-2) * &i.a_d1 + &i.a2_d2 - QScalar::from_ratio(2, 3) * &i.a3_d3,
    ])
}

// ---------------------------------------------------------------------------
// The reference table: rows a*da, b*db, ada*, bdb* with the six integrals
// and the with-J scale-invariant term.
// ---------------------------------------------------------------------------

pub struct TableRow {
    pub label: &'static str,
    pub form: OneForm,
    /// I A |D|^-3, I A^2 |D|^-3, I A^3 |D|^-3, I A |D|^-2, I A^2 |D|^-2,
    /// I A |D|^-1, zeta_{D_A}(0)
    pub values: [QScalar; 7],
}

pub fn table_forms() -> Vec<(&'static str, OneForm)> {
    let gen = |alpha: i64, beta: u32, gamma: u32| {
        AlgebraElement::monomial(PBWMonomial::new(alpha, beta, gamma))
    };
    vec![
        ("a*da", OneForm::from_pair(&gen(-1, 0, 0), &gen(1, 0, 0))),
        ("b*db", OneForm::from_pair(&gen(0, 0, 1), &gen(0, 1, 0))),
        ("ada*", OneForm::from_pair(&gen(1, 0, 0), &gen(-1, 0, 0))),
        ("bdb*", OneForm::from_pair(&gen(0, 1, 0), &gen(0, 0, 1))),
    ]
}

pub fn reference_table() -> Result<Vec<TableRow>, ActionError> {
    table_forms()
        .into_iter()
        .map(|(label, form)| {
            let i = PrimitiveIntegrals::compute(&form)?;
            let zeta = coeffs_suq2_with_j(&form)?.c0;
            Ok(TableRow {
                label,
                values: [
                    i.a_d3, i.a2_d3, i.a3_d3, i.a_d2, i.a2_d2, i.a_d1, zeta,
                ],
                form,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(s: &str) -> QScalar {
        QScalar::parse(s).unwrap()
    }

    #[test]
    fn baseline_passthrough() {
        let a = OneForm::zero();
        let c = coeffs_suq2_with_j(&a).unwrap();
        assert_eq!(c.c3, QScalar::from_int(2));
        assert!(c.c2.is_zero());
        assert_eq!(c.c1, QScalar::from_ratio(-1, 2));
        assert!(c.c0.is_zero());
        let c = coeffs_suq2_no_j(&a).unwrap();
        assert_eq!(c.c1, QScalar::from_ratio(-1, 2));
    }

    #[test]
    fn zeta_values() {
        assert!(zeta_d0().is_zero());
        let (r3, r2, r1) = zeta_d_residues();
        assert_eq!(r3, QScalar::from_int(2));
        assert!(r2.is_zero());
        assert_eq!(r1, QScalar::from_ratio(-1, 2));
        // closed form at s = 0: c_a = -3/2, c_b = 0; zeta(-2) = 0 gives 0
        let (ca, cb) = zeta_d_closed_form(0);
        assert_eq!(ca, BigRational::new(BigInt::from(-3), BigInt::from(2)));
        assert!(num::Zero::is_zero(&cb));
    }

    #[test]
    fn first_table_row() {
        let rows = reference_table().unwrap();
        let r = &rows[0];
        assert_eq!(r.label, "a*da");
        let expected = [
            "2",
            "2",
            "2",
            "4*q^2/(q^2-1)",
            "4*q^2*(q^2+2)/(q^4-1)",
            "(3*q^2+1)/(2*(q^2-1))",
            "(11*q^4+36*q^2+13)/(3*(q^4-1))",
        ];
        for (v, e) in r.values.iter().zip(expected) {
            assert_eq!(v, &qs(e));
        }
    }

    #[test]
    fn no_j_examples() {
        let a = table_forms().remove(0).1; // a* delta(a)
        let c = coeffs_suq2_no_j(&a).unwrap();
        assert_eq!(c.c2, QScalar::from_int(-4));
    }

    #[test]
    fn xi_q_properties() {
        // q -> 0 limits: +1 at 2j + 3/2, -1 at -(2j + 1/2)
        let q0 = num::BigRational::new(BigInt::from(1), BigInt::from(1000));
        for j2 in 0..5i64 {
            let up = xi_q(4 * j2 + 3).unwrap();
            let v: f64 = num::ToPrimitive::to_f64(&up.eval_at(&q0).unwrap()).unwrap();
            assert!((v - 1.0).abs() < 1e-2, "2s = {}: {v}", 4 * j2 + 3);
            let down = xi_q(-(4 * j2 + 3)).unwrap();
            let v: f64 = num::ToPrimitive::to_f64(&down.eval_at(&q0).unwrap()).unwrap();
            assert!((v + 1.0).abs() < 1e-2);
        }
        // q -> 1 limit is 0 (the canonical form has no pole at 1)
        let one = num::BigRational::one();
        for s2 in [3i64, 5, 7, 9] {
            assert!(num::Zero::is_zero(&xi_q(s2).unwrap().eval_at(&one).unwrap()));
        }
        // oddness and argument checking
        assert!(xi_q(4).is_err());
        assert!(xi_q(1).is_err()); // [s - 1/2] = [0] = 0
    }

    #[test]
    fn complex_assembly_matches_real_path() {
        let a = table_forms().remove(0).1;
        let i = PrimitiveIntegrals::compute(&a).unwrap();
        let ic = PrimitiveIntegralsC {
            a_d1: CScalar::real(i.a_d1.clone()),
            a_d2: CScalar::real(i.a_d2.clone()),
            a_d3: CScalar::real(i.a_d3.clone()),
            a2_d2: CScalar::real(i.a2_d2.clone()),
            a2_d3: CScalar::real(i.a2_d3.clone()),
            a3_d3: CScalar::real(i.a3_d3.clone()),
        };
        let cc = coeffs_with_j_complex(&ic);
        let c = coeffs_suq2_with_j(&a).unwrap();
        assert_eq!(cc.c0.re, c.c0);
        assert!(cc.c0.im.is_zero());
        assert_eq!(cc.c1.re, c.c1);
    }

    #[test]
    fn scale_invariant_terms_differ_by_two_without_the_top_tadpole() {
        // when I A |D|^{-3} = 0 the with-J and no-J constant terms agree
        // up to a global factor of 2
        let mut forms = table_forms();
        let b_star_db = forms.remove(1).1;
        let b_db_star = forms.pop().unwrap().1;
        let mut mixed = b_star_db.clone();
        mixed = mixed.add(&b_db_star.scale(&QScalar::q()));
        for a in [b_star_db, b_db_star, mixed] {
            assert!(PrimitiveIntegrals::compute(&a).unwrap().a_d3.is_zero());
            let with_j = coeffs_suq2_with_j(&a).unwrap().c0;
            let no_j = coeffs_suq2_no_j(&a).unwrap().c0;
            assert_eq!(with_j, QScalar::from_int(2) * no_j);
        }
    }

    #[test]
    fn gauge_invariant_examples() {
        let a = table_forms().remove(0).1;
        let g = gauge_invariants(&a).unwrap();
        assert_eq!(g[0], QScalar::from_int(2));
        assert_eq!(g[1], QScalar::from_int(2) - qs("4*q^2/(q^2-1)"));
        let z = OneForm::zero();
        for v in gauge_invariants(&z).unwrap() {
            assert!(v.is_zero());
        }
        let b = table_forms().remove(1).1; // b* delta(b)
        let g = gauge_invariants(&b).unwrap();
        assert!(g[0].is_zero());
        assert!(g[1].is_zero());
        assert_eq!(g[2], qs("-2*(-2/(q^2-1)) + (-4/(q^4-1))"));
    }
}

//! Cyclic-cohomology machinery: the cochains
//! phi_n(a_0, ..., a_n) = I a_0 [D,a_1] D^{-1} ... [D,a_n] D^{-1},
//! the Hochschild and cyclic operators b, b', B_0, B, lambda, N, the
//! scale-invariant term of the action in both its direct and cochain
//! presentations, and the index pairing with the canonical unitary.

use crate::hopf::{self, GradedPair};
use crate::pbw::AlgebraElement;
use crate::qfield::QScalar;
use crate::xalg::{delta, lift, XElement};
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CocycleError {
    #[error("cochain arity must be 1..=3, got {0}")]
    BadArity(usize),
    #[error("operator {op} needs arity >= {min}, got {got}")]
    ArityMismatch { op: &'static str, min: usize, got: usize },
}

pub type CochainEval = Rc<dyn Fn(&[AlgebraElement]) -> QScalar>;

/// A multilinear functional on (arity + 1)-tuples of algebra elements.
#[derive(Clone)]
pub struct Cochain {
    pub arity: usize,
    eval: CochainEval,
}

impl Cochain {
    pub fn new(arity: usize, eval: CochainEval) -> Self {
        Cochain { arity, eval }
    }

    pub fn eval(&self, args: &[AlgebraElement]) -> QScalar {
        assert_eq!(args.len(), self.arity + 1, "cochain arity mismatch");
        (self.eval)(args)
    }
}

fn graded_of(x: &XElement) -> GradedPair {
    hopf::r_graded(x)
}

/// phi_1(a0, a1) = I a0 delta(a1) |D|^{-1}.
fn phi1_eval(args: &[AlgebraElement]) -> QScalar {
    let t = lift(&args[0]).mul(&delta(&lift(&args[1])));
    hopf::ncint(&t, 1).expect("k = 1")
}

/// phi_2(a0, a1, a2) = I a0 d1 d2 |D|^{-2} - I a0 d1 delta(d2) |D|^{-3}
/// after commuting the inverse powers to the right.
fn phi2_eval(args: &[AlgebraElement]) -> QScalar {
    let t = lift(&args[0]).mul(&delta(&lift(&args[1])));
    let d2 = delta(&lift(&args[2]));
    let gt = graded_of(&t);
    hopf::pair_residue(&gt, &graded_of(&d2), 2).expect("k = 2")
        - hopf::pair_residue(&gt, &graded_of(&delta(&d2)), 3).expect("k = 3")
}

/// phi_3(a0, a1, a2, a3) = I a0 d1 d2 d3 |D|^{-3}.
fn phi3_eval(args: &[AlgebraElement]) -> QScalar {
    let t = lift(&args[0]).mul(&delta(&lift(&args[1])));
    hopf::triple_residue_d3(
        &graded_of(&t),
        &graded_of(&delta(&lift(&args[2]))),
        &graded_of(&delta(&lift(&args[3]))),
    )
}

/// The basic cochains.
pub fn phi(n: usize) -> Result<Cochain, CocycleError> {
    match n {
        1 => Ok(Cochain::new(1, Rc::new(phi1_eval))),
        2 => Ok(Cochain::new(2, Rc::new(phi2_eval))),
        3 => Ok(Cochain::new(3, Rc::new(phi3_eval))),
        _ => Err(CocycleError::BadArity(n)),
    }
}

/// The cyclic 1-cochain N phi_1.
pub fn nphi1(a0: &AlgebraElement, a1: &AlgebraElement) -> QScalar {
    phi1_eval(&[a0.clone(), a1.clone()]) - phi1_eval(&[a1.clone(), a0.clone()])
}

/// Coboundary and cyclic operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoboundaryOp {
    /// Hochschild coboundary b.
    B,
    /// Truncated coboundary b'.
    BPrime,
    /// Insertion of the unit in the first slot.
    B0,
    /// N B_0.
    BigB,
    /// Cyclic permutation with sign.
    Lambda,
    /// Cyclic symmetrizer 1 + lambda + ... + lambda^n.
    N,
}

pub fn coboundary(op: CoboundaryOp, phi: &Cochain) -> Result<Cochain, CocycleError> {
    let n = phi.arity;
    let inner = phi.clone();
    match op {
        CoboundaryOp::BPrime => Ok(Cochain::new(
            n + 1,
            Rc::new(move |args: &[AlgebraElement]| {
                let mut acc = QScalar::zero();
                for j in 0..=inner.arity {
                    let mut t: Vec<AlgebraElement> = Vec::with_capacity(args.len() - 1);
                    t.extend_from_slice(&args[..j]);
                    t.push(args[j].mul(&args[j + 1]));
                    t.extend_from_slice(&args[j + 2..]);
                    let v = inner.eval(&t);
                    if j % 2 == 0 {
                        acc += &v;
                    } else {
                        acc -= &v;
                    }
                }
                acc
            }),
        )),
        CoboundaryOp::B => {
            let bp = coboundary(CoboundaryOp::BPrime, phi)?;
            let inner = phi.clone();
            Ok(Cochain::new(
                n + 1,
                Rc::new(move |args: &[AlgebraElement]| {
                    let mut acc = bp.eval(args);
                    let mut t: Vec<AlgebraElement> = Vec::with_capacity(args.len() - 1);
                    t.push(args[args.len() - 1].mul(&args[0]));
                    t.extend_from_slice(&args[1..args.len() - 1]);
                    let v = inner.eval(&t);
                    if (inner.arity + 1).is_multiple_of(2) {
                        acc += &v;
                    } else {
                        acc -= &v;
                    }
                    acc
                }),
            ))
        }
        CoboundaryOp::B0 => {
            if n == 0 {
                return Err(CocycleError::ArityMismatch { op: "B0", min: 1, got: 0 });
            }
            Ok(Cochain::new(
                n - 1,
                Rc::new(move |args: &[AlgebraElement]| {
                    let mut t = Vec::with_capacity(args.len() + 1);
                    t.push(AlgebraElement::one());
                    t.extend_from_slice(args);
                    inner.eval(&t)
                }),
            ))
        }
        CoboundaryOp::Lambda => Ok(Cochain::new(
            n,
            Rc::new(move |args: &[AlgebraElement]| {
                let mut t = Vec::with_capacity(args.len());
                t.push(args[args.len() - 1].clone());
                t.extend_from_slice(&args[..args.len() - 1]);
                let v = inner.eval(&t);
                if inner.arity.is_multiple_of(2) {
                    v
                } else {
                    -v
                }
            }),
        )),
        CoboundaryOp::N => Ok(Cochain::new(
            n,
            Rc::new(move |args: &[AlgebraElement]| {
                let mut acc = QScalar::zero();
                let mut t: Vec<AlgebraElement> = args.to_vec();
                let sign_flip = inner.arity % 2 == 1;
                let mut negate = false;
                for _ in 0..=inner.arity {
                    let v = inner.eval(&t);
                    if negate {
                        acc -= &v;
                    } else {
                        acc += &v;
                    }
                    t.rotate_right(1);
                    if sign_flip {
                        negate = !negate;
                    }
                }
                acc
            }),
        )),
        CoboundaryOp::BigB => {
            let b0 = coboundary(CoboundaryOp::B0, phi)?;
            coboundary(CoboundaryOp::N, &b0)
        }
    }
}

// ---------------------------------------------------------------------------
// Scale-invariant term of the action for a one-form given by a presentation
// A = sum_i x_i delta(y_i) (the true one-form being A F).
// ---------------------------------------------------------------------------

pub type Presentation = Vec<(AlgebraElement, AlgebraElement)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalePath {
    /// -I A|D|^{-1} + 1/2 I (A|D|^{-1})^2 - 1/3 I (A|D|^{-1})^3.
    Direct,
    /// -1/2 int_{Nphi_1} A + 1/2 int_{phi_2}(dA + A^2)
    /// - 1/2 int_{phi_3}(A dA + 2/3 A^3).
    Cochain,
}

fn presentation_to_x(pres: &Presentation) -> XElement {
    let mut a = XElement::zero();
    for (x, y) in pres {
        a = a.add(&lift(x).mul(&delta(&lift(y))));
    }
    a
}

pub fn scale_invariant_term(pres: &Presentation, path: ScalePath) -> QScalar {
    match path {
        ScalePath::Direct => {
            let a = presentation_to_x(pres);
            let g = graded_of(&a);
            let gd = graded_of(&delta(&a));
            let i1 = hopf::ncint(&a, 1).expect("k = 1");
            // (A |D|^{-1})^2 = A^2 |D|^{-2} - A delta(A) |D|^{-3} + O(-4)
            let i2 = hopf::pair_residue(&g, &g, 2).unwrap()
                - hopf::pair_residue(&g, &gd, 3).unwrap();
            let i3 = hopf::triple_residue_d3(&g, &g, &g);
            -i1 + QScalar::from_ratio(1, 2) * i2 - QScalar::from_ratio(1, 3) * i3
        }
        ScalePath::Cochain => {
            let half = QScalar::from_ratio(1, 2);
            let third2 = QScalar::from_ratio(2, 3);
            // tadpole part
            let mut s1 = QScalar::zero();
            for (x, y) in pres {
                s1 += &nphi1(x, y);
            }
            // int_{phi_2} dA = sum phi_2(1, x, y)
            let mut s2 = QScalar::zero();
            for (x, y) in pres {
                s2 += &phi2_eval(&[AlgebraElement::one(), x.clone(), y.clone()]);
            }
            // int_{phi_2} A^2 = sum phi_2(x_i, y_i x_j, y_j) - phi_2(x_i y_i, x_j, y_j)
            for (xi, yi) in pres {
                for (xj, yj) in pres {
                    s2 += &phi2_eval(&[xi.clone(), yi.mul(xj), yj.clone()]);
                    s2 -= &phi2_eval(&[xi.mul(yi), xj.clone(), yj.clone()]);
                }
            }
            // int_{phi_3} A dA = sum phi_3(x_i, y_i, x_j, y_j)
            let mut s3 = QScalar::zero();
            for (xi, yi) in pres {
                for (xj, yj) in pres {
                    s3 += &phi3_eval(&[xi.clone(), yi.clone(), xj.clone(), yj.clone()]);
                }
            }
            // int_{phi_3} A^3 expanded into left-normalized slots
            let mut s4 = QScalar::zero();
            for (xi, yi) in pres {
                for (xj, yj) in pres {
                    for (xk, yk) in pres {
                        s4 += &phi3_eval(&[xi.clone(), yi.mul(xj), yj.mul(xk), yk.clone()]);
                        s4 -= &phi3_eval(&[xi.clone(), yi.mul(xj).mul(yj), xk.clone(), yk.clone()]);
                        s4 -= &phi3_eval(&[xi.mul(yi), xj.clone(), yj.mul(xk), yk.clone()]);
                        s4 += &phi3_eval(&[xi.mul(yi), xj.mul(yj), xk.clone(), yk.clone()]);
                    }
                }
            }
            -&half * s1 + &half * s2 - &half * (s3 + third2 * s4)
        }
    }
}

// ---------------------------------------------------------------------------
// Index pairing with the canonical unitary U = [[a, b], [-q b*, a*]].
// ---------------------------------------------------------------------------

/// I T P |D|^{-k} with P = (1 + F)/2.
fn ncint_positive(t: &XElement, k: u8) -> QScalar {
    let half = QScalar::from_ratio(1, 2);
    &half * (hopf::ncint(t, k).unwrap() + hopf::ncint(&t.times_f(), k).unwrap())
}

pub fn canonical_unitary() -> [[AlgebraElement; 2]; 2] {
    [
        [AlgebraElement::gen_a(), AlgebraElement::gen_b()],
        [
            AlgebraElement::gen_b_star().scale(&-QScalar::q()),
            AlgebraElement::gen_a_star(),
        ],
    ]
}

/// The odd index pairing of the tadpole cochain with a unitary matrix:
/// sum over entries e of 2 I e* delta(e) P |D|^{-1}
/// - I e* delta^2(e) P |D|^{-2} + 2/3 I e* delta^3(e) P |D|^{-3}.
pub fn psi1_pairing(u: &[[AlgebraElement; 2]; 2]) -> QScalar {
    let mut acc = QScalar::zero();
    for row in u {
        for e in row {
            let x = lift(&e.adjoint());
            let d1 = delta(&lift(e));
            let d2 = delta(&d1);
            let d3 = delta(&d2);
            acc += &(QScalar::from_int(2) * ncint_positive(&x.mul(&d1), 1));
            acc -= &ncint_positive(&x.mul(&d2), 2);
            acc += &(QScalar::from_ratio(2, 3) * ncint_positive(&x.mul(&d3), 3));
        }
    }
    acc
}

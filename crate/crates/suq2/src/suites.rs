//! Named verification suites, shared between the command-line `verify`
//! subcommand and the acceptance tests. Each suite returns one result per
//! named check; randomized checks are seeded and reproducible.

use crate::action;
use crate::cocycle::{self, CoboundaryOp, Presentation, ScalePath};
use crate::hopf::{self, PdoFactor};
use crate::oneform::{self, JKind, OneForm, OneFormKind};
use crate::oracle::{self, ExprFactor, NumOperator};
use crate::pbw::{reduce_word, AlgebraElement, Letter, PBWMonomial};
use crate::qfield::QScalar;
use crate::xalg::{
    d_commutator, delta, is_zero_operator, lift, Gen, XElement,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}

fn check(out: &mut Vec<CheckResult>, name: &str, passed: bool, details: impl Into<String>) {
    out.push(CheckResult { name: name.to_string(), passed, details: details.into() });
}

// ---------------------------------------------------------------------------
// Random generators.
// ---------------------------------------------------------------------------

fn random_monomial(rng: &mut ChaCha8Rng, max_letters: usize) -> PBWMonomial {
    let n = rng.gen_range(0..=max_letters);
    let mut alpha = 0i64;
    let mut beta = 0u32;
    let mut gamma = 0u32;
    let a_sign: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
    for _ in 0..n {
        match rng.gen_range(0..3) {
            0 if alpha.unsigned_abs() < 2 => alpha += a_sign,
            1 if beta < 2 => beta += 1,
            _ if gamma < 2 => gamma += 1,
            _ => {}
        }
    }
    PBWMonomial::new(alpha, beta, gamma)
}

fn random_element(rng: &mut ChaCha8Rng, max_letters: usize) -> AlgebraElement {
    AlgebraElement::monomial(random_monomial(rng, max_letters))
}

fn random_coeff(rng: &mut ChaCha8Rng) -> QScalar {
    match rng.gen_range(0..5) {
        0 => QScalar::one(),
        1 => -QScalar::one(),
        2 => QScalar::from_int(2),
        3 => QScalar::q(),
        _ => -QScalar::q_pow(2),
    }
}

pub fn random_oneform(rng: &mut ChaCha8Rng) -> OneForm {
    let mut a = OneForm::zero();
    for _ in 0..rng.gen_range(1..=2) {
        a.add_term(
            random_monomial(rng, 3),
            random_monomial(rng, 3),
            random_coeff(rng),
        );
    }
    a
}

/// Smaller draws for the numeric J-conjugation checks, where the cost grows
/// with the square of the word count.
pub fn random_oneform_small(rng: &mut ChaCha8Rng) -> OneForm {
    let mut a = OneForm::zero();
    a.add_term(
        random_monomial(rng, 2),
        random_monomial(rng, 2),
        random_coeff(rng),
    );
    a
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<Gen> {
    const GENS: [Gen; 8] = [
        Gen::APlus,
        Gen::AMinus,
        Gen::BPlus,
        Gen::BMinus,
        Gen::APlusStar,
        Gen::AMinusStar,
        Gen::BPlusStar,
        Gen::BMinusStar,
    ];
    let n = rng.gen_range(1..=max_len);
    (0..n).map(|_| GENS[rng.gen_range(0..8)]).collect()
}

fn xword(rng: &mut ChaCha8Rng, max_len: usize) -> XElement {
    let mut e = XElement::zero();
    e.add_word(random_word(rng, max_len), random_coeff(rng));
    e
}

// ---------------------------------------------------------------------------
// PBW suite.
// ---------------------------------------------------------------------------

pub fn suite_pbw(seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    use Letter::*;

    let relations: [(&str, Vec<Letter>, AlgebraElement); 5] = [
        ("ba = q ab", vec![B, A], reduce_word(&[A, B]).scale(&QScalar::q())),
        ("b*a = q ab*", vec![BStar, A], reduce_word(&[A, BStar]).scale(&QScalar::q())),
        ("bb* = b*b", vec![B, BStar], reduce_word(&[BStar, B])),
        (
            "aa* + bb* = 1",
            vec![A, AStar],
            AlgebraElement::one().sub(&reduce_word(&[B, BStar])),
        ),
        (
            "a*a + q^2 b*b = 1",
            vec![AStar, A],
            AlgebraElement::one().sub(&reduce_word(&[BStar, B]).scale(&QScalar::q_pow(2))),
        ),
    ];
    for (name, word, expected) in relations {
        let got = reduce_word(&word);
        check(&mut out, &format!("relation {name}"), got == expected, "");
    }

    let mut assoc_ok = true;
    for _ in 0..200 {
        let x = random_element(&mut rng, 3);
        let y = random_element(&mut rng, 3);
        let z = random_element(&mut rng, 3);
        if x.mul(&y).mul(&z) != x.mul(&y.mul(&z)) {
            assoc_ok = false;
            break;
        }
    }
    check(&mut out, "associativity on 200 random triples", assoc_ok, "");

    let mut adj_ok = true;
    for _ in 0..100 {
        let x = random_element(&mut rng, 3).scale(&random_coeff(&mut rng));
        let y = random_element(&mut rng, 3);
        if x.adjoint().adjoint() != x || x.mul(&y).adjoint() != y.adjoint().mul(&x.adjoint()) {
            adj_ok = false;
            break;
        }
    }
    check(&mut out, "adjoint is an involutive antihomomorphism", adj_ok, "");
    out
}

// ---------------------------------------------------------------------------
// Operator-identity suite.
// ---------------------------------------------------------------------------

fn xg(g: Gen) -> XElement {
    XElement::generator(g)
}

/// The quadratic basis identities of the shift operators; each must
/// normal-form to zero.
fn basis_identities() -> Vec<(&'static str, XElement)> {
    use Gen::*;
    let q = QScalar::q();
    let q2 = QScalar::q_pow(2);
    let one = XElement::one();
    let mut v = Vec::new();
    v.push((
        "a+*a+ - q^2 a+a+* + q^2(b+*b+ - b+b+*) = 1 - q^2",
        xg(APlusStar)
            .mul(&xg(APlus))
            .sub(&xg(APlus).mul(&xg(APlusStar)).scale(&q2))
            .add(&xg(BPlusStar).mul(&xg(BPlus)).sub(&xg(BPlus).mul(&xg(BPlusStar))).scale(&q2))
            .sub(&one.scale(&(QScalar::one() - &q2))),
    ));
    v.push((
        "a+a+* + a-a-* + b+b+* + b-b-* = 1",
        xg(APlus)
            .mul(&xg(APlusStar))
            .add(&xg(AMinus).mul(&xg(AMinusStar)))
            .add(&xg(BPlus).mul(&xg(BPlusStar)))
            .add(&xg(BMinus).mul(&xg(BMinusStar)))
            .sub(&one),
    ));
    v.push((
        "a+*a+ + a-*a- + q^2(b+*b+ + b-*b-) = 1",
        xg(APlusStar)
            .mul(&xg(APlus))
            .add(&xg(AMinusStar).mul(&xg(AMinus)))
            .add(&xg(BPlusStar).mul(&xg(BPlus)).add(&xg(BMinusStar).mul(&xg(BMinus))).scale(&q2))
            .sub(&one),
    ));
    v.push((
        "a-*a- - q^2 a-a-* + q^2 b-*b- - q^2 b-b-* = 0",
        xg(AMinusStar)
            .mul(&xg(AMinus))
            .sub(&xg(AMinus).mul(&xg(AMinusStar)).scale(&q2))
            .add(&xg(BMinusStar).mul(&xg(BMinus)).scale(&q2))
            .sub(&xg(BMinus).mul(&xg(BMinusStar)).scale(&q2)),
    ));
    v.push((
        "a+a-* + b-*b+ = 0",
        xg(APlus).mul(&xg(AMinusStar)).add(&xg(BMinusStar).mul(&xg(BPlus))),
    ));
    v.push((
        "a-*a+ + q^2 b-*b+ = 0",
        xg(AMinusStar).mul(&xg(APlus)).add(&xg(BMinusStar).mul(&xg(BPlus)).scale(&q2)),
    ));
    v.push((
        "a-a+* + b+*b- = 0",
        xg(AMinus).mul(&xg(APlusStar)).add(&xg(BPlusStar).mul(&xg(BMinus))),
    ));
    v.push((
        "a+*a- + q^2 b+*b- = 0",
        xg(APlusStar).mul(&xg(AMinus)).add(&xg(BPlusStar).mul(&xg(BMinus)).scale(&q2)),
    ));
    v.push((
        "b+b+* - b+*b+ + b-b-* - b-*b- = 0",
        xg(BPlus)
            .mul(&xg(BPlusStar))
            .sub(&xg(BPlusStar).mul(&xg(BPlus)))
            .add(&xg(BMinus).mul(&xg(BMinusStar)))
            .sub(&xg(BMinusStar).mul(&xg(BMinus))),
    ));
    v.push((
        "q a+b- - b-a+ + q a-b+ - b+a- = 0",
        xg(APlus)
            .mul(&xg(BMinus))
            .scale(&q)
            .sub(&xg(BMinus).mul(&xg(APlus)))
            .add(&xg(AMinus).mul(&xg(BPlus)).scale(&q))
            .sub(&xg(BPlus).mul(&xg(AMinus))),
    ));
    // pairwise commutation rules
    let rules: [(&'static str, Gen, Gen, i64); 12] = [
        ("a-a+ = q^2 a+a-", AMinus, APlus, 2),
        ("b-b+ = q^2 b+b-", BMinus, BPlus, 2),
        ("b+a+ = q a+b+", BPlus, APlus, 1),
        ("b-a- = q a-b-", BMinus, AMinus, 1),
        ("a-*a+ = q^2 a+a-*", AMinusStar, APlus, 2),
        ("a-*a- = a-a-*", AMinusStar, AMinus, 0),
        ("a-*b+ = q b+a-*", AMinusStar, BPlus, 1),
        ("a-*b- = q^-1 b-a-*", AMinusStar, BMinus, -1),
        ("a+*a- = q^2 a-a+*", APlusStar, AMinus, 2),
        ("b-*b+ = b+b-*", BMinusStar, BPlus, 0),
        ("b-*a+ = q a+b-*", BMinusStar, APlus, 1),
        ("a-b+ = q b+a-", AMinus, BPlus, 1),
    ];
    for (name, g1, g2, pow) in rules {
        v.push((
            name,
            xg(g1).mul(&xg(g2)).sub(&xg(g2).mul(&xg(g1)).scale(&QScalar::q_pow(pow))),
        ));
    }
    v
}

/// Products of d-images of the generators; all are exact identities.
fn two_form_identities() -> Vec<(&'static str, XElement)> {
    let g = |l: Letter| lift(&reduce_word(&[l]));
    use Letter::*;
    let d = |l: Letter| d_commutator(&g(l));
    let q = QScalar::q();
    let q2 = QScalar::q_pow(2);
    vec![
        ("q da db = db da", d(A).mul(&d(B)).scale(&q).sub(&d(B).mul(&d(A)))),
        ("q da db* = db* da", d(A).mul(&d(BStar)).scale(&q).sub(&d(BStar).mul(&d(A)))),
        ("da* db = q db da*", d(AStar).mul(&d(B)).sub(&d(B).mul(&d(AStar)).scale(&q))),
        (
            "da* db* = q db* da*",
            d(AStar).mul(&d(BStar)).sub(&d(BStar).mul(&d(AStar)).scale(&q)),
        ),
        ("db db* = db* db", d(B).mul(&d(BStar)).sub(&d(BStar).mul(&d(B)))),
        (
            "da da* + db db* = -1",
            d(A).mul(&d(AStar)).add(&d(B).mul(&d(BStar))).add(&XElement::one()),
        ),
        (
            "q^2 da da* - da* da = 1 - q^2",
            d(A)
                .mul(&d(AStar))
                .scale(&q2)
                .sub(&d(AStar).mul(&d(A)))
                .sub(&XElement::one().scale(&(QScalar::one() - &q2))),
        ),
    ]
}

/// First-order commutation of the differential calculus: each lhs - rhs must
/// land in the ideal R (not vanish identically).
fn commutation_table() -> Vec<(&'static str, XElement)> {
    let g = |l: Letter| lift(&reduce_word(&[l]));
    use Letter::*;
    let d = |l: Letter| d_commutator(&g(l));
    let qi = QScalar::q_pow(-1);
    let q = QScalar::q();
    let mut v: Vec<(&'static str, XElement)> = vec![
        ("a da = da a", g(A).mul(&d(A)).sub(&d(A).mul(&g(A)))),
        ("a* da = -da* a", g(AStar).mul(&d(A)).add(&d(AStar).mul(&g(A)))),
        ("b da = q da b", g(B).mul(&d(A)).sub(&d(A).mul(&g(B)).scale(&q))),
        ("b* da = q da b*", g(BStar).mul(&d(A)).sub(&d(A).mul(&g(BStar)).scale(&q))),
        ("a da* = -da a*", g(A).mul(&d(AStar)).add(&d(A).mul(&g(AStar)))),
        ("a* da* = da* a*", g(AStar).mul(&d(AStar)).sub(&d(AStar).mul(&g(AStar)))),
        ("b da* = q^-1 da* b", g(B).mul(&d(AStar)).sub(&d(AStar).mul(&g(B)).scale(&qi))),
        (
            "b* da* = q^-1 da* b*",
            g(BStar).mul(&d(AStar)).sub(&d(AStar).mul(&g(BStar)).scale(&qi)),
        ),
        ("a db = q^-1 db a", g(A).mul(&d(B)).sub(&d(B).mul(&g(A)).scale(&qi))),
        ("a* db = q db a*", g(AStar).mul(&d(B)).sub(&d(B).mul(&g(AStar)).scale(&q))),
        ("b db = db b", g(B).mul(&d(B)).sub(&d(B).mul(&g(B)))),
        ("b* db = db b*", g(BStar).mul(&d(B)).sub(&d(B).mul(&g(BStar)))),
        ("b* db = -b db*", g(BStar).mul(&d(B)).add(&g(B).mul(&d(BStar)))),
        ("a db* = q^-1 db* a", g(A).mul(&d(BStar)).sub(&d(BStar).mul(&g(A)).scale(&qi))),
        ("a* db* = q db* a*", g(AStar).mul(&d(BStar)).sub(&d(BStar).mul(&g(AStar)).scale(&q))),
        ("b db* = db* b", g(B).mul(&d(BStar)).sub(&d(BStar).mul(&g(B)))),
        ("b* db* = db* b*", g(BStar).mul(&d(BStar)).sub(&d(BStar).mul(&g(BStar)))),
    ];
    // the sign of D as a commutator combination
    let f = XElement::f_op();
    let q2 = QScalar::q_pow(2);
    let one_minus_q2 = QScalar::one() - &q2;
    v.push((
        "a* da - q^2 da a* = (1-q^2) F",
        g(AStar)
            .mul(&d(A))
            .sub(&d(A).mul(&g(AStar)).scale(&q2))
            .sub(&f.scale(&one_minus_q2)),
    ));
    let one_minus_q2 = QScalar::one() - &q2;
    v.push((
        "q^2 a da* - da* a = (1-q^2) F",
        g(A)
            .mul(&d(AStar))
            .scale(&q2)
            .sub(&d(AStar).mul(&g(A)))
            .sub(&f.scale(&one_minus_q2)),
    ));
    v
}

pub fn suite_operators(seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    for (name, t) in basis_identities() {
        check(&mut out, name, is_zero_operator(&t), "");
    }

    // the sign of D as a central one-form: the delta version is scalar
    let q2 = QScalar::q_pow(2);
    let gl = |l: Letter| lift(&reduce_word(&[l]));
    let dl = |l: Letter| delta(&gl(l));
    use Letter::*;
    let omega = gl(AStar)
        .mul(&dl(A))
        .add(&gl(B).mul(&dl(BStar)).scale(&q2))
        .add(&gl(A).mul(&dl(AStar)).scale(&q2))
        .add(&gl(BStar).mul(&dl(B)).scale(&q2));
    let scalar = XElement::one().scale(&(QScalar::one() - &q2));
    check(
        &mut out,
        "a* da + q^2 b db* + q^2 a da* + q^2 b* db = (1-q^2) F",
        is_zero_operator(&omega.sub(&scalar)),
        "",
    );
    // non-closedness: da* da + q^2 da da* + q^2 db* db + q^2 db db* = -(1+q^2)
    let lhs = dl(AStar)
        .mul(&dl(A))
        .add(&dl(A).mul(&dl(AStar)).scale(&q2))
        .add(&dl(BStar).mul(&dl(B)).scale(&q2))
        .add(&dl(B).mul(&dl(BStar)).scale(&q2));
    let rhs = XElement::one().scale(&-(QScalar::one() + &q2));
    check(&mut out, "da* da + q^2 da da* + q^2 db* db + q^2 db db* = -(1+q^2)", is_zero_operator(&lhs.sub(&rhs)), "");

    for (name, t) in two_form_identities() {
        check(&mut out, name, is_zero_operator(&t), "");
    }

    let mut table_ok = true;
    let mut detail = String::new();
    for (name, t) in commutation_table() {
        if !hopf::in_r(&t) {
            table_ok = false;
            detail = format!("failed at {name}");
            break;
        }
    }
    check(&mut out, "first-order commutation table holds mod R", table_ok, detail);

    // delta is a derivation
    let mut der_ok = true;
    for _ in 0..100 {
        let t = xword(&mut rng, 4);
        let s = xword(&mut rng, 4);
        let lhs = delta(&t.mul(&s));
        let rhs = delta(&t).mul(&s).add(&t.mul(&delta(&s)));
        if lhs != rhs {
            der_ok = false;
            break;
        }
    }
    check(&mut out, "delta is a derivation on 100 random word pairs", der_ok, "");

    // r is multiplicative
    let mut mult_ok = true;
    for _ in 0..100 {
        let t = xword(&mut rng, 3);
        let s = xword(&mut rng, 3);
        let (direct, _) = hopf::r_map(&t.mul(&s));
        let (rt, _) = hopf::r_map(&t);
        let (rs, _) = hopf::r_map(&s);
        if direct != hopf::tensor_mul(&rt, &rs) {
            mult_ok = false;
            break;
        }
    }
    check(&mut out, "r is multiplicative on 100 random word pairs", mult_ok, "");

    // residues see only the degree-zero part
    let mut deg_ok = true;
    for _ in 0..50 {
        let t = xword(&mut rng, 4);
        let diff = t.sub(&crate::xalg::degree0(&t));
        for k in 1..=3u8 {
            if !hopf::ncint(&diff, k).unwrap().is_zero() {
                deg_ok = false;
            }
        }
    }
    check(&mut out, "integrals vanish off degree zero (50 random words)", deg_ok, "");

    // trace compatibility through right-normalization
    let mut trace_ok = true;
    for _ in 0..25 {
        let t = xword(&mut rng, 3);
        let s = xword(&mut rng, 3);
        let lhs = hopf::ncint_pdo(&hopf::normalize_pdo(&[
            PdoFactor::Op(t.clone()),
            PdoFactor::InvAbsD,
            PdoFactor::Op(s.clone()),
            PdoFactor::InvAbsD,
            PdoFactor::InvAbsD,
        ]))
        .unwrap();
        let rhs = hopf::ncint_pdo(&hopf::normalize_pdo(&[
            PdoFactor::Op(s),
            PdoFactor::InvAbsD,
            PdoFactor::InvAbsD,
            PdoFactor::Op(t),
            PdoFactor::InvAbsD,
        ]))
        .unwrap();
        if lhs != rhs {
            trace_ok = false;
            break;
        }
    }
    check(&mut out, "trace property through normalization (25 random pairs)", trace_ok, "");
    out
}

// ---------------------------------------------------------------------------
// Cocycle suite.
// ---------------------------------------------------------------------------

pub fn suite_cocycle(seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let p1 = cocycle::phi(1).unwrap();
    let p2 = cocycle::phi(2).unwrap();
    let p3 = cocycle::phi(3).unwrap();
    let tuples = |rng: &mut ChaCha8Rng, n: usize, count: usize| -> Vec<Vec<AlgebraElement>> {
        (0..count)
            .map(|_| (0..n).map(|_| random_element(rng, 2)).collect())
            .collect()
    };

    struct Identity<'a> {
        name: &'a str,
        lhs: Cochains,
        rhs: Cochains,
    }
    struct Cochains(Vec<(QScalar, cocycle::Cochain)>);
    impl Cochains {
        fn eval(&self, args: &[AlgebraElement]) -> QScalar {
            let mut acc = QScalar::zero();
            for (c, f) in &self.0 {
                acc += &(c * f.eval(args));
            }
            acc
        }
    }
    let one = || QScalar::one();
    let cob = |op, f: &cocycle::Cochain| cocycle::coboundary(op, f).unwrap();
    let identities = vec![
        Identity {
            name: "b phi1 = -phi2",
            lhs: Cochains(vec![(one(), cob(CoboundaryOp::B, &p1))]),
            rhs: Cochains(vec![(-one(), p2.clone())]),
        },
        Identity {
            name: "b phi2 = 0",
            lhs: Cochains(vec![(one(), cob(CoboundaryOp::B, &p2))]),
            rhs: Cochains(vec![]),
        },
        Identity {
            name: "b phi3 = 0",
            lhs: Cochains(vec![(one(), cob(CoboundaryOp::B, &p3))]),
            rhs: Cochains(vec![]),
        },
        Identity {
            name: "B phi1 = 0",
            lhs: Cochains(vec![(one(), cob(CoboundaryOp::BigB, &p1))]),
            rhs: Cochains(vec![]),
        },
        Identity {
            name: "B0 phi2 = -(1 - lambda) phi1",
            lhs: Cochains(vec![(one(), cob(CoboundaryOp::B0, &p2))]),
            rhs: Cochains(vec![
                (-one(), p1.clone()),
                (one(), cob(CoboundaryOp::Lambda, &p1)),
            ]),
        },
        Identity {
            name: "b B0 phi2 = 2 phi2 + B0 phi3",
            lhs: Cochains(vec![(one(), cob(CoboundaryOp::B, &cob(CoboundaryOp::B0, &p2)))]),
            rhs: Cochains(vec![
                (QScalar::from_int(2), p2.clone()),
                (one(), cob(CoboundaryOp::B0, &p3)),
            ]),
        },
        Identity {
            name: "B phi2 = 0",
            lhs: Cochains(vec![(one(), cob(CoboundaryOp::BigB, &p2))]),
            rhs: Cochains(vec![]),
        },
        Identity {
            name: "B0 phi3 = N b' phi1",
            lhs: Cochains(vec![(one(), cob(CoboundaryOp::B0, &p3))]),
            rhs: Cochains(vec![(
                one(),
                cob(CoboundaryOp::N, &cob(CoboundaryOp::BPrime, &p1)),
            )]),
        },
        Identity {
            name: "B phi3 = 3 B0 phi3",
            lhs: Cochains(vec![(one(), cob(CoboundaryOp::BigB, &p3))]),
            rhs: Cochains(vec![(QScalar::from_int(3), cob(CoboundaryOp::B0, &p3))]),
        },
    ];
    for id in identities {
        let arity = id.lhs.0[0].1.arity;
        let mut ok = true;
        let mut detail = String::new();
        for args in tuples(&mut rng, arity + 1, 50) {
            let l = id.lhs.eval(&args);
            let r = id.rhs.eval(&args);
            if l != r {
                ok = false;
                detail = format!("failed on {args:?}");
                break;
            }
        }
        check(&mut out, id.name, ok, detail);
    }

    // multilinearity spot check in each slot of phi2
    let mut lin_ok = true;
    for _ in 0..10 {
        let x = random_element(&mut rng, 2);
        let y = random_element(&mut rng, 2);
        let z = random_element(&mut rng, 2);
        let w = random_element(&mut rng, 2);
        let c = random_coeff(&mut rng);
        let combo = y.scale(&c).add(&w);
        let lhs = p2.eval(&[x.clone(), combo, z.clone()]);
        let rhs = &c * p2.eval(&[x.clone(), y, z.clone()]) + p2.eval(&[x, w, z]);
        if lhs != rhs {
            lin_ok = false;
            break;
        }
    }
    check(&mut out, "phi2 multilinear in the middle slot", lin_ok, "");

    // scale-invariant term: both presentations agree on random selfadjoint
    // one-forms A = B + B*
    let mut scale_ok = true;
    let mut detail = String::new();
    for i in 0..20 {
        let x = random_element(&mut rng, 2).scale(&random_coeff(&mut rng));
        let y = random_element(&mut rng, 2);
        let mut pres: Presentation = vec![(x.clone(), y.clone())];
        // (x delta(y))* = y* delta(x*) - delta(y* x*)
        pres.push((y.adjoint(), x.adjoint()));
        pres.push((
            AlgebraElement::one().scale(&-QScalar::one()),
            y.adjoint().mul(&x.adjoint()),
        ));
        let direct = cocycle::scale_invariant_term(&pres, ScalePath::Direct);
        let cochain = cocycle::scale_invariant_term(&pres, ScalePath::Cochain);
        if direct != cochain {
            scale_ok = false;
            detail = format!("form {i}: direct {direct} vs cochain {cochain}");
            break;
        }
        // cross-module: matches the no-J scale-invariant coefficient
        let mut a = OneForm::zero();
        for (px, py) in &pres {
            a.add_pair(px, py);
        }
        let c0 = action::coeffs_suq2_no_j(&a).unwrap().c0;
        if c0 != direct {
            scale_ok = false;
            let mut entries = String::new();
            for ((al, be), c) in a.terms() {
                entries.push_str(&format!(" ({c})[{al}]d[{be}]"));
            }
            detail = format!("form {i}: direct {direct} vs assembled {c0};{entries}");
            break;
        }
    }
    check(
        &mut out,
        "scale-invariant term: direct = cochain = assembled (20 selfadjoint forms)",
        scale_ok,
        detail,
    );

    let psi = cocycle::psi1_pairing(&cocycle::canonical_unitary());
    check(
        &mut out,
        "index pairing with the canonical unitary = -2",
        psi == QScalar::from_int(-2),
        format!("got {psi}"),
    );
    out
}

// ---------------------------------------------------------------------------
// Closed-form suite.
// ---------------------------------------------------------------------------

pub fn suite_closedform(seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let mut dual_ok = true;
    let mut detail = String::new();
    'forms: for i in 0..100 {
        let a = random_oneform(&mut rng);
        for (n, p) in [(1u8, 3u8), (1, 2), (2, 3), (2, 2), (3, 3)] {
            let closed = oneform::ncint_closed(&a, n, p).unwrap();
            let tau = oneform::ncint_tau(&a, n, p).unwrap();
            if closed != tau {
                dual_ok = false;
                detail = format!("form {i} at ({n},{p}): closed {closed} vs residues {tau}");
                break 'forms;
            }
        }
        if !oneform::ncint_tau_delta_a_a(&a, 3).unwrap().is_zero() {
            dual_ok = false;
            detail = format!("form {i}: delta(A) A |D|^-3 not zero");
            break;
        }
    }
    check(&mut out, "closed forms = residue pipeline on 100 random one-forms", dual_ok, detail);

    // empty balanced part forces a vanishing integral
    let mut vanish_ok = true;
    for _ in 0..50 {
        let a = random_oneform(&mut rng);
        let pairs: [(u8, u8, oneform::BalanceKind); 5] = [
            (1, 3, oneform::BalanceKind::ABalanced),
            (1, 2, oneform::BalanceKind::Balanced),
            (2, 3, oneform::BalanceKind::ABalanced),
            (2, 2, oneform::BalanceKind::Balanced),
            (3, 3, oneform::BalanceKind::ABalanced),
        ];
        for (n, p, kind) in pairs {
            if oneform::balanced_part(&a, n, kind).unwrap().is_empty()
                && !oneform::ncint_closed(&a, n, p).unwrap().is_zero()
            {
                vanish_ok = false;
            }
        }
    }
    check(&mut out, "unbalanced components have vanishing integrals", vanish_ok, "");

    // powers of balanced forms stay balanced
    let mut bal_ok = true;
    for _ in 0..50 {
        let a = random_oneform(&mut rng);
        if !oneform::is_balanced(&a) {
            continue;
        }
        for n in 1..=3u8 {
            let full: usize = oneform::balanced_part(&a, n, oneform::BalanceKind::Balanced)
                .unwrap()
                .len();
            let count = a.terms().count();
            if full != count.pow(n as u32) {
                bal_ok = false;
            }
        }
    }
    check(&mut out, "powers of balanced forms are balanced", bal_ok, "");

    // symmetrization for B = a delta(a*), A = B + B*
    let b = OneForm::from_pair(&AlgebraElement::gen_a(), &AlgebraElement::gen_a_star());
    let bx = oneform::to_x(&b, OneFormKind::Delta);
    let ax = bx.add(&bx.adjoint());
    let ga = hopf::r_graded(&ax);
    let gb = hopf::r_graded(&bx);
    let mut sym_ok = true;
    let mut detail = String::new();
    for (p, k) in [(1u8, 1u8), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)] {
        let lhs = match p {
            1 => hopf::ncint(&ax, k).unwrap(),
            2 => hopf::pair_residue(&ga, &ga, k).unwrap(),
            _ => hopf::triple_residue_d3(&ga, &ga, &ga),
        };
        let rhs_base = match p {
            1 => hopf::ncint(&bx, k).unwrap(),
            2 => hopf::pair_residue(&gb, &gb, k).unwrap(),
            _ => hopf::triple_residue_d3(&gb, &gb, &gb),
        };
        let rhs = QScalar::from_int(1 << p) * rhs_base;
        if lhs != rhs {
            sym_ok = false;
            detail = format!("(p,k) = ({p},{k})");
            break;
        }
    }
    check(&mut out, "symmetrization I A^p = 2^p I B^p for B = a d(a*)", sym_ok, detail);
    out
}

// ---------------------------------------------------------------------------
// Oracle suite.
// ---------------------------------------------------------------------------

pub fn suite_oracle(seed: u64, q0: f64, max_two_j: u32) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    // reference table cross-check
    let rows = action::reference_table().unwrap();
    let mut table_ok = true;
    let mut detail = String::new();
    for row in &rows {
        let x = oneform::to_x(&row.form, OneFormKind::Delta);
        let g = hopf::r_graded(&x);
        let _ = &g;
        let x2 = x.mul(&x);
        let x3 = x2.mul(&x);
        let cells: [(&XElement, u8, usize, f64); 6] = [
            (&x, 3, 0, 1e-8),
            (&x2, 3, 1, 1e-8),
            (&x3, 3, 2, 1e-8),
            (&x, 2, 3, 1e-8),
            (&x2, 2, 4, 1e-8),
            (&x, 1, 5, 1e-6),
        ];
        for (op, k, col, tol) in cells {
            let expr = vec![ExprFactor::Op(NumOperator::from_x(op, q0))];
            let (num, _) = oracle::ncint_numeric(&expr, k, q0, max_two_j).unwrap();
            let sym = row.values[col].eval_f64(q0);
            if (num.re - sym).abs() > tol || num.im.abs() > 1e-10 {
                table_ok = false;
                detail = format!(
                    "row {} col {col}: numeric {} vs symbolic {sym}",
                    row.label, num.re
                );
            }
        }
    }
    check(&mut out, "reference table integrals within tolerance", table_ok, detail);

    // J-reduction numerically on random one-form pairs
    let mut j_ok = true;
    let mut detail = String::new();
    for i in 0..10 {
        let a = random_oneform_small(&mut rng);
        let b = random_oneform_small(&mut rng);
        let ax = oneform::to_x(&a, OneFormKind::Delta);
        let bx = oneform::to_x(&b, OneFormKind::Delta);
        let cases: [(JKind, u8, XElement); 3] = [
            (JKind::I, 3, ax.clone()),
            (JKind::Ii, 2, ax.clone()),
            (JKind::Iii, 3, ax.mul(&ax)),
        ];
        for (kind, k, left) in cases {
            let expected = oneform::ncint_j(&a, &b, kind).unwrap().eval_f64(q0);
            let expr = vec![
                ExprFactor::Op(NumOperator::from_x(&left, q0)),
                ExprFactor::JConj(NumOperator::from_x(&bx, q0)),
            ];
            let (num, _) = oracle::ncint_numeric(&expr, k, q0, max_two_j).unwrap();
            if (num.re - expected).abs() > 1e-6 || num.im.abs() > 1e-8 {
                j_ok = false;
                detail = format!("pair {i} kind {kind:?}: numeric {} vs {expected}", num.re);
            }
        }
    }
    check(&mut out, "J-conjugated integrals match the reduction (10 pairs)", j_ok, detail);

    // diagonal operators
    let mut lm_ok = true;
    for n in 1..=5u32 {
        let expect = 2.0 / (1.0 - q0.powi(2 * n as i32));
        for expr in [vec![ExprFactor::LPow(n)], vec![ExprFactor::MPow(n)]] {
            let (v, _) = oracle::ncint_numeric(&expr, 2, q0, max_two_j).unwrap();
            if (v.re - expect).abs() > 1e-10 {
                lm_ok = false;
            }
        }
    }
    check(&mut out, "diagonal L/M power residues at |D|^-2", lm_ok, "");

    // eigenvalue profile of the central one-form
    let gl = |l: Letter| lift(&reduce_word(&[l]));
    let dd = |l: Letter| d_commutator(&gl(l));
    use Letter::*;
    let q2 = QScalar::q_pow(2);
    let omega = gl(AStar)
        .mul(&dd(A))
        .add(&gl(B).mul(&dd(BStar)).scale(&q2))
        .add(&gl(A).mul(&dd(AStar)).scale(&q2))
        .add(&gl(BStar).mul(&dd(B)).scale(&q2));
    let expr = vec![ExprFactor::Op(NumOperator::from_x(&omega, q0))];
    let mut xi_ok = true;
    let mut detail = String::new();
    for two_j in [40u32, 44, 50] {
        let up = oracle::BasisVector::new(two_j, two_j / 2, two_j / 2, oracle::Spin::Up).unwrap();
        let down =
            oracle::BasisVector::new(two_j, two_j / 3, two_j / 3, oracle::Spin::Down).unwrap();
        let xi_up = action::xi_q(2 * two_j as i64 + 3).unwrap().eval_f64(q0);
        let xi_down = action::xi_q(2 * two_j as i64 + 1).unwrap().eval_f64(q0);
        let got_up = oracle::diag_element(&expr, q0, &up);
        let got_down = oracle::diag_element(&expr, q0, &down);
        if (got_up.re - xi_up).abs() > 1e-6 || (got_down.re + xi_down).abs() > 1e-6 {
            xi_ok = false;
            detail = format!(
                "2j = {two_j}: up {} vs {xi_up}, down {} vs {}",
                got_up.re, got_down.re, -xi_down
            );
        }
    }
    check(&mut out, "diagonal profile approaches +-xi_q(d)", xi_ok, detail);
    out
}

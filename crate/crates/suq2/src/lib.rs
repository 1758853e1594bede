//! Exact noncommutative integrals and the spectral action on the standard
//! real spectral triple over the quantum group SU_q(2).
//!
//! The crate has two independent computation paths:
//!
//! * a symbolic engine working in the field of rational functions of q:
//!   the PBW coordinate algebra ([`pbw`]), the shift-operator algebra with
//!   its semantic normal form ([`xalg`]), the residue functionals behind
//!   the noncommutative integrals ([`hopf`]), balanced closed forms and the
//!   J-reduction for one-forms ([`oneform`]), the heat-coefficient assembly
//!   ([`action`]) and the cyclic cochains ([`cocycle`]);
//! * a floating-point trace oracle on the truncated spinor space
//!   ([`oracle`]) that recovers the same residues by fitting the top Dirac
//!   shells.
//!
//! Every closed-form value is exact in [`QScalar`]; the oracle and the
//! seeded [`suites`] exist to cross-check the two paths against each other.

pub mod qfield;
pub mod pbw;
pub mod xalg;
pub mod hopf;
pub mod oneform;
pub mod action;
pub mod cocycle;
pub mod oracle;
pub mod suites;

pub use qfield::{QFieldError, QScalar};

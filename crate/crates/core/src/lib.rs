//! Linear complexity and k-error linear complexity of multidimensional
//! periodic sequences over finite fields.
//!
//! The linear complexity of an `n`-dimensional periodic array `s` is the
//! number of standard monomials of its annihilator ideal
//! `I(s) = { P : Ps = 0 }` in `F_q[X_1, ..., X_n]`, computed here from the
//! reduced Gröbner basis of `I(s)` ([`annihilator`]). Around that core sit
//! k-error complexities ([`kerror`]), an exact census of monomial ideals of
//! small colength ([`census`]) and exhaustive or Monte Carlo checks of
//! probabilistic complexity bounds ([`probbounds`]).

pub mod annihilator;
pub mod census;
pub mod error;
pub mod gf;
pub mod kerror;
pub mod monomial;
pub mod probbounds;
pub mod rng;
pub mod seqarray;

pub use annihilator::{compute, linear_complexity, AnnihilatorResult};
pub use error::{Error, Result};
pub use gf::{FieldElement, FieldSpec};
pub use monomial::{ExponentVector, MonomialOrder, Staircase};
pub use seqarray::{PeriodicArray, PolynomialFq};

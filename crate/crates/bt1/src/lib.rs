//! Combinatorial classification of BT₁ group schemes and explicit
//! realization of any such scheme inside the p-torsion of a Jacobian.
//!
//! A BT₁ group scheme over an algebraically closed field of characteristic
//! p is a finite commutative group scheme killed by p whose Frobenius and
//! Verschiebung satisfy `Ker F = Im V` and `Ker V = Im F`. Up to
//! isomorphism these are classified by multisets of primitive cyclic words
//! over the alphabet `{f, v}` (the Kraft classification). The p-torsion of
//! Jacobians of Fermat curves and their quotients is governed by an
//! explicit permutation action on residues, which makes the whole theory
//! effectively computable.
//!
//! The pipeline, bottom to top:
//!
//! * [`words`] — words over `{f, v}`, rotation classes, primitive
//!   decomposition: the classification currency.
//! * [`permdata`] — finite sets `S = S_f ⊔ S_v` with a permutation π and
//!   the orbit → cyclic word map.
//! * [`semilinear`] — exact GF(p^m) linear algebra for σ-semilinear maps;
//!   the independent verifier for the BT₁ axioms.
//! * [`kraft`] — the explicit module M(w) / M(S) with its F/V matrices and
//!   numerical invariants (a-number, p-rank).
//! * [`fermat`] — p-torsion decompositions for the Fermat curve
//!   `X^d + Y^d = 1` and its quotient `y^d = x(1-x)`.
//! * [`digits`] — base-p digit engine for `d = p^ℓ - 1`; produces elements
//!   and pairs whose orbits realize a prescribed word.
//! * [`duality`] — complement duality, self-duality, polarized
//!   factorization.
//! * [`realize`] — target multiset → explicit curve + machine-checkable
//!   witnesses + verification.

pub mod words;
pub mod permdata;
pub mod semilinear;
pub mod kraft;
pub mod fermat;
pub mod digits;
pub mod duality;
pub mod realize;

pub(crate) mod arith;

pub use words::{BT1Multiset, CyclicWord, Letter, Word};

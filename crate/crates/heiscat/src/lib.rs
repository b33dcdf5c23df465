//! Exact-arithmetic engine for the diagrammatic Heisenberg category of a
//! finite-dimensional graded Frobenius superalgebra `B` over the rationals.
//!
//! The crate is organized bottom-up:
//!
//! - [`coeff`]: rationals, Laurent polynomials in `q` and `π` (π² = 1), and
//!   graded super vector space dimensions.
//! - [`frobenius`]: validation and enrichment of a Frobenius superalgebra
//!   (dual basis, Nakayama automorphism, degree of the trace).
//! - [`wreath`]: arithmetic in the wreath product algebras `A_n = B^⊗n ⋊ S_n`.
//! - [`bimodule`]: the induction/restriction bimodules between the `A_n` and
//!   their tensor products, realized with canonical free bases.
//! - [`diagram`]: the string-diagram IR, the evaluation functor onto bimodule
//!   maps, derived morphisms (curls, bubbles, the α/β isomorphism data), and
//!   the relation-checking harness.
//! - [`heisenberg`]: the associated Heisenberg algebra, its presentations,
//!   normal ordering, and the Fock representation.
//! - [`dahg`]: the generalized degenerate affine Hecke algebra `D_m` and its
//!   filtered embedding into the wreath tower.
//! - [`cli`]: verification suites, machine-readable reports, and the parsers
//!   backing the `heiscat` binary.
//!
//! Everything is exact: no floating point appears anywhere in the crate.

pub mod bimodule;
pub mod cli;
pub mod coeff;
pub mod dahg;
pub mod derived;
pub mod diagram;
pub mod frobenius;
pub mod heisenberg;
pub mod isos;
pub mod wreath;

//! Exact symbolic kernel for determinants and permanents of matrices whose
//! entries live in a ring with prescribed commutation relations.
//!
//! The crate is organized bottom-up:
//!
//! * [`coeff`] - commutative coefficient polynomials over the integers.
//! * [`algebra`] - noncommuting generators, words, normal ordering.
//! * [`rings`] - the ring abstraction plus the concrete backends
//!   (symbolic, 2x2 matrices over GF(2), plain integers).
//! * [`matrix`] - matrices over a ring, the four determinant/permanent
//!   variants, minors, and commutation-pattern predicates.
//! * [`extensions`] - auxiliary polynomial and Grassmann extensions used to
//!   characterize commutation patterns intrinsically.
//! * [`identities`] - verifiers for the product identities and the
//!   counterexamples that delimit them.
//! * [`weyl_action`] - differential-operator action on integer polynomials.
//! * [`explorer`] - exhaustive search for diagonal corrections that make the
//!   product identity close.
//!
//! The `book/` directory at the workspace root walks through the same layers
//! with runnable snippets; those snippets are compiled as doc-tests via the
//! [`guide`] module, so the book cannot drift from the code.

pub mod algebra;
pub mod coeff;
pub mod explorer;
pub mod extensions;
pub mod guide;
pub mod identities;
pub mod matrix;
pub mod rings;
pub mod weyl_action;

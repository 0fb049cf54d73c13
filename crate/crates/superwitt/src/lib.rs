//! Exact computation in Lie superalgebras of vector fields on a supertorus
//! and their weight modules.
//!
//! The building blocks, bottom up:
//!
//! * [`scalar`]: arbitrary-precision rational scalars and multi-index helpers.
//! * [`superalg`]: the supercommutative algebra of Laurent polynomials in
//!   even variables times a Grassmann algebra in odd ones.
//! * [`vfields`]: superderivations of that algebra spanned by `t^r x^p d_i`
//!   and `t^r x^p P_a`, with the supercommutator bracket and lattice twists.
//! * [`linalg`]: exact dense linear algebra over the rationals.
//! * [`glmn`]: the finite-dimensional general linear Lie superalgebra, its
//!   representations, and submodule searches.
//! * [`tensormod`]: weight modules built from a finite-dimensional fiber and
//!   a lattice of weights, with the vector-field action.
//! * [`jet`]: the formal-coefficient regrading of the vector-field algebra,
//!   its polynomial structure constants, normal forms, fiber actions, and
//!   the reconstruction of module actions from finite jet data.
//! * [`cover`]: the covering module over pairs (vector field, module vector)
//!   with its projection and annihilation operators.
//! * [`verma`]: triangular decompositions in one extra even variable,
//!   induced modules, and exact radical computations in bounded degree.
//!
//! Everything is computed over exact rationals; tests compare for equality,
//! never within a tolerance.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

mod error;

pub mod cover;
pub mod glmn;
pub mod jet;
pub mod linalg;
pub mod scalar;
pub mod superalg;
pub mod tensormod;
pub mod verma;
pub mod vfields;

pub use error::{Error, Result};

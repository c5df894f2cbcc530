//! Congruences of Eisenstein series with character.
//!
//! The crate computes maximal congruences of Eisenstein series of level
//! Gamma_1(N) and character chi from their exact q-expansions, and compares
//! them with the triviality ideal of the character (a, b) -> chi_p(a) chi'(b) a^k
//! on Z_p^x x (Z/N')^x and with the stabilized fixed points that compute its
//! first continuous cohomology.

#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod bernoulli;
pub mod char;
pub mod cohomology;
pub mod congruence;
pub mod cyclo;
pub mod eisenstein;
pub mod error;
pub mod formal;
pub mod linalg;
pub mod reptheory;
pub mod verify;

pub use char::{DirichletCharacter, UnitGroupStructure};
pub use cyclo::{CyclotomicNumber, IdealHNF, LocalRing};
pub use error::{Error, Result};

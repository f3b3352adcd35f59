//! Computational tools for tuples of matrices viewed as points of the
//! noncommutative row ball.
//!
//! * [`freepoly`]: free polynomials, their text syntax and evaluation.
//! * [`mattuple`]: matrix tuples, row norms and the completely positive map `Psi_X`.
//! * [`spectral`]: joint spectral radius, purity and similarities to row contractions.
//! * [`structure`]: irreducibility, invariant subspaces and Jordan-Hoelder components.
//! * [`fock`]: truncated Fock space, multiplier norms and pseudo-hyperbolic lower bounds.
//! * [`variety`]: varieties given by polynomial relations, including `z1 z2 = q z2 z1`.
//! * [`cli`]: the command-line surface and the reproduction harness.

pub mod cli;
pub mod config;
pub mod error;
pub mod fock;
pub mod freepoly;
pub mod linalg;
pub mod mattuple;
pub mod rng;
pub mod spectral;
pub mod structure;
pub mod variety;
pub mod witnesses;

pub use config::Config;
pub use error::{Error, Result};
pub use freepoly::{parse, FreePolynomial, Word};
pub use mattuple::{CPMatrix, MatrixTuple};

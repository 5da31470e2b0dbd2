//! Coherence-based quantum uncertainty relations for qubit states.
//!
//! The crate is layered bottom-up:
//!
//! * [`numlin`]: small dense complex linear algebra, Hermitian eigensolvers,
//!   entropies and Bloch-sphere geometry.
//! * [`coherence`]: relative entropy, l1 norm and (qubit) formation
//!   coherence measured on an arbitrary orthonormal basis.
//! * [`bounds`]: analytic lower bounds on the sum of coherences in two
//!   bases, as scalar functions of the basis overlap `c` and the purity `P`.
//! * [`tightsolver`]: the exact lower bound for fixed `(c, P)`, obtained by
//!   reducing the problem to a one-dimensional search over a Bloch angle.
//! * [`harness`]: seeded random sampling and Monte Carlo verification of
//!   every inequality and identity the bounds rely on.
//! * [`cli`]: the `quncert` command-line front end.

pub mod bounds;
pub mod cli;
pub mod coherence;
mod error;
pub mod harness;
pub mod numlin;
pub mod tightsolver;

pub use error::{Error, Result};

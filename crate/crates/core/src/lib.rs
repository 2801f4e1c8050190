//! Numerical instantiation of a large sieve inequality for Euler products.
//!
//! The crate is organised bottom-up:
//!
//! * [`number_core`]: prime tables, factorisation, primitive roots and
//!   compensated summation.
//! * [`characters`]: the group of Dirichlet characters modulo `D`.
//! * [`euler_sums`]: truncated prime sums `Σ a_p χ(p) p^{-s}` and their
//!   maximisation over `y ≤ x`, `σ ≥ 1`, `|t| ≤ D^B`.
//! * [`sieve_inequality`]: the δ-matrix, its Gram matrix, duality and the
//!   end-to-end verification of the inequality and its real-part variant.
//! * [`cli`]: the `large-sieve` command line front end.

pub mod characters;
pub mod cli;
pub mod error;
pub mod euler_sums;
pub mod number_core;
pub mod sieve_inequality;

pub use error::{Error, Result};
pub use num_complex::Complex64;

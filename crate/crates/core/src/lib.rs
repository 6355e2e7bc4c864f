//! Exact finite-dimensional models of modular theory, fermionic twists and
//! covering-group arithmetic for the spin-statistics and PCT identities.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
// `!(x <= tol)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod car;
pub mod error;
pub mod lorentz;
pub mod numerics;
pub mod random;
pub mod rep_models;
pub mod standard_subspace;
pub mod tomita;

pub use error::{Error, Result};

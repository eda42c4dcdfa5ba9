//! Exact obstruction calculus for smooth projective surfaces carrying many
//! disjoint nodal (`-2`) curves.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! - [`lattice`]: Gram matrices, determinants, signatures, Smith forms and
//!   the square-discriminant test for sublattices of unimodular lattices.
//! - [`f2`]: the mod-2 reduction `M/2M → L/2L` and the doubly-even kernel
//!   search that rules out `K² = 3, 5` for surfaces with `h¹¹ - 2` nodes.
//! - [`singularity`]: Hirzebruch-Jung strings, discrepancies, orbifold
//!   Euler numbers and the orbifold Bogomolov-Miyaoka-Yau checks.
//! - [`invariants`]: Noether bookkeeping and the contraction of nodal curves.
//! - [`classifier`]: the decision procedures for `μ = h¹¹ - 1` and
//!   `μ = h¹¹ - 2`, producing verdicts with a step-by-step trace.
//!
//! Rationals are [`num_rational::BigRational`], integers [`num_bigint::BigInt`]
//! wherever a value can grow; nothing is ever rounded.
#![no_std]
#![deny(unsafe_code)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classifier;
pub mod error;
pub mod exact;
pub mod f2;
pub mod invariants;
pub mod lattice;
pub mod singularity;
pub mod trace;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;

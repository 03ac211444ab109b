//! Flagged extensions of quantum channels: degradability certificates and
//! capacity upper bounds.
//!
//! The crate builds finite-dimensional channels from Kraus operators, attaches
//! orthogonal or non-orthogonal flag states to convex mixtures of channels,
//! verifies a sufficient algebraic condition under which the flagged extension
//! is degradable, and turns that into single-letter upper bounds on quantum
//! and private capacities for concrete families (depolarizing, BB84, and
//! generalized amplitude damping).

pub mod channel;
pub mod cli;
pub mod error;
pub mod flagged;
pub mod operators;
pub mod optimize;
pub mod pauli;
pub mod pauli_bounds;
pub mod zoo;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};

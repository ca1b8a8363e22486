//! Exact decision procedures for local potential equivalence of Frobenius data, together
//! with constructions of torus-by-cyclic groups, character-lattice decompositions and
//! power-map experiments on disconnected groups.

pub mod algebra;
pub mod density;
pub mod error;
pub mod frobenius;
pub mod potequiv;
pub mod powermap;
pub mod torus;

mod par;

pub use error::{Error, Result};

//! Local-unitary simulation of bipartite Hamiltonians.
//!
//! The crate decides when one two-qubit interaction Hamiltonian can simulate
//! another using interspersed local unitaries, computes the optimal time
//! ratio, and builds explicit protocols that realize it. General-purpose
//! constructions (decoupling, baseline any-to-any simulation, inversion)
//! are provided for small bipartite systems.

pub mod error;
pub mod numerics;
pub mod pauli;
pub mod normal_form;
pub mod polyhedron;
pub mod protocol;
pub mod generic_sim;
pub mod strategy;
pub mod wire;

pub use error::{Error, Result};

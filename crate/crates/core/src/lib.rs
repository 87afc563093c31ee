//! Complete four-qubit GHZ bases built from Weyl operators, GHZ-optimized
//! k-separability criteria, phase diagrams of noisy GHZ mixtures, and a
//! desk-scale simulation of photonic preparation, counting and tomography.

pub mod error;
pub mod ghz;
pub mod mixture;
pub mod pauli;
pub mod qmath;
pub mod render;
pub mod sim;
pub mod witness;

pub use error::{Error, Result};
pub use ghz::GhzLabel;

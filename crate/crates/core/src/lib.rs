//! Stroboscopic cat-state simulator for a qubit coupled to a harmonic
//! oscillator.
//!
//! The crate builds the rotating-frame spin-boson Hamiltonian on a truncated
//! Fock space, applies ideal or finite flip sequences that amplify the
//! qubit-conditioned displacement, and provides the detection, coherence and
//! damping observables used to characterize the resulting cat states.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod evolve;
pub mod fock;
pub mod linalg;
pub mod protocols;
pub mod spin_boson;

pub use error::{Error, Result};

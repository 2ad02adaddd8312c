//! Simulation and validation of loop-based time-bin boson sampling.
//!
//! The pipeline runs from a pulse schedule for the fiber loop
//! ([`compiler`]) to the equivalent multimode unitary, exact output
//! distributions built from matrix permanents ([`permanent`],
//! [`sampling`]), seeded event draws, the three certification protocols
//! ([`validation`]) and the coincidence-rate budget ([`rate`]).

pub mod compiler;
pub mod error;
pub mod linalg;
pub mod permanent;
pub mod rate;
pub mod sampling;
pub mod validation;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ModeConfiguration, UnitaryMatrix};
pub use num_complex::Complex64;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// The generator behind every seeded operation in the crate.
pub type SeededRng = ChaCha20Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

//! Simulation and analysis of arrays of nonlinearly coupled harmonic
//! oscillators.
//!
//! The array can be integrated in three representations: the original
//! coordinates, a frame rotating with the oscillators, and the time-averaged
//! system obtained from the rotating frame. [`harness`] ties them together
//! into reproducible scenarios and frequency sweeps.

pub mod analysis;
pub mod averaging;
pub mod coupling;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod quadrature;
pub mod topology;

pub use coupling::{ClassKMinorant, CouplingFunction, Interconnection};
pub use error::{Error, Result};

//! Nested-lattice compute-and-forward with perfectly secure modulation.
//!
//! Two users modulate group-valued messages onto cosets of a nested lattice
//! pair using randomized pmfs built from compactly supported characteristic
//! functions; a relay decodes the group sum from the noisy real sum while the
//! individual messages stay statistically independent of everything it sees.
//! This crate provides the characteristic-function kernels, lattice algebra
//! (Construction A, nesting, quantization), the secure modulators with their
//! secrecy certificates, and a Gaussian-MAC Monte Carlo simulator.

pub mod error;
pub mod fourier;
pub mod lattice;
pub mod modulation;
pub mod sim;

pub use error::{Error, Result};

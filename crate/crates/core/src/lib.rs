//! Correlation-based entanglement measures for two-fermion systems.
//!
//! The crate builds two-site Hubbard ground states in a Fock basis, maps them
//! to labeled-particle wavefunctions and back, and measures how strongly pairs
//! of observables are correlated relative to the largest correlation they can
//! reach in any state.

pub mod cli;
pub mod entangle;
pub mod error;
pub mod firstq;
pub mod fock;
pub mod hubbard;
pub mod linalg;
pub mod slater;
pub mod spindensity;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

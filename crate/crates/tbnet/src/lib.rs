//! Tight-binding networks coupled to auxiliary non-Hermitian clusters.
//!
//! The crate reduces a composite system (main network S plus auxiliary
//! cluster A) to effective, generally energy-dependent non-Hermitian
//! Hamiltonians, inverse-designs auxiliary parameters that realize target
//! complex hoppings, and analyzes the resulting lattices: plane-wave
//! scattering and bound states on 1D leads, finite-lattice spectra with
//! PT-breaking diagnostics and bound states in the continuum, and
//! time-domain occupation dynamics.

pub mod dynamics;
pub mod error;
pub mod network;
pub mod numerics;
pub mod reduction;
pub mod scattering;
pub mod spectra;

pub use error::{Error, Result};
pub use numerics::{C64, CMatrix, CVector};

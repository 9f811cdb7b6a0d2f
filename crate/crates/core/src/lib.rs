//! Desk-scale simulation of single-atom cavity-QED network nodes and the
//! photonic protocols connecting them.
//!
//! The crate is organized bottom-up:
//!
//! - [`hilbert`]: dense complex linear algebra over small labeled composite
//!   Hilbert spaces (operators, state vectors, density matrices).
//! - [`params`]: closed-form scalar relations between physical cavity
//!   parameters and the coupling/decay rates used everywhere else.
//! - [`models`]: Jaynes-Cummings and three-level Λ Hamiltonians, collapse
//!   operators, and their closed-form eigenstructure.
//! - [`dynamics`]: Lindblad time evolution, steady states, reflection and
//!   transmission spectra, and correlation functions.
//! - [`photonics`]: flying-qubit algebra — polarization states, beam
//!   splitters, two-photon interference, optical Bell-state measurement.
//! - [`protocols`]: node-level network primitives (state transfer,
//!   entanglement, memory, teleportation, gates) with error models.
//! - [`network`]: channel loss and repeater-chain rate estimation.
//! - [`estimate`]: tomography, fidelity/parity analysis, and Bayesian
//!   two-atom state estimation.
//!
//! All rates are angular frequencies in rad/s; times are in seconds.

pub mod dynamics;
pub mod error;
pub mod estimate;
pub mod hilbert;
pub mod models;
pub mod network;
pub mod params;
pub mod photonics;
pub mod protocols;
pub mod rng;
pub mod tol;

pub use error::{Error, Result};
pub use hilbert::{DensityMatrix, HilbertSpace, Operator, StateVector};
pub use params::RateSet;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix type used throughout.
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Dense complex vector type used throughout.
pub type CVector = nalgebra::DVector<C64>;

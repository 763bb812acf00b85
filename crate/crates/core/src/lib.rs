//! Simulation toolkit for linear-optical generation of hybrid entanglement
//! between approximate GKP logical states and photon-number states.
//!
//! Two independent engines are provided:
//!
//! * [`coherent`] represents states exactly as finite superpositions of
//!   multimode coherent states. Beam splitters, displacements, homodyne and
//!   photon-number projections all map such superpositions onto
//!   superpositions, and inner products are closed-form Gaussians.
//! * [`fock`] is a dense, truncated Fock-space engine. It serves as an oracle
//!   for the coherent engine and as the backend for Wigner functions and
//!   photon-number parity spectra.
//!
//! [`protocols`] builds the generation circuits (hybrid qubit, breeding,
//! hybrid qutrit, equal-amplitude variant) on top of a small circuit
//! description that runs on either engine, and [`analysis`] evaluates the
//! fidelity, success-probability and parity figures of merit. The [`cli`]
//! module backs the `hybrid-gkp` binary.
//!
//! Conventions: ħ = 1, x̂ = (â + â†)/√2, p̂ = (â − â†)/(i√2). Mode indices are
//! zero-based.

pub mod analysis;
pub mod cli;
pub mod coherent;
pub mod error;
pub mod fock;
pub mod optimize;
pub mod protocols;
pub mod quadrature;

pub use coherent::{CoherentTerm, ConditionalOutput, Parity, SuperposedState};
pub use error::{Error, Result};
pub use fock::{FockState, WignerGrid};

pub use num_complex::Complex64 as C64;

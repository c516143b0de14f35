//! Simulation library for the disentanglement dynamics of Schrodinger cat
//! and Werner states of a four-level trapped ion mapped onto a Dirac-like
//! two-qubit Hamiltonian, under a collective dephasing channel.
//!
//! The crate is organized bottom-up:
//!
//! - [`qmat`]: fixed-size complex matrix kernel (Pauli/Kronecker algebra,
//!   Hermitian eigendecomposition, partial transpose, trace norm);
//! - [`dirac`]: Dirac-like Hamiltonians, their closed-form spectra and
//!   eigenprojectors, and the trapped-ion parameter correspondence;
//! - [`channel`]: collective-dephasing Kraus channel and the noiseless /
//!   noisy time evolution it composes with;
//! - [`correlations`]: Fano decomposition, negativity, geometric discord,
//!   discord derivatives and cusp detection;
//! - [`cli`]: scenario presets, figure-data regeneration and CSV emission.
//!
//! All quantities are in natural units (hbar = c = 1); user-facing values
//! are the dimensionless ratios m/p, E/p, Gamma/p and the time axis p*t.

pub mod channel;
pub mod cli;
pub mod correlations;
pub mod dirac;
pub mod error;
pub mod qmat;

pub use error::{Error, Result};

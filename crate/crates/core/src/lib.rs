//! Dense mixed-state quantum simulation for bounding what highly mixed
//! resources can compute.
//!
//! The crate covers multi-qubit density operators and their spectra,
//! min-entropy and von Neumann entropy, Gibbs states of Pauli Hamiltonians,
//! the success probability of measurement-based computation with a general
//! POVM, the one-clean-qubit model with `k` readout qubits, uniform random
//! search against a verifier, and the mutual information of a
//! classical-quantum channel.
//!
//! It builds without `std` (with `alloc`); disable default features and the
//! floating-point functions fall back to `libm`.
#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

mod config;
mod error;

pub mod dqc1k;
pub mod entropy;
pub mod gate;
pub mod infotheory;
pub mod mbqc;
pub mod random;
pub mod search;
pub mod state;
pub mod thermal;

pub use config::{Config, DEFAULT_QUBIT_CAP};
pub use error::{Error, Result};
pub use state::{
    apply_unitary, maximally_mixed, partial_trace, spectral_decompose, tensor_product, CMatrix, DensityOperator,
    HermitianOperator, QubitOperator, SpectralDecomposition, UnitaryOperator, C64,
};

//! Numerical library for entropy, number, and energy flow in a driven
//! degenerate parametric amplifier coupled to a vacuum Markovian bath.
//!
//! The paramp mode itself evolves through a closed-form Gaussian covariance
//! flow ([`paramp`]); the output line is discretized into Gabor atoms by a
//! windowed cosine transform ([`output`]); entropies come from symplectic
//! diagonalization ([`gaussian`]); fluxes and their limits live in [`flux`];
//! [`fock`] holds a small exact Fock-space model of the entanglement
//! transfer mechanism.
//!
//! All operations are pure functions over immutable values and safe to run
//! in parallel over independent inputs.

pub mod error;
pub mod flux;
pub mod fock;
pub mod gaussian;
pub mod output;
pub mod paramp;

pub use error::{Error, Result};
pub use flux::{FluxReport, KmaxSchedule, OutputEntropy, ScanRow};
pub use gaussian::{MultimodeCovariance, QuadCovariance, SymplecticSpectrum};
pub use output::{CoherenceKind, CoherenceMatrix, ModeGrid, Quadrature};
pub use paramp::{DerivedParams, NoiseMatrices, ParampParams};

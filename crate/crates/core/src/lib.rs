//! Single-particle Mach-Zehnder interferometry with translational-internal
//! entanglement.
//!
//! A particle enters in `√(1−p)|k₁,1⟩ + √p|k₂,2⟩` with `k₂ = N k₁`. The crate
//! propagates it through the interferometer, evaluates detection and
//! inference-error probabilities in closed form and by state-vector
//! projection, computes concurrence, visibility, phase sensitivity and the
//! `𝒮`–`𝒟` complementarity ellipses, models finite wavepacket overlap, and
//! verifies the error-rate predictions by seeded Monte Carlo sampling.

pub mod cli;
pub mod complementarity;
pub mod detection;
mod error;
pub mod exec;
pub mod figures;
pub mod inference;
pub mod montecarlo;
pub mod mzi;
pub mod quadrature;
pub mod state;
pub mod wavepacket;

pub use error::{Error, Result};
pub use exec::Execution;
pub use mzi::{Detector, InterferometerConfig};
pub use state::{FourState, InternalBasis, Path, Spin, TieParams};

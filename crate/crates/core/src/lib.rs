//! Entanglement detection for discrete, continuous, and hybrid systems.
//!
//! The core quantity is the witness `W = F_Q - 4 Σᵢ Var(cᵢ·Âᵢ)`: the quantum
//! Fisher information of a collective generator compared against the summed
//! variances of the local operators that build it. Separable states keep `W ≤ 0`
//! for every coefficient vector, so any positive value certifies entanglement.
//! The coefficient optimization reduces to the eigenvalue problem for
//! `Q - 4Γ` between the Fisher matrix and the covariance matrix of the
//! product of marginals.

pub mod bounds;
pub mod error;
pub mod operators;
pub mod states;
pub mod tensor;
pub mod witness;

pub use error::{Error, Result};
pub use operators::{CoefficientVector, LocalOperatorSet};
pub use tensor::{CMatrix, CVector, DensityMatrix, HilbertStructure, PureState, SpectralDecomposition};
pub use witness::{Verdict, WitnessReport};

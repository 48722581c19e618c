//! Simulation of two atoms held in distant, fiber-linked cavities.
//!
//! A driven cavity pair is reduced to its mean steady fields, the field
//! fluctuations are adiabatically eliminated, and the result is an effective
//! Ising coupling `2J σ₁ᶻσ₂ᶻ` between the atoms. With a local transverse field
//! added, the Ising dynamics entangles the atoms starting from `|gg⟩`.
//!
//! Modules, bottom up:
//! - [`numerics`]: fixed-size complex linear algebra (2×2 solves, 4×4 Hermitian
//!   eigendecomposition, propagators).
//! - [`network`]: steady fields, fluctuation elimination, and the coupling `J`.
//! - [`spin`]: the two-qubit Hamiltonian, its closed-form eigensystem and evolution.
//! - [`entanglement`]: concurrence, entanglement of formation, `E(τ)` traces, `τ*`.
//! - [`feasibility`]: order-of-magnitude experimental estimates and fiber loss.
//! - [`audit`]: seeded cross-check suites comparing closed forms against oracles.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// explicit indices read better in the 4x4 matrix kernels
#![allow(clippy::needless_range_loop)]

pub mod audit;
mod dd;
pub mod entanglement;
pub mod error;
pub mod feasibility;
pub mod network;
pub mod numerics;
pub mod spin;

pub use error::{Error, Result};
pub use numerics::{CMatrix2, CMatrix4, HermEig4, Vec4, C64};

pub use entanglement::{DensityMatrix, EntanglementTrace, TauStarResult};
pub use feasibility::{FiberLossSpec, LossConvention, RamanParams};
pub use network::{CouplingResult, FluctuationCoefficients, NetworkParams, SteadyFields, Units};
pub use spin::{AnalyticEigensystem, SpinParams, TwoQubitPureState};

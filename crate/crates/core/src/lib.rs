//! Wave-domain MIMO channel diagonalization with stacked intelligent
//! metasurfaces (SIMs).
//!
//! Two transceiver architectures are modeled:
//!
//! - a 2-layer SIM whose meta-atoms are wired by meta-fibers into decoupled
//!   sub-areas (one per port), and
//! - a conventional multi-layer SIM whose layers couple through free-space
//!   Rayleigh-Sommerfeld diffraction.
//!
//! Both are tuned by the same alternating-optimization engine, which fits the
//! end-to-end channel `Q G P` to a scaled identity `alpha * I_S` by cycling
//! closed-form single-phase updates over every meta-atom and a least-squares
//! update of `alpha`.
//!
//! Module map:
//!
//! - [`channel`]: deterministic system matrices and the Rayleigh channel sampler
//! - [`optimizer`]: problem types, cascades, closed-form updates, the AO solver
//! - [`metrics`]: NMSE, capacity, capacity bound, QPSK BER, layer attenuation
//! - [`baselines`]: SVD-ideal transceivers and the zero-forcing precoder
//! - [`harness`]: declarative experiments, seeding, and result persistence

pub mod baselines;
pub mod channel;
mod error;
pub mod harness;
pub mod metrics;
pub mod optimizer;
pub mod seed;
pub mod units;

pub use error::{Error, Result};

/// Dense complex matrix used for every channel, coefficient and cascade matrix.
pub type ComplexMatrix = nalgebra::DMatrix<num_complex::Complex64>;

pub use num_complex::Complex64;

pub use channel::{LinkBudget, MultiLayerTopology, PathGainConvention, TwoLayerTopology};
pub use metrics::{CapacityFormula, CapacityInputs};
pub use optimizer::{FitProblem, FitResult, PhaseState, SolverConfig};

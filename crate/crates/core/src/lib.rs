//! Statevector engine for hybrid real/imaginary-time adaptive variational
//! dynamics (HAVQDS) on Sherrington-Kirkpatrick spin glasses, together with
//! Trotterized adiabatic and counterdiabatic baselines and the exact oracles
//! used to judge them.
//!
//! The Pauli kernels ([`pauli`], [`state`], [`operator`]) are generic over
//! the [`Real`] scalar; everything above them works in `f64`.

pub mod driver;
pub mod error;
pub mod models;
pub mod operator;
pub mod oracle;
pub mod pauli;
pub mod scalar;
pub mod state;
pub mod trajectory;
pub mod trotter;
pub mod variational;

pub use driver::{run_avqds_only, run_havqds, HavqdsRun, RunConfig};
pub use error::{Error, Result};
pub use models::{build_h_ad, build_h_cd1, build_pool, cd_alpha1, sample_sk, OperatorPool, Schedule, SkInstance};
pub use operator::{expectation, variance, CompiledSum, WeightedPauliSum};
pub use pauli::{cnot_cost, Pauli, PauliString};
pub use scalar::Real;
pub use state::{apply_pauli, apply_rotation, StateVector};
pub use trajectory::TrajectoryRecord;
pub use variational::{Ansatz, ExpansionConfig};
pub use trotter::{dilemma_sweep, run_trotter, GateTally, Protocol, TrotterConfig};

pub type StateVectorF64 = StateVector<f64>;
pub type StateVectorF32 = StateVector<f32>;
pub type PauliSumF64 = WeightedPauliSum<f64>;
pub type PauliSumF32 = WeightedPauliSum<f32>;
pub type Complex64 = num_complex::Complex<f64>;

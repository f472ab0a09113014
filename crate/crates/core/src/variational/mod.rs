//! Adaptive variational dynamics: McLachlan geometry of a Pauli-rotation
//! ansatz, regularized solves, greedy ansatz growth and the real- and
//! imaginary-time updates built from them.

mod ansatz;
mod expand;
mod geometry;
mod solve;
mod step;

pub use ansatz::Ansatz;
pub use expand::{adaptive_expand, ExpansionConfig, ExpansionOutcome};
pub use geometry::{derivative_states, geometry, imagtime_geometry, mclachlan_distance, realtime_geometry, GeometrySnapshot};
pub use solve::{solve_regularized, RegularizedSolution};
pub use step::{imaginary_time_step, real_time_step, ImaginaryStep};

pub(crate) use step::{imaginary_time_step_compiled, real_time_step_compiled};

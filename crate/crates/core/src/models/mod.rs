//! SK problem instances, the annealing schedule, AD/CD Hamiltonians and the
//! adaptive operator pool.

mod hamiltonians;
mod pool;
mod schedule;
mod sk;

pub use hamiltonians::{build_h_ad, build_h_cd1, cd_alpha1, cd_coefficient, driver_hamiltonian, problem_hamiltonian, CdCoefficient};
pub use pool::{build_pool, OperatorPool};
pub use schedule::{schedule_s, schedule_sdot, Schedule};
pub use sk::{sample_sk, standard_normal, SkInstance};

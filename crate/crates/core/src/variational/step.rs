use crate::error::{Error, Result};
use crate::models::OperatorPool;
use crate::operator::{CompiledSum, WeightedPauliSum};

use super::ansatz::Ansatz;
use super::expand::{expand_in_place, ExpansionConfig, ExpansionOutcome};
use super::geometry::TangentSpace;
use super::solve::solve_regularized;

fn check_step(step: f64, name: &str) -> Result<()> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::invalid(format!("{name} must be positive, got {step}")));
    }
    Ok(())
}

pub(crate) fn real_time_step_compiled(ansatz: &mut Ansatz, hamiltonian: &CompiledSum, pool: &OperatorPool, config: &ExpansionConfig, dt: f64) -> Result<ExpansionOutcome> {
    check_step(dt, "time step")?;
    let mut space = TangentSpace::new(ansatz, hamiltonian)?;
    let outcome = expand_in_place(ansatz, &mut space, pool, config)?;
    ansatz.advance(outcome.theta_dot.as_slice(), dt)?;
    Ok(outcome)
}

/// Adaptive expansion followed by the explicit Euler update
/// `theta += dt (A + lambda I)^{-1} C`.
pub fn real_time_step(ansatz: &mut Ansatz, hamiltonian: &WeightedPauliSum, pool: &OperatorPool, config: &ExpansionConfig, dt: f64) -> Result<ExpansionOutcome> {
    real_time_step_compiled(ansatz, &hamiltonian.compile(), pool, config, dt)
}

/// Energy and variance at the angles before an imaginary-time update.
#[derive(Clone, Copy, Debug)]
pub struct ImaginaryStep {
    pub energy_before: f64,
    pub variance_before: f64,
}

pub(crate) fn imaginary_time_step_compiled(ansatz: &mut Ansatz, hamiltonian: &CompiledSum, lambda: f64, dtau: f64) -> Result<ImaginaryStep> {
    check_step(dtau, "imaginary time step")?;
    let space = TangentSpace::new(ansatz, hamiltonian)?;
    let (a_r, c_r) = space.imagtime();
    let solution = solve_regularized(&a_r, &c_r, lambda)?;
    ansatz.advance(solution.x.as_slice(), -dtau)?;
    Ok(ImaginaryStep {
        energy_before: space.energy,
        variance_before: space.variance,
    })
}

/// Fixed-structure update `theta -= dtau (A_R + lambda I)^{-1} C_R`.
pub fn imaginary_time_step(ansatz: &mut Ansatz, hamiltonian: &WeightedPauliSum, lambda: f64, dtau: f64) -> Result<ImaginaryStep> {
    imaginary_time_step_compiled(ansatz, &hamiltonian.compile(), lambda, dtau)
}

//! Ground truth: exact spectra, time-ordered evolution, imaginary-time
//! filtering and the approximation ratio.

mod dense;
mod evolve;
mod filter;
mod lanczos;

pub use dense::{dense_matrix, dense_spectrum, lowest_levels, DenseSpectrum, DENSE_LEVELS_MAX_QUBITS, DENSE_MAX_QUBITS};
pub use evolve::{evolve_exact, DEFAULT_SUBSTEPS};
pub use filter::{ground_state_probability, imaginary_filter_exact, GroundStateProbability};
pub use lanczos::{lanczos_extremes, LanczosOptions};

use crate::error::{Error, Result};
use crate::operator::WeightedPauliSum;
use crate::state::StateVector;

/// Smallest and largest eigenvalue of `hamiltonian`.
///
/// Registers of up to [`DENSE_MAX_QUBITS`] qubits are diagonalized densely;
/// larger ones use matrix-free Lanczos.
pub fn extremal_eigenvalues(hamiltonian: &WeightedPauliSum) -> Result<(f64, f64)> {
    let n = hamiltonian.n_qubits();
    if n > 20 {
        return Err(Error::TooLarge { n_qubits: n, limit: 20 });
    }
    if n <= DENSE_MAX_QUBITS {
        let values = dense::dense_eigenvalues(hamiltonian)?;
        Ok((values[0], values[values.len() - 1]))
    } else {
        lanczos_extremes(hamiltonian, &LanczosOptions::default())
    }
}

/// `r = (E_max - E) / (E_max - E_min)`.
pub fn ratio_from_bounds(energy: f64, e_min: f64, e_max: f64) -> Result<f64> {
    let width = e_max - e_min;
    if !(width > 1e-12) {
        return Err(Error::DegenerateSpectrum { width });
    }
    Ok((e_max - energy) / width)
}

/// Approximation ratio of `psi` with respect to the spectrum of `hamiltonian`.
pub fn approximation_ratio(hamiltonian: &WeightedPauliSum, psi: &StateVector) -> Result<f64> {
    let energy = hamiltonian.expectation(psi)?;
    let (e_min, e_max) = extremal_eigenvalues(hamiltonian)?;
    ratio_from_bounds(energy, e_min, e_max)
}

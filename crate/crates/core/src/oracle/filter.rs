use crate::error::{check_dim, Error, Result};
use crate::operator::WeightedPauliSum;
use crate::state::{inner, norm_sqr, StateVector};
use crate::Complex64;

use super::dense::{dense_spectrum, DENSE_MAX_QUBITS};

/// Levels within this distance of `E_0` count as ground states.
const DEGENERACY_TOLERANCE: f64 = 1e-10;

fn check_tau(tau: f64) -> Result<()> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::invalid(format!("imaginary time must be non-negative, got {tau}")));
    }
    Ok(())
}

/// `e^{-tau H}|psi>` normalized.
///
/// Small registers use the dense eigendecomposition. Larger ones integrate
/// `d/dtau |psi> = -(H - <H>)|psi>` with RK4, renormalizing each step.
pub fn imaginary_filter_exact(hamiltonian: &WeightedPauliSum, psi: &StateVector, tau: f64) -> Result<StateVector> {
    check_tau(tau)?;
    check_dim(hamiltonian.n_qubits(), psi.n_qubits())?;
    if tau == 0.0 {
        return Ok(psi.clone());
    }
    if psi.n_qubits() <= DENSE_MAX_QUBITS {
        let spectrum = dense_spectrum(hamiltonian)?;
        let overlaps = spectrum.overlaps(psi.amplitudes());
        let e0 = spectrum.values[0];
        let mut out = vec![Complex64::new(0.0, 0.0); psi.dim()];
        for (k, c) in overlaps.iter().enumerate() {
            // Shifting by E_0 keeps every weight in (0, 1].
            let weight = c * (-tau * (spectrum.values[k] - e0)).exp();
            for (o, v) in out.iter_mut().zip(spectrum.vectors.column(k).iter()) {
                *o += v * weight;
            }
        }
        return StateVector::normalized(out);
    }
    let op = hamiltonian.compile();
    let steps = (tau * hamiltonian.one_norm() / 0.02).ceil().max(16.0) as usize;
    let h = tau / steps as f64;
    let dim = psi.dim();
    let mut state = psi.amplitudes().to_vec();
    let mut stage = vec![Complex64::new(0.0, 0.0); dim];
    let mut applied = vec![Complex64::new(0.0, 0.0); dim];
    let mut ks = vec![vec![Complex64::new(0.0, 0.0); dim]; 4];
    let rhs = |input: &[Complex64], out: &mut [Complex64], applied: &mut [Complex64]| {
        op.apply_into(input, applied);
        let energy = inner(input, applied).re / norm_sqr(input);
        for ((o, a), x) in out.iter_mut().zip(applied.iter()).zip(input) {
            *o = -(a - x * energy);
        }
    };
    for _ in 0..steps {
        let weights = [0.0, 0.5 * h, 0.5 * h, h];
        for stage_index in 0..4 {
            if stage_index == 0 {
                stage.copy_from_slice(&state);
            } else {
                let prev = &ks[stage_index - 1];
                for ((s, x), k) in stage.iter_mut().zip(&state).zip(prev) {
                    *s = x + k * weights[stage_index];
                }
            }
            let (_, rest) = ks.split_at_mut(stage_index);
            rhs(&stage, &mut rest[0], &mut applied);
        }
        for i in 0..dim {
            state[i] += (ks[0][i] + (ks[1][i] + ks[2][i]) * 2.0 + ks[3][i]) * (h / 6.0);
        }
        let norm = norm_sqr(&state).sqrt();
        state.iter_mut().for_each(|a| *a /= norm);
    }
    StateVector::from_amplitudes(state)
}

/// Ground-state population of a state after imaginary-time filtering.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroundStateProbability {
    pub probability: f64,
    /// Dimension of the (numerically) degenerate ground space used as `|psi_0>`.
    pub ground_multiplicity: usize,
    pub degenerate: bool,
}

/// Closed-form ground-state probability
/// `p' = 1 / (1 + sum_{i>0} |a_i|^2 / |a_0|^2 e^{-2 tau (E_i - E_0)})`,
/// which reduces to `p = |a_0|^2` at `tau = 0`.
///
/// A degenerate ground space is treated as a single level whose weight is the
/// total projection onto it.
pub fn ground_state_probability(hamiltonian: &WeightedPauliSum, psi: &StateVector, tau: f64) -> Result<GroundStateProbability> {
    check_tau(tau)?;
    check_dim(hamiltonian.n_qubits(), psi.n_qubits())?;
    if psi.n_qubits() > DENSE_MAX_QUBITS {
        return Err(Error::TooLarge {
            n_qubits: psi.n_qubits(),
            limit: DENSE_MAX_QUBITS,
        });
    }
    let spectrum = dense_spectrum(hamiltonian)?;
    let overlaps = spectrum.overlaps(psi.amplitudes());
    let e0 = spectrum.values[0];
    let multiplicity = spectrum
        .values
        .iter()
        .take_while(|&&e| e - e0 <= DEGENERACY_TOLERANCE)
        .count();
    let ground_weight: f64 = overlaps[..multiplicity].iter().map(|c| c.norm_sqr()).sum();
    if ground_weight < 1e-14 {
        return Err(Error::OrthogonalToGround { weight: ground_weight });
    }
    let probability = if tau == 0.0 {
        ground_weight / norm_sqr(psi.amplitudes())
    } else {
        let suppressed: f64 = overlaps[multiplicity..]
            .iter()
            .zip(&spectrum.values[multiplicity..])
            .map(|(c, e)| c.norm_sqr() / ground_weight * (-2.0 * tau * (e - e0)).exp())
            .sum();
        1.0 / (1.0 + suppressed)
    };
    Ok(GroundStateProbability {
        probability,
        ground_multiplicity: multiplicity,
        degenerate: multiplicity > 1,
    })
}

use crate::error::{check_dim, Error, Result};
use crate::operator::{CompiledSum, WeightedPauliSum};
use crate::state::{norm_sqr, StateVector};
use crate::Complex64;

/// Default number of RK4 steps over the full evolution when no substep is given.
pub const DEFAULT_SUBSTEPS: usize = 10_000;

/// Per-step norm drift beyond which the integrator is considered broken.
const MAX_STEP_DRIFT: f64 = 1e-6;

/// `out = -i H (base + scale * k)`.
fn derivative(op: &CompiledSum, base: &[Complex64], k: Option<(&[Complex64], f64)>, scratch: &mut Vec<Complex64>, out: &mut [Complex64]) {
    scratch.clear();
    match k {
        Some((k, scale)) => scratch.extend(base.iter().zip(k).map(|(b, k)| b + k * scale)),
        None => scratch.extend_from_slice(base),
    }
    op.apply_into(scratch, out);
    for v in out.iter_mut() {
        *v = Complex64::new(v.im, -v.re);
    }
}

/// Integrates `i d/dt |psi> = H(t) |psi>` from `0` to `total_time` with
/// classical fourth-order Runge-Kutta.
///
/// `substep` defaults to `total_time / DEFAULT_SUBSTEPS`; the step actually
/// used is shrunk so that it divides `total_time` evenly. The state is
/// renormalized after every step.
pub fn evolve_exact<F>(hamiltonian_at: F, psi0: &StateVector, total_time: f64, substep: Option<f64>) -> Result<StateVector>
where
    F: Fn(f64) -> Result<WeightedPauliSum>,
{
    if !(total_time >= 0.0) || !total_time.is_finite() {
        return Err(Error::invalid(format!("total time must be non-negative, got {total_time}")));
    }
    if let Some(h) = substep {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::invalid(format!("substep must be positive, got {h}")));
        }
    }
    psi0.check_norm()?;
    if total_time == 0.0 {
        return Ok(psi0.clone());
    }
    let requested = substep.unwrap_or(total_time / DEFAULT_SUBSTEPS as f64);
    let steps = (total_time / requested - 1e-9).ceil().max(1.0) as usize;
    let h = total_time / steps as f64;

    let n = psi0.n_qubits();
    let dim = psi0.dim();
    let mut psi = psi0.amplitudes().to_vec();
    let zeros = || vec![Complex64::new(0.0, 0.0); dim];
    let (mut k1, mut k2, mut k3, mut k4, mut scratch) = (zeros(), zeros(), zeros(), zeros(), Vec::with_capacity(dim));

    let compile = |t: f64| -> Result<CompiledSum> {
        let ham = hamiltonian_at(t)?;
        check_dim(n, ham.n_qubits())?;
        Ok(ham.compile())
    };
    let mut start = compile(0.0)?;
    for step in 0..steps {
        let t = step as f64 * h;
        let mid = compile(t + 0.5 * h)?;
        let end = compile(if step + 1 == steps { total_time } else { t + h })?;
        derivative(&start, &psi, None, &mut scratch, &mut k1);
        derivative(&mid, &psi, Some((&k1, 0.5 * h)), &mut scratch, &mut k2);
        derivative(&mid, &psi, Some((&k2, 0.5 * h)), &mut scratch, &mut k3);
        derivative(&end, &psi, Some((&k3, h)), &mut scratch, &mut k4);
        for i in 0..dim {
            psi[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
        }
        let norm = norm_sqr(&psi).sqrt();
        let drift = (norm - 1.0).abs();
        if drift > MAX_STEP_DRIFT || !drift.is_finite() {
            return Err(Error::NormDrift { drift });
        }
        psi.iter_mut().for_each(|a| *a /= norm);
        start = end;
    }
    StateVector::from_amplitudes(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn constant(label: &str) -> impl Fn(f64) -> Result<WeightedPauliSum> + '_ {
        move |_| WeightedPauliSum::new(label.len(), [(1.0, label.parse().unwrap())])
    }

    #[test]
    fn rabi_flip() {
        let zero = StateVector::zero(1).unwrap();
        let out = evolve_exact(constant("X"), &zero, FRAC_PI_2, None).unwrap();
        assert!(out.amplitudes()[0].norm() < 1e-8);
        assert!((out.amplitudes()[1] - Complex64::new(0.0, -1.0)).norm() < 1e-8);
    }

    #[test]
    fn zero_time_is_identity() {
        let plus = StateVector::plus(2).unwrap();
        assert_eq!(evolve_exact(constant("XZ"), &plus, 0.0, None).unwrap(), plus);
    }

    #[test]
    fn rejects_bad_arguments() {
        let plus = StateVector::plus(1).unwrap();
        assert!(evolve_exact(constant("X"), &plus, 1.0, Some(0.0)).is_err());
        assert!(evolve_exact(constant("X"), &plus, 1.0, Some(-1e-3)).is_err());
        assert!(evolve_exact(constant("X"), &plus, -1.0, None).is_err());
        assert!(evolve_exact(constant("XX"), &plus, 1.0, None).is_err());
    }
}

use nalgebra::{DMatrix, SymmetricEigen};
use rand_core::SeedableRng;
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::models::standard_normal;
use crate::operator::WeightedPauliSum;
use crate::state::{inner, norm_sqr};
use crate::Complex64;

#[derive(Clone, Debug)]
pub struct LanczosOptions {
    pub max_iterations: usize,
    /// Convergence when `|beta_k s_k| <= tolerance * max(1, |theta|)` for both
    /// extremal Ritz pairs.
    pub tolerance: f64,
    /// Seed of the Gaussian start vector.
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            max_iterations: 600,
            tolerance: 1e-10,
            seed: 0x5eed_1a2c,
        }
    }
}

struct RitzCheck {
    min: f64,
    max: f64,
    residual: f64,
}

fn ritz(alphas: &[f64], betas: &[f64], next_beta: f64, tolerance: f64) -> (RitzCheck, bool) {
    let k = alphas.len();
    let tri = DMatrix::from_fn(k, k, |r, c| {
        if r == c {
            alphas[r]
        } else if r + 1 == c {
            betas[r]
        } else if c + 1 == r {
            betas[c]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(tri);
    let (mut lo, mut hi) = (0, 0);
    for i in 0..k {
        if eig.eigenvalues[i] < eig.eigenvalues[lo] {
            lo = i;
        }
        if eig.eigenvalues[i] > eig.eigenvalues[hi] {
            hi = i;
        }
    }
    let residual_of = |i: usize| (next_beta * eig.eigenvectors[(k - 1, i)]).abs();
    let scale = |v: f64| v.abs().max(1.0);
    let min = eig.eigenvalues[lo];
    let max = eig.eigenvalues[hi];
    let r_lo = residual_of(lo) / scale(min);
    let r_hi = residual_of(hi) / scale(max);
    let residual = r_lo.max(r_hi);
    (RitzCheck { min, max, residual }, residual <= tolerance)
}

/// Extremal eigenvalues by Lanczos with full reorthogonalization on the
/// matrix-free Pauli kernel.
pub fn lanczos_extremes(hamiltonian: &WeightedPauliSum, options: &LanczosOptions) -> Result<(f64, f64)> {
    let dim = 1usize << hamiltonian.n_qubits();
    let op = hamiltonian.compile();
    let mut rng = SplitMix64::seed_from_u64(options.seed);
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(standard_normal(&mut rng), standard_normal(&mut rng)))
        .collect();
    let norm = norm_sqr(&v).sqrt();
    v.iter_mut().for_each(|a| *a /= norm);

    let max_iterations = options.max_iterations.min(dim);
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut alphas = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    let mut last = RitzCheck {
        min: f64::NAN,
        max: f64::NAN,
        residual: f64::INFINITY,
    };
    for k in 0..max_iterations {
        op.apply_into(&v, &mut w);
        let alpha = inner(&v, &w).re;
        alphas.push(alpha);
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi -= vi * alpha;
        }
        if let (Some(prev), Some(&beta)) = (basis.last(), betas.last()) {
            let prev: &Vec<Complex64> = prev;
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= pi * beta;
            }
        }
        basis.push(v.clone());
        // Two passes of classical Gram-Schmidt keep the basis orthogonal.
        for _ in 0..2 {
            for b in &basis {
                let overlap = inner(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= bi * overlap;
                }
            }
        }
        let beta = norm_sqr(&w).sqrt();
        let invariant = beta <= 1e-14 * alpha.abs().max(1.0);
        if invariant || k % 4 == 3 || k + 1 == max_iterations {
            let (check, converged) = ritz(&alphas, &betas, if invariant { 0.0 } else { beta }, options.tolerance);
            if converged || invariant {
                return Ok((check.min, check.max));
            }
            last = check;
        }
        betas.push(beta);
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / beta;
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iterations,
        residual: last.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_h_ad, driver_hamiltonian, sample_sk};
    use crate::oracle::dense::dense_eigenvalues;

    #[test]
    fn driver_extremes() {
        let (lo, hi) = lanczos_extremes(&driver_hamiltonian(2).unwrap(), &LanczosOptions::default()).unwrap();
        assert!((lo + 2.0).abs() < 1e-10);
        assert!((hi - 2.0).abs() < 1e-10);
    }

    #[test]
    fn matches_dense_for_small_registers() {
        for n in 2..=8 {
            for seed in 0..3 {
                let inst = sample_sk(n, seed).unwrap();
                for &s in &[0.0, 0.3, 0.6, 1.0] {
                    let h = build_h_ad(&inst, s).unwrap();
                    let dense = dense_eigenvalues(&h).unwrap();
                    let (lo, hi) = lanczos_extremes(&h, &LanczosOptions::default()).unwrap();
                    assert!((lo - dense[0]).abs() < 1e-9, "n={n} seed={seed} s={s}");
                    assert!((hi - dense[dense.len() - 1]).abs() < 1e-9, "n={n} seed={seed} s={s}");
                }
            }
        }
    }

    #[test]
    fn reports_non_convergence() {
        let inst = sample_sk(8, 1).unwrap();
        let h = build_h_ad(&inst, 0.5).unwrap();
        let options = LanczosOptions {
            max_iterations: 3,
            ..LanczosOptions::default()
        };
        assert!(matches!(lanczos_extremes(&h, &options), Err(Error::NonConvergence { .. })));
    }
}

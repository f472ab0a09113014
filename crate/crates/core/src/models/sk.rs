use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sherrington-Kirkpatrick instance `H = -sum_{i<j} J_ij Z_i Z_j - sum_i h_i Z_i`.
///
/// Couplings are stored row-major over `i < j`: `(0,1), (0,2), ..., (1,2), ...`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceFile", into = "InstanceFile")]
pub struct SkInstance {
    n_qubits: usize,
    seed: u64,
    couplings: Vec<f64>,
    fields: Vec<f64>,
}

/// On-disk layout: `{ "n", "seed", "couplings", "fields" }`.
#[derive(Serialize, Deserialize)]
struct InstanceFile {
    n: usize,
    seed: u64,
    couplings: Vec<f64>,
    fields: Vec<f64>,
}

impl TryFrom<InstanceFile> for SkInstance {
    type Error = Error;

    fn try_from(file: InstanceFile) -> Result<Self> {
        SkInstance::new(file.n, file.couplings, file.fields, file.seed)
    }
}

impl From<SkInstance> for InstanceFile {
    fn from(instance: SkInstance) -> Self {
        InstanceFile {
            n: instance.n_qubits,
            seed: instance.seed,
            couplings: instance.couplings,
            fields: instance.fields,
        }
    }
}

impl SkInstance {
    pub fn new(n_qubits: usize, couplings: Vec<f64>, fields: Vec<f64>, seed: u64) -> Result<Self> {
        if n_qubits < 2 {
            return Err(Error::invalid(format!("SK instance needs n >= 2, got {n_qubits}")));
        }
        let pairs = n_qubits * (n_qubits - 1) / 2;
        if couplings.len() != pairs {
            return Err(Error::invalid(format!(
                "expected {pairs} couplings for n = {n_qubits}, got {}",
                couplings.len()
            )));
        }
        if fields.len() != n_qubits {
            return Err(Error::invalid(format!("expected {n_qubits} fields, got {}", fields.len())));
        }
        if couplings.iter().chain(&fields).any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite coupling or field"));
        }
        Ok(Self {
            n_qubits,
            seed,
            couplings,
            fields,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        i * (2 * self.n_qubits - i - 1) / 2 + (j - i - 1)
    }

    /// `J_ij` for `i != j` (symmetric); zero on the diagonal.
    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.couplings[self.pair_index(i, j)],
            std::cmp::Ordering::Greater => self.couplings[self.pair_index(j, i)],
            std::cmp::Ordering::Equal => 0.0,
        }
    }

    /// `(i, j, J_ij)` for every `i < j`, in storage order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n_qubits;
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .zip(&self.couplings)
            .map(|((i, j), &c)| (i, j, c))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// One standard normal deviate from two SplitMix64 outputs via Box-Muller.
///
/// `u1 = ((a >> 11) + 1) / 2^53` lies in `(0, 1]`, `u2 = (b >> 11) / 2^53` in
/// `[0, 1)`, and the deviate is `sqrt(-2 ln u1) cos(2 pi u2)`; the sine branch
/// is discarded.
pub fn standard_normal(rng: &mut SplitMix64) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 * SCALE;
    let u2 = (rng.next_u64() >> 11) as f64 * SCALE;
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Draws `J_ij ~ N(0, 1/n)` for every pair in row-major order from
/// `SplitMix64` seeded with `seed`; all fields are zero.
pub fn sample_sk(n_qubits: usize, seed: u64) -> Result<SkInstance> {
    if n_qubits < 2 {
        return Err(Error::invalid(format!("SK instance needs n >= 2, got {n_qubits}")));
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let scale = (1.0 / n_qubits as f64).sqrt();
    let pairs = n_qubits * (n_qubits - 1) / 2;
    let couplings = (0..pairs).map(|_| scale * standard_normal(&mut rng)).collect();
    SkInstance::new(n_qubits, couplings, vec![0.0; n_qubits], seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_sized() {
        let a = sample_sk(6, 42).unwrap();
        let b = sample_sk(6, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.couplings().len(), 15);
        assert!(a.fields().iter().all(|&h| h == 0.0));
        assert_ne!(a, sample_sk(6, 43).unwrap());
        assert!(sample_sk(1, 0).is_err());
    }

    #[test]
    fn pinned_generator_stream() {
        // SplitMix64 reference outputs for state 0 are 0xe220a8397b1dcdaf, 0x6e789e6aa1b965f4.
        let mut rng = SplitMix64::seed_from_u64(0);
        assert_eq!(rng.next_u64(), 0xe220a8397b1dcdaf);
        assert_eq!(rng.next_u64(), 0x6e789e6aa1b965f4);
        let mut rng = SplitMix64::seed_from_u64(0);
        let a = 0xe220a8397b1dcdafu64;
        let b = 0x6e789e6aa1b965f4u64;
        let u1 = ((a >> 11) + 1) as f64 / (1u64 << 53) as f64;
        let u2 = (b >> 11) as f64 / (1u64 << 53) as f64;
        let expected = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
        assert_eq!(standard_normal(&mut rng), expected);
    }

    #[test]
    fn pooled_variance_is_one_over_n() {
        let n = 10;
        let mut draws = Vec::with_capacity(100_000);
        let mut seed = 0;
        while draws.len() < 100_000 {
            draws.extend_from_slice(sample_sk(n, seed).unwrap().couplings());
            seed += 1;
        }
        draws.truncate(100_000);
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (draws.len() - 1) as f64;
        assert!((0.095..=0.105).contains(&var), "variance {var}");
        assert!(mean.abs() < 5.0 * (0.1f64 / 1e5).sqrt());
    }

    #[test]
    fn coupling_lookup_is_symmetric() {
        let inst = sample_sk(5, 7).unwrap();
        for (i, j, c) in inst.pairs() {
            assert_eq!(inst.coupling(i, j), c);
            assert_eq!(inst.coupling(j, i), c);
        }
        assert_eq!(inst.coupling(2, 2), 0.0);
        assert_eq!(inst.pairs().count(), 10);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let inst = sample_sk(4, 3).unwrap();
        let json = inst.to_json().unwrap();
        assert!(json.contains("\"couplings\""));
        assert_eq!(SkInstance::from_json(&json).unwrap(), inst);
        let bad = r#"{"n": 3, "seed": 0, "couplings": [1.0], "fields": [0, 0, 0]}"#;
        assert!(SkInstance::from_json(bad).is_err());
    }
}

//! Real-weighted sums of Pauli strings (Hermitian by construction).

use num_complex::Complex;

use crate::error::{check_dim, Error, Result};
use crate::pauli::PauliString;
use crate::scalar::Real;
use crate::state::{accumulate_pauli, inner, mul_i_power, norm_sqr, pauli_expectation, StateVector};

/// `sum_k c_k P_k` with real `c_k` and distinct `P_k`.
///
/// Duplicate strings are merged by adding coefficients; terms whose merged
/// coefficient is exactly zero are dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPauliSum<T: Real = f64> {
    n_qubits: usize,
    terms: Vec<(T, PauliString)>,
}

impl<T: Real> WeightedPauliSum<T> {
    pub fn new(n_qubits: usize, terms: impl IntoIterator<Item = (T, PauliString)>) -> Result<Self> {
        let mut merged: Vec<(T, PauliString)> = Vec::new();
        let mut index = std::collections::HashMap::new();
        for (coefficient, pauli) in terms {
            check_dim(n_qubits, pauli.n_qubits())?;
            if !coefficient.is_finite() {
                return Err(Error::invalid(format!("non-finite coefficient on {pauli}")));
            }
            match index.get(&pauli) {
                Some(&slot) => {
                    let entry: &mut (T, PauliString) = &mut merged[slot];
                    entry.0 += coefficient;
                }
                None => {
                    index.insert(pauli, merged.len());
                    merged.push((coefficient, pauli));
                }
            }
        }
        merged.retain(|(c, _)| *c != T::zero());
        Ok(Self { n_qubits, terms: merged })
    }

    pub fn empty(n_qubits: usize) -> Self {
        Self { n_qubits, terms: Vec::new() }
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn terms(&self) -> &[(T, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, pauli: &PauliString) -> T {
        self.terms
            .iter()
            .find(|(_, p)| p == pauli)
            .map(|(c, _)| *c)
            .unwrap_or_else(T::zero)
    }

    /// Sum of absolute coefficients, an upper bound on the spectral norm.
    pub fn one_norm(&self) -> T {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }

    /// True when every term has a real matrix (even number of Y factors).
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(_, p)| p.is_real())
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self::new(self.n_qubits, self.terms.iter().map(|&(c, p)| (c * factor, p))).expect("same register")
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        check_dim(self.n_qubits, other.n_qubits)?;
        Self::new(self.n_qubits, self.terms.iter().chain(other.terms.iter()).copied())
    }

    /// `self + shift * I`.
    pub fn shifted(&self, shift: T) -> Self {
        let identity = PauliString::identity(self.n_qubits).expect("valid register");
        Self::new(self.n_qubits, self.terms.iter().copied().chain(std::iter::once((shift, identity)))).expect("same register")
    }

    /// `H|src>` as a new amplitude buffer.
    pub fn apply(&self, src: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); src.len()];
        for &(c, ref p) in &self.terms {
            accumulate_pauli(p, Complex::new(c, T::zero()), src, &mut out);
        }
        out
    }

    /// `<psi|H|psi>`.
    pub fn expectation(&self, psi: &StateVector<T>) -> Result<T> {
        check_dim(self.n_qubits, psi.n_qubits())?;
        Ok(self
            .terms
            .iter()
            .map(|&(c, ref p)| c * pauli_expectation(p, psi.amplitudes()))
            .sum())
    }

    /// `<H^2> - <H>^2`, evaluated as the squared norm of `(H - <H>)|psi>`.
    pub fn variance(&self, psi: &StateVector<T>) -> Result<T> {
        check_dim(self.n_qubits, psi.n_qubits())?;
        let applied = self.apply(psi.amplitudes());
        Ok(energy_and_variance(psi.amplitudes(), &applied)?.1)
    }

    /// Groups terms by X-mask so repeated application costs one pass per
    /// distinct mask rather than per term.
    pub fn compile(&self) -> CompiledSum<T> {
        CompiledSum::new(self)
    }
}

/// Energy and variance from `psi` and `H psi`, checking Hermiticity.
pub(crate) fn energy_and_variance<T: Real>(psi: &[Complex<T>], applied: &[Complex<T>]) -> Result<(T, T)> {
    let raw = inner(psi, applied);
    let scale = T::one() + norm_sqr(applied).sqrt();
    if raw.im.abs() > T::residue_tolerance() * scale * T::from_f64_lossy(1e3) {
        return Err(Error::NonHermitian {
            imag: raw.im.to_f64().unwrap_or(f64::NAN),
        });
    }
    let energy = raw.re;
    let residual: T = psi
        .iter()
        .zip(applied)
        .map(|(&a, &h)| (h - a * energy).norm_sqr())
        .sum();
    Ok((energy, clamp_round_off(residual)))
}

fn clamp_round_off<T: Real>(value: T) -> T {
    if value < T::zero() && value > -T::residue_tolerance() {
        T::zero()
    } else {
        value
    }
}

/// `<psi|H|psi>`.
pub fn expectation<T: Real>(hamiltonian: &WeightedPauliSum<T>, psi: &StateVector<T>) -> Result<T> {
    hamiltonian.expectation(psi)
}

/// Energy variance of `psi` under `hamiltonian`.
pub fn variance<T: Real>(hamiltonian: &WeightedPauliSum<T>, psi: &StateVector<T>) -> Result<T> {
    hamiltonian.variance(psi)
}

/// A `WeightedPauliSum` laid out for fast repeated application.
///
/// For each distinct X-mask `x` it stores the diagonal weights `d_x[b]` such
/// that `(H psi)[b ^ x] += d_x[b] psi[b]`.
#[derive(Clone, Debug)]
pub struct CompiledSum<T: Real = f64> {
    n_qubits: usize,
    groups: Vec<(usize, Vec<Complex<T>>)>,
}

impl<T: Real> CompiledSum<T> {
    fn new(sum: &WeightedPauliSum<T>) -> Self {
        let dim = 1usize << sum.n_qubits;
        let mut groups: Vec<(usize, Vec<Complex<T>>)> = Vec::new();
        for &(c, ref p) in sum.terms() {
            let x = p.x_mask() as usize;
            let slot = match groups.iter().position(|(mask, _)| *mask == x) {
                Some(slot) => slot,
                None => {
                    groups.push((x, vec![Complex::new(T::zero(), T::zero()); dim]));
                    groups.len() - 1
                }
            };
            let z = p.z_mask() as usize;
            let y = p.y_count();
            let weight = Complex::new(c, T::zero());
            for (b, d) in groups[slot].1.iter_mut().enumerate() {
                *d += mul_i_power(weight, y + 2 * ((b & z).count_ones() & 1));
            }
        }
        // Diagonal group first keeps the summation order stable and cheap.
        groups.sort_by_key(|(x, _)| *x);
        Self {
            n_qubits: sum.n_qubits,
            groups,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn apply_into(&self, src: &[Complex<T>], dst: &mut [Complex<T>]) {
        debug_assert_eq!(src.len(), dst.len());
        dst.iter_mut().for_each(|d| *d = Complex::new(T::zero(), T::zero()));
        for (x, weights) in &self.groups {
            let x = *x;
            if x == 0 {
                for ((d, &w), &s) in dst.iter_mut().zip(weights).zip(src) {
                    *d += w * s;
                }
            } else {
                for (b, (&w, &s)) in weights.iter().zip(src).enumerate() {
                    dst[b ^ x] += w * s;
                }
            }
        }
    }

    pub fn apply(&self, src: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); src.len()];
        self.apply_into(src, &mut out);
        out
    }

    pub fn expectation(&self, psi: &StateVector<T>) -> Result<T> {
        Ok(self.energy_and_variance(psi)?.0)
    }

    pub fn variance(&self, psi: &StateVector<T>) -> Result<T> {
        Ok(self.energy_and_variance(psi)?.1)
    }

    pub fn energy_and_variance(&self, psi: &StateVector<T>) -> Result<(T, T)> {
        check_dim(self.n_qubits, psi.n_qubits())?;
        let applied = self.apply(psi.amplitudes());
        energy_and_variance(psi.amplitudes(), &applied)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(terms: &[(f64, &str)]) -> WeightedPauliSum<f64> {
        let n = terms[0].1.len();
        WeightedPauliSum::new(n, terms.iter().map(|&(c, l)| (c, l.parse().unwrap()))).unwrap()
    }

    #[test]
    fn merges_duplicates_and_drops_zeros() {
        let sum = h(&[(0.5, "XZ"), (0.25, "ZZ"), (0.5, "XZ"), (-0.25, "ZZ")]);
        assert_eq!(sum.len(), 1);
        assert_eq!(sum.coefficient(&"XZ".parse().unwrap()), 1.0);
    }

    #[test]
    fn rejects_mixed_registers() {
        let err = WeightedPauliSum::new(2, [(1.0, "XZZ".parse().unwrap())]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn expectation_examples() {
        let zero = StateVector::<f64>::zero(1).unwrap();
        let plus = StateVector::<f64>::plus(1).unwrap();
        let z = h(&[(1.0, "Z")]);
        assert_eq!(expectation(&z, &zero).unwrap(), 1.0);
        assert!(expectation(&z, &plus).unwrap().abs() < 1e-15);
        let mixed = h(&[(0.3, "X"), (0.7, "Z")]);
        assert!((expectation(&mixed, &plus).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn variance_examples() {
        let z = h(&[(1.0, "Z")]);
        let zero = StateVector::<f64>::zero(1).unwrap();
        assert_eq!(variance(&z, &zero).unwrap(), 0.0);
        let plus = StateVector::<f64>::plus(1).unwrap();
        assert!((variance(&z, &plus).unwrap() - 1.0).abs() < 1e-15);
        let angle = std::f64::consts::PI / 8.0;
        let tilted = StateVector::<f64>::from_amplitudes(vec![Complex::new(angle.cos(), 0.0), Complex::new(angle.sin(), 0.0)]).unwrap();
        assert!((variance(&z, &tilted).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn compiled_matches_direct_application() {
        let sum = h(&[(0.3, "XYZ"), (-0.7, "ZZI"), (0.2, "IYI"), (1.1, "XII"), (0.4, "YIY")]);
        let psi = StateVector::<f64>::normalized((0..8).map(|k| Complex::new((k as f64).sin(), (k as f64 * 0.3).cos())).collect()).unwrap();
        let direct = sum.apply(psi.amplitudes());
        let compiled = sum.compile().apply(psi.amplitudes());
        for (a, b) in direct.iter().zip(&compiled) {
            assert!((a - b).norm() < 1e-14);
        }
        let (e, v) = sum.compile().energy_and_variance(&psi).unwrap();
        assert!((e - sum.expectation(&psi).unwrap()).abs() < 1e-14);
        assert!((v - sum.variance(&psi).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn shift_and_scale() {
        let z = h(&[(1.0, "Z")]);
        let plus = StateVector::<f64>::plus(1).unwrap();
        let affine = z.scaled(2.0).shifted(3.0);
        assert!((affine.expectation(&plus).unwrap() - 3.0).abs() < 1e-15);
        assert!((affine.variance(&plus).unwrap() - 4.0).abs() < 1e-14);
    }
}

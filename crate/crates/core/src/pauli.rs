//! Pauli strings in symplectic (x-mask, z-mask) form.
//!
//! Bit `i` of `x_mask` is set when qubit `i` carries X or Y, bit `i` of
//! `z_mask` when it carries Z or Y. The string acts as
//! `i^{|x & z|} X^x Z^z`, so the implicit phase of every Y is absorbed here
//! and operator coefficients stay real.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest register a `PauliString` can address.
pub const MAX_QUBITS: usize = 64;

/// Single-qubit Pauli factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis on `n_qubits` qubits.
///
/// The text label lists qubit 0 first, e.g. `"XIZ"` is X on qubit 0 and Z on
/// qubit 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n_qubits: usize,
    x_mask: u64,
    z_mask: u64,
}

fn full_mask(n_qubits: usize) -> u64 {
    if n_qubits >= 64 {
        u64::MAX
    } else {
        (1u64 << n_qubits) - 1
    }
}

impl PauliString {
    pub fn new(n_qubits: usize, x_mask: u64, z_mask: u64) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::invalid(format!(
                "pauli string needs 1..={MAX_QUBITS} qubits, got {n_qubits}"
            )));
        }
        let outside = !full_mask(n_qubits);
        if (x_mask | z_mask) & outside != 0 {
            return Err(Error::invalid(format!(
                "pauli masks x={x_mask:#x} z={z_mask:#x} exceed {n_qubits} qubits"
            )));
        }
        Ok(Self { n_qubits, x_mask, z_mask })
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, 0, 0)
    }

    /// Builds a string from `(qubit, factor)` pairs; unlisted qubits are I.
    pub fn from_factors(n_qubits: usize, factors: &[(usize, Pauli)]) -> Result<Self> {
        let mut x_mask = 0u64;
        let mut z_mask = 0u64;
        for &(qubit, factor) in factors {
            if qubit >= n_qubits {
                return Err(Error::invalid(format!(
                    "qubit {qubit} out of range for {n_qubits} qubits"
                )));
            }
            let bit = 1u64 << qubit;
            if (x_mask | z_mask) & bit != 0 {
                return Err(Error::invalid(format!("qubit {qubit} listed twice")));
            }
            let (x, z) = factor.bits();
            if x {
                x_mask |= bit;
            }
            if z {
                z_mask |= bit;
            }
        }
        Self::new(n_qubits, x_mask, z_mask)
    }

    pub fn single(n_qubits: usize, qubit: usize, factor: Pauli) -> Result<Self> {
        Self::from_factors(n_qubits, &[(qubit, factor)])
    }

    pub fn pair(n_qubits: usize, (q0, f0): (usize, Pauli), (q1, f1): (usize, Pauli)) -> Result<Self> {
        Self::from_factors(n_qubits, &[(q0, f0), (q1, f1)])
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    #[inline]
    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    #[inline]
    pub fn is_identity(&self) -> bool {
        self.x_mask | self.z_mask == 0
    }

    #[inline]
    pub fn is_diagonal(&self) -> bool {
        self.x_mask == 0
    }

    /// Number of non-identity factors.
    #[inline]
    pub fn weight(&self) -> u32 {
        (self.x_mask | self.z_mask).count_ones()
    }

    /// Number of Y factors; their phases make the string `i^{y_count} X^x Z^z`.
    #[inline]
    pub fn y_count(&self) -> u32 {
        (self.x_mask & self.z_mask).count_ones()
    }

    /// True when the matrix of the string is real (an even number of Ys).
    #[inline]
    pub fn is_real(&self) -> bool {
        self.y_count() % 2 == 0
    }

    pub fn factor(&self, qubit: usize) -> Pauli {
        let bit = 1u64 << qubit;
        Pauli::from_bits(self.x_mask & bit != 0, self.z_mask & bit != 0)
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = (self.x_mask & other.z_mask).count_ones() + (self.z_mask & other.x_mask).count_ones();
        anti % 2 == 0
    }

    /// Operator product `self * other = phase * result`, with `phase` a power
    /// of `i` returned as an exponent in `0..4`.
    pub fn multiply(&self, other: &PauliString) -> Result<(u32, PauliString)> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        // i^{y1} X^{x1} Z^{z1} i^{y2} X^{x2} Z^{z2}
        //   = i^{y1 + y2} (-1)^{|z1 & x2|} X^{x1 ^ x2} Z^{z1 ^ z2}
        let product = PauliString {
            n_qubits: self.n_qubits,
            x_mask: self.x_mask ^ other.x_mask,
            z_mask: self.z_mask ^ other.z_mask,
        };
        let sign = 2 * (self.z_mask & other.x_mask).count_ones();
        let exponent = self.y_count() + other.y_count() + sign + 4 * MAX_QUBITS as u32 - product.y_count();
        Ok((exponent % 4, product))
    }

    /// Phase picked up by basis state `index` under this string:
    /// `P|b> = phase(b) |b ^ x_mask>`, as a power of `i` in `0..4`.
    #[inline]
    pub fn phase_exponent(&self, index: usize) -> u32 {
        let sign = ((index as u64) & self.z_mask).count_ones() & 1;
        (self.y_count() + 2 * sign) & 3
    }

    /// Same as [`phase_exponent`](Self::phase_exponent) evaluated as a
    /// complex unit.
    #[inline]
    pub fn phase<T: Real>(&self, index: usize) -> Complex<T> {
        i_power(self.phase_exponent(index))
    }

    pub fn label(&self) -> String {
        (0..self.n_qubits).map(|q| self.factor(q).symbol()).collect()
    }
}

/// `i^k` for `k` in `0..4`.
#[inline]
pub(crate) fn i_power<T: Real>(k: u32) -> Complex<T> {
    match k & 3 {
        0 => Complex::new(T::one(), T::zero()),
        1 => Complex::new(T::zero(), T::one()),
        2 => Complex::new(-T::one(), T::zero()),
        _ => Complex::new(T::zero(), -T::one()),
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(label: &str) -> Result<Self> {
        let mut factors = Vec::with_capacity(label.len());
        for (qubit, symbol) in label.chars().enumerate() {
            let factor = match symbol.to_ascii_uppercase() {
                'I' => continue,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(Error::invalid(format!("bad pauli symbol '{other}' in \"{label}\""))),
            };
            factors.push((qubit, factor));
        }
        Self::from_factors(label.chars().count(), &factors)
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let label = String::deserialize(deserializer)?;
        label.parse().map_err(serde::de::Error::custom)
    }
}

/// CNOTs needed by a CNOT-ladder decomposition of `exp(-i theta P)`:
/// `2 (w - 1)` for weight `w >= 2`, nothing for single-qubit or identity strings.
pub fn cnot_cost(pauli: &PauliString) -> u64 {
    let weight = pauli.weight() as u64;
    if weight <= 1 {
        0
    } else {
        2 * (weight - 1)
    }
}

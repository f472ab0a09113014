//! Statevectors and the matrix-free Pauli kernels acting on them.
//!
//! Amplitudes are stored in computational-basis order with qubit 0 as the
//! least-significant bit of the index.

use num_complex::Complex;

use crate::error::{check_dim, Error, Result};
use crate::pauli::PauliString;
use crate::scalar::Real;

/// Multiplies `value` by `i^k`.
#[inline(always)]
pub(crate) fn mul_i_power<T: Real>(value: Complex<T>, k: u32) -> Complex<T> {
    match k & 3 {
        0 => value,
        1 => Complex::new(-value.im, value.re),
        2 => Complex::new(-value.re, -value.im),
        _ => Complex::new(value.im, -value.re),
    }
}

/// `<a|b>` over raw amplitude slices.
#[inline]
pub fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    debug_assert_eq!(a.len(), b.len());
    let mut re = T::zero();
    let mut im = T::zero();
    for (x, y) in a.iter().zip(b) {
        re += x.re * y.re + x.im * y.im;
        im += x.re * y.im - x.im * y.re;
    }
    Complex::new(re, im)
}

/// Squared 2-norm of a raw amplitude slice.
#[inline]
pub fn norm_sqr<T: Real>(amps: &[Complex<T>]) -> T {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

/// `-1` when `bits` has odd parity, `+1` otherwise.
#[inline(always)]
fn parity_sign<T: Real>(bits: usize) -> T {
    if bits.count_ones() & 1 == 1 {
        -T::one()
    } else {
        T::one()
    }
}

/// Writes `P|src>` into `dst`.
pub fn apply_pauli_into<T: Real>(pauli: &PauliString, src: &[Complex<T>], dst: &mut [Complex<T>]) {
    debug_assert_eq!(src.len(), dst.len());
    let x = pauli.x_mask() as usize;
    let z = pauli.z_mask() as usize;
    let phase = mul_i_power(Complex::new(T::one(), T::zero()), pauli.y_count());
    for (b, &amp) in src.iter().enumerate() {
        dst[b ^ x] = amp * phase * parity_sign::<T>(b & z);
    }
}

/// Adds `scale * P|src>` to `dst`.
pub fn accumulate_pauli<T: Real>(pauli: &PauliString, scale: Complex<T>, src: &[Complex<T>], dst: &mut [Complex<T>]) {
    debug_assert_eq!(src.len(), dst.len());
    let x = pauli.x_mask() as usize;
    let z = pauli.z_mask() as usize;
    let phase = mul_i_power(scale, pauli.y_count());
    for (b, &amp) in src.iter().enumerate() {
        dst[b ^ x] += amp * phase * parity_sign::<T>(b & z);
    }
}

/// `<psi|P|psi>` for a single Pauli string (real for normalized or not).
pub fn pauli_expectation<T: Real>(pauli: &PauliString, amps: &[Complex<T>]) -> T {
    let x = pauli.x_mask() as usize;
    let z = pauli.z_mask() as usize;
    let mut acc = Complex::new(T::zero(), T::zero());
    for (b, &amp) in amps.iter().enumerate() {
        acc += amps[b ^ x].conj() * amp * parity_sign::<T>(b & z);
    }
    // Hermitian strings have real expectation values; the imaginary part is round-off.
    mul_i_power(acc, pauli.y_count()).re
}

/// Applies `exp(-i theta P) = cos(theta) - i sin(theta) P` in place.
pub fn rotate_in_place<T: Real>(pauli: &PauliString, theta: T, amps: &mut [Complex<T>]) {
    let (sin, cos) = theta.sin_cos();
    let x = pauli.x_mask() as usize;
    let z = pauli.z_mask() as usize;
    if x == 0 {
        // Diagonal (no Y factors): P|b> = +-|b>.
        let plus = Complex::new(cos, -sin);
        let minus = Complex::new(cos, sin);
        for (b, amp) in amps.iter_mut().enumerate() {
            let negative = (b & z).count_ones() & 1 == 1;
            *amp *= if negative { minus } else { plus };
        }
        return;
    }
    // P|b> = i^y (-1)^{|b & z|} |b ^ x>; fold -i sin i^y into one constant.
    let w = mul_i_power(Complex::new(T::zero(), -sin), pauli.y_count());
    // parity(partner & z) = parity(b & z) ^ parity(x & z).
    let flip = parity_sign::<T>(x & z);
    let high = 1usize << (usize::BITS - 1 - x.leading_zeros());
    for block in (0..amps.len()).step_by(2 * high) {
        for b in block..block + high {
            let partner = b ^ x;
            let a = amps[b];
            let c = amps[partner];
            let wb = w * parity_sign::<T>(b & z);
            amps[partner] = c * cos + a * wb;
            amps[b] = a * cos + c * (wb * flip);
        }
    }
}

/// Unit-norm state of `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Real = f64> {
    n_qubits: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Largest register the dense statevector supports.
    pub const MAX_QUBITS: usize = 30;

    fn check_size(n_qubits: usize) -> Result<()> {
        if n_qubits == 0 || n_qubits > Self::MAX_QUBITS {
            return Err(Error::invalid(format!(
                "statevector needs 1..={} qubits, got {n_qubits}",
                Self::MAX_QUBITS
            )));
        }
        Ok(())
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        Self::check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::invalid(format!("basis index {index} out of range for {n_qubits} qubits")));
        }
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        amplitudes[index] = Complex::new(T::one(), T::zero());
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// `|+>^n`, the ground state of the transverse-field driver.
    pub fn plus(n_qubits: usize) -> Result<Self> {
        Self::check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        let amp = T::one() / T::from_usize(dim).unwrap().sqrt();
        Ok(Self {
            n_qubits,
            amplitudes: vec![Complex::new(amp, T::zero()); dim],
        })
    }

    /// Wraps amplitudes that must already be normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        let state = Self { n_qubits, amplitudes };
        state.check_norm()?;
        Ok(state)
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(mut amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        let norm = norm_sqr(&amplitudes).sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::invalid("cannot normalize a zero or non-finite vector"));
        }
        for a in &mut amplitudes {
            *a = *a / norm;
        }
        Ok(Self { n_qubits, amplitudes })
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    pub fn norm(&self) -> T {
        norm_sqr(&self.amplitudes).sqrt()
    }

    /// Errors when the norm has drifted from one beyond [`Real::norm_tolerance`].
    pub fn check_norm(&self) -> Result<()> {
        let drift = (self.norm() - T::one()).abs();
        if drift > T::norm_tolerance() || !drift.is_finite() {
            return Err(Error::NormDrift {
                drift: drift.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        check_dim(self.dim(), other.dim())?;
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn apply_pauli(&self, pauli: &PauliString) -> Result<Self> {
        check_dim(self.n_qubits, pauli.n_qubits())?;
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.dim()];
        apply_pauli_into(pauli, &self.amplitudes, &mut out);
        Ok(Self {
            n_qubits: self.n_qubits,
            amplitudes: out,
        })
    }

    pub fn apply_rotation(&self, pauli: &PauliString, theta: T) -> Result<Self> {
        let mut out = self.clone();
        out.rotate(pauli, theta)?;
        Ok(out)
    }

    /// In-place `exp(-i theta P)`.
    pub fn rotate(&mut self, pauli: &PauliString, theta: T) -> Result<()> {
        check_dim(self.n_qubits, pauli.n_qubits())?;
        rotate_in_place(pauli, theta, &mut self.amplitudes);
        Ok(())
    }

    pub(crate) fn from_raw(n_qubits: usize, amplitudes: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self { n_qubits, amplitudes }
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::invalid(format!("amplitude count {len} is not a power of two >= 2")));
    }
    Ok(len.trailing_zeros() as usize)
}

/// `P|psi>`.
pub fn apply_pauli<T: Real>(pauli: &PauliString, psi: &StateVector<T>) -> Result<StateVector<T>> {
    psi.apply_pauli(pauli)
}

/// `exp(-i theta P)|psi>`.
pub fn apply_rotation<T: Real>(pauli: &PauliString, theta: T, psi: &StateVector<T>) -> Result<StateVector<T>> {
    psi.apply_rotation(pauli, theta)
}

#![allow(dead_code)]

use havqds_core::{Complex64, Pauli, PauliString, StateVector, WeightedPauliSum};
use nalgebra::{DMatrix, DVector};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn single(p: Pauli) -> DMatrix<Complex64> {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    match p {
        Pauli::I => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        Pauli::X => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        Pauli::Y => DMatrix::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
        Pauli::Z => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// Kronecker product with qubit 0 as the least-significant index bit.
pub fn pauli_matrix(p: &PauliString) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for q in (0..p.n_qubits()).rev() {
        m = m.kronecker(&single(p.factor(q)));
    }
    m
}

pub fn sum_matrix(h: &WeightedPauliSum) -> DMatrix<Complex64> {
    let dim = 1 << h.n_qubits();
    let mut m = DMatrix::from_element(dim, dim, c(0.0, 0.0));
    for (coef, p) in h.terms() {
        m += pauli_matrix(p) * c(*coef, 0.0);
    }
    m
}

pub fn column(psi: &StateVector) -> DVector<Complex64> {
    DVector::from_column_slice(psi.amplitudes())
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Deterministic pseudo-random stream for test fixtures.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 11
    }

    pub fn uniform(&mut self) -> f64 {
        self.next_u64() as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn pauli(&mut self, n: usize) -> PauliString {
        let factors: Vec<(usize, Pauli)> = (0..n)
            .map(|q| (q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][self.below(4)]))
            .collect();
        PauliString::from_factors(n, &factors).unwrap()
    }

    pub fn non_identity_pauli(&mut self, n: usize) -> PauliString {
        loop {
            let p = self.pauli(n);
            if !p.is_identity() {
                return p;
            }
        }
    }

    pub fn state(&mut self, n: usize) -> StateVector {
        let amps = (0..1 << n).map(|_| c(self.range(-1.0, 1.0), self.range(-1.0, 1.0))).collect();
        StateVector::normalized(amps).unwrap()
    }
}

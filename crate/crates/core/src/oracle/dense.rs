use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::operator::WeightedPauliSum;
use crate::Complex64;

/// Above this size extremal eigenvalues come from Lanczos instead.
pub const DENSE_MAX_QUBITS: usize = 8;

/// Largest register for which full level diagrams are computed densely.
pub const DENSE_LEVELS_MAX_QUBITS: usize = 10;

/// Hard cap on dense matrices (2^12 x 2^12 complex is 256 MiB).
const DENSE_HARD_LIMIT: usize = 12;

fn check_limit(n_qubits: usize, limit: usize) -> Result<()> {
    if n_qubits > limit {
        return Err(Error::TooLarge { n_qubits, limit });
    }
    Ok(())
}

/// Dense `2^n x 2^n` matrix of `hamiltonian`.
pub fn dense_matrix(hamiltonian: &WeightedPauliSum) -> Result<DMatrix<Complex64>> {
    check_limit(hamiltonian.n_qubits(), DENSE_HARD_LIMIT)?;
    let dim = 1usize << hamiltonian.n_qubits();
    let mut matrix = DMatrix::<Complex64>::zeros(dim, dim);
    for &(c, ref p) in hamiltonian.terms() {
        let x = p.x_mask() as usize;
        for b in 0..dim {
            matrix[(b ^ x, b)] += p.phase::<f64>(b) * c;
        }
    }
    Ok(matrix)
}

fn real_part(matrix: &DMatrix<Complex64>) -> DMatrix<f64> {
    matrix.map(|v| v.re)
}

fn sorted_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    order
}

/// Ascending eigenvalues of a dense Hermitian operator.
pub(crate) fn dense_eigenvalues(hamiltonian: &WeightedPauliSum) -> Result<Vec<f64>> {
    let matrix = dense_matrix(hamiltonian)?;
    let mut values: Vec<f64> = if hamiltonian.is_real() {
        real_part(&matrix).symmetric_eigenvalues().iter().copied().collect()
    } else {
        matrix.symmetric_eigenvalues().iter().copied().collect()
    };
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Full eigendecomposition with eigenvalues ascending and eigenvectors as
/// the matching columns.
#[derive(Clone, Debug)]
pub struct DenseSpectrum {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl DenseSpectrum {
    /// `<v_k|psi>` for every eigenvector.
    pub fn overlaps(&self, amplitudes: &[Complex64]) -> Vec<Complex64> {
        (0..self.values.len())
            .map(|k| {
                self.vectors
                    .column(k)
                    .iter()
                    .zip(amplitudes)
                    .map(|(v, a)| v.conj() * a)
                    .sum()
            })
            .collect()
    }
}

pub fn dense_spectrum(hamiltonian: &WeightedPauliSum) -> Result<DenseSpectrum> {
    check_limit(hamiltonian.n_qubits(), DENSE_LEVELS_MAX_QUBITS)?;
    let matrix = dense_matrix(hamiltonian)?;
    let (values, vectors) = if hamiltonian.is_real() {
        let eig = SymmetricEigen::new(real_part(&matrix));
        (eig.eigenvalues.iter().copied().collect::<Vec<_>>(), eig.eigenvectors.map(|v| Complex64::new(v, 0.0)))
    } else {
        let eig = SymmetricEigen::new(matrix);
        (eig.eigenvalues.iter().copied().collect::<Vec<_>>(), eig.eigenvectors)
    };
    let order = sorted_order(&values);
    let dim = values.len();
    let sorted_values = order.iter().map(|&k| values[k]).collect();
    let sorted_vectors = DMatrix::from_fn(dim, dim, |row, col| vectors[(row, order[col])]);
    Ok(DenseSpectrum {
        values: sorted_values,
        vectors: sorted_vectors,
    })
}

/// The `count` lowest eigenvalues (with multiplicity), ascending.
pub fn lowest_levels(hamiltonian: &WeightedPauliSum, count: usize) -> Result<Vec<f64>> {
    check_limit(hamiltonian.n_qubits(), DENSE_LEVELS_MAX_QUBITS)?;
    let mut values = dense_eigenvalues(hamiltonian)?;
    values.truncate(count);
    Ok(values)
}

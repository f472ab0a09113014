use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

/// Candidate generators for adaptive ansatz growth.
///
/// Order: `X_i, Y_i` for each qubit `i`, then for each pair `i < j` in
/// lexicographic order `Z_i Z_j, Z_i Y_j, Y_i Z_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorPool {
    n_qubits: usize,
    operators: Vec<PauliString>,
}

impl OperatorPool {
    pub fn from_operators(n_qubits: usize, operators: Vec<PauliString>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for op in &operators {
            if op.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch {
                    expected: n_qubits,
                    found: op.n_qubits(),
                });
            }
            if !seen.insert(*op) {
                return Err(Error::invalid(format!("duplicate pool operator {op}")));
            }
        }
        Ok(Self { n_qubits, operators })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn operators(&self) -> &[PauliString] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }
}

/// Pool of driver, problem and first-order CD operators:
/// `2n + 3 n (n - 1) / 2` strings.
pub fn build_pool(n_qubits: usize) -> Result<OperatorPool> {
    if n_qubits < 2 {
        return Err(Error::invalid(format!("operator pool needs n >= 2, got {n_qubits}")));
    }
    let n = n_qubits;
    let mut operators = Vec::with_capacity(2 * n + 3 * n * (n - 1) / 2);
    for q in 0..n {
        operators.push(PauliString::single(n, q, Pauli::X)?);
        operators.push(PauliString::single(n, q, Pauli::Y)?);
    }
    for i in 0..n {
        for j in i + 1..n {
            operators.push(PauliString::pair(n, (i, Pauli::Z), (j, Pauli::Z))?);
            operators.push(PauliString::pair(n, (i, Pauli::Z), (j, Pauli::Y))?);
            operators.push(PauliString::pair(n, (i, Pauli::Y), (j, Pauli::Z))?);
        }
    }
    OperatorPool::from_operators(n, operators)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(build_pool(2).unwrap().len(), 7);
        assert_eq!(build_pool(10).unwrap().len(), 155);
        assert!(build_pool(1).is_err());
    }

    #[test]
    fn order_is_fixed() {
        let labels: Vec<String> = build_pool(2).unwrap().operators().iter().map(|p| p.label()).collect();
        assert_eq!(labels, ["XI", "YI", "IX", "IY", "ZZ", "ZY", "YZ"]);
        assert_eq!(build_pool(5).unwrap(), build_pool(5).unwrap());
    }

    #[test]
    fn rejects_duplicates() {
        let x: PauliString = "XI".parse().unwrap();
        assert!(OperatorPool::from_operators(2, vec![x, x]).is_err());
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::pauli::{cnot_cost, PauliString};
use crate::state::{rotate_in_place, StateVector};

#[derive(Serialize, Deserialize)]
struct Entry(PauliString, f64);

/// Product of Pauli rotations `prod_mu exp(-i theta_mu P_mu)` acting on a
/// fixed reference state, with `P_1` applied first.
#[derive(Clone, Debug, PartialEq)]
pub struct Ansatz {
    reference: StateVector,
    generators: Vec<PauliString>,
    angles: Vec<f64>,
}

impl Ansatz {
    pub fn new(reference: StateVector) -> Self {
        Self {
            reference,
            generators: Vec::new(),
            angles: Vec::new(),
        }
    }

    /// Empty ansatz on `|+>^n`.
    pub fn plus(n_qubits: usize) -> Result<Self> {
        Ok(Self::new(StateVector::plus(n_qubits)?))
    }

    pub fn from_parts(reference: StateVector, generators: Vec<PauliString>, angles: Vec<f64>) -> Result<Self> {
        check_dim(generators.len(), angles.len())?;
        let mut ansatz = Self::new(reference);
        for (p, theta) in generators.into_iter().zip(angles) {
            ansatz.push(p, theta)?;
        }
        Ok(ansatz)
    }

    pub fn n_qubits(&self) -> usize {
        self.reference.n_qubits()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn reference(&self) -> &StateVector {
        &self.reference
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn push(&mut self, generator: PauliString, angle: f64) -> Result<()> {
        check_dim(self.n_qubits(), generator.n_qubits())?;
        if generator.is_identity() {
            return Err(Error::invalid("identity generator only adds a global phase"));
        }
        if !angle.is_finite() {
            return Err(Error::invalid(format!("non-finite angle {angle}")));
        }
        self.generators.push(generator);
        self.angles.push(angle);
        Ok(())
    }

    pub fn set_angles(&mut self, angles: &[f64]) -> Result<()> {
        check_dim(self.len(), angles.len())?;
        if let Some(bad) = angles.iter().find(|a| !a.is_finite()) {
            return Err(Error::invalid(format!("non-finite angle {bad}")));
        }
        self.angles.copy_from_slice(angles);
        Ok(())
    }

    /// `theta += scale * direction`.
    pub fn advance(&mut self, direction: &[f64], scale: f64) -> Result<()> {
        check_dim(self.len(), direction.len())?;
        let next: Vec<f64> = self.angles.iter().zip(direction).map(|(t, d)| t + scale * d).collect();
        self.set_angles(&next)
    }

    pub fn prepare(&self) -> StateVector {
        let mut amps = self.reference.amplitudes().to_vec();
        for (p, &theta) in self.generators.iter().zip(&self.angles) {
            rotate_in_place(p, theta, &mut amps);
        }
        StateVector::from_raw(self.n_qubits(), amps)
    }

    /// CNOTs needed to compile every rotation of the circuit.
    pub fn cnot_total(&self) -> u64 {
        self.generators.iter().map(cnot_cost).sum()
    }

    /// JSON list of `[label, angle]` pairs; the reference state is not stored.
    pub fn to_json(&self) -> Result<String> {
        let entries: Vec<Entry> = self.generators.iter().zip(&self.angles).map(|(p, &a)| Entry(*p, a)).collect();
        Ok(serde_json::to_string(&entries)?)
    }

    pub fn from_json(text: &str, reference: StateVector) -> Result<Self> {
        let entries: Vec<Entry> = serde_json::from_str(text)?;
        let (generators, angles) = entries.into_iter().map(|Entry(p, a)| (p, a)).unzip();
        Self::from_parts(reference, generators, angles)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn prepares_product_in_order() {
        let mut ansatz = Ansatz::new(StateVector::zero(2).unwrap());
        ansatz.push("YI".parse().unwrap(), FRAC_PI_4).unwrap();
        ansatz.push("XX".parse().unwrap(), 0.3).unwrap();
        let mut expected = StateVector::zero(2).unwrap();
        expected.rotate(&"YI".parse().unwrap(), FRAC_PI_4).unwrap();
        expected.rotate(&"XX".parse().unwrap(), 0.3).unwrap();
        assert_eq!(ansatz.prepare(), expected);
        assert_eq!(ansatz.cnot_total(), 2);
    }

    #[test]
    fn json_round_trip() {
        let mut ansatz = Ansatz::plus(3).unwrap();
        ansatz.push("ZIY".parse().unwrap(), -0.125).unwrap();
        ansatz.push("XII".parse().unwrap(), 1.5).unwrap();
        let text = ansatz.to_json().unwrap();
        assert_eq!(text, r#"[["ZIY",-0.125],["XII",1.5]]"#);
        let back = Ansatz::from_json(&text, StateVector::plus(3).unwrap()).unwrap();
        assert_eq!(back, ansatz);
        assert!(Ansatz::from_json(&text, StateVector::plus(2).unwrap()).is_err());
    }

    #[test]
    fn rejects_bad_generators() {
        let mut ansatz = Ansatz::plus(2).unwrap();
        assert!(ansatz.push("II".parse().unwrap(), 0.1).is_err());
        assert!(ansatz.push("XXX".parse().unwrap(), 0.1).is_err());
        assert!(ansatz.push("XX".parse().unwrap(), f64::NAN).is_err());
        assert!(ansatz.advance(&[1.0], 0.1).is_err());
    }
}

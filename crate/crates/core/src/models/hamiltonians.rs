use crate::error::{Error, Result};
use crate::operator::WeightedPauliSum;
use crate::pauli::{Pauli, PauliString};

use super::schedule::Schedule;
use super::sk::SkInstance;

fn check_s(s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::invalid(format!("schedule value {s} outside [0, 1]")));
    }
    Ok(())
}

fn single(n: usize, q: usize, p: Pauli) -> PauliString {
    PauliString::single(n, q, p).expect("qubit in range")
}

fn pair(n: usize, a: (usize, Pauli), b: (usize, Pauli)) -> PauliString {
    PauliString::pair(n, a, b).expect("distinct qubits in range")
}

/// Transverse-field driver `H_i = -sum_i X_i`.
pub fn driver_hamiltonian(n_qubits: usize) -> Result<WeightedPauliSum> {
    WeightedPauliSum::new(n_qubits, (0..n_qubits).map(|q| (-1.0, single(n_qubits, q, Pauli::X))))
}

/// Problem Hamiltonian `H_f = -sum_{i<j} J_ij Z_i Z_j - sum_i h_i Z_i`.
pub fn problem_hamiltonian(instance: &SkInstance) -> Result<WeightedPauliSum> {
    build_h_ad(instance, 1.0)
}

/// `H_AD(s) = (1 - s) H_i + s H_f`.
pub fn build_h_ad(instance: &SkInstance, s: f64) -> Result<WeightedPauliSum> {
    check_s(s)?;
    let n = instance.n_qubits();
    let driver = (0..n).map(|q| (-(1.0 - s), single(n, q, Pauli::X)));
    let couplings = instance
        .pairs()
        .map(|(i, j, c)| (-s * c, pair(n, (i, Pauli::Z), (j, Pauli::Z))));
    let fields = instance
        .fields()
        .iter()
        .enumerate()
        .map(|(q, &h)| (-s * h, single(n, q, Pauli::Z)));
    WeightedPauliSum::new(n, driver.chain(couplings).chain(fields))
}

/// First-order CD coefficient with the value of the denominator it used.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CdCoefficient {
    pub alpha: f64,
    /// Denominator `R` before flooring.
    pub r: f64,
    /// Whether `|R|` fell below the floor and was replaced by it.
    pub floored: bool,
}

/// `alpha_1(s) = -(1/4) [sum h^2 + 2 sum J^2] / R(s)` with
///
/// ```text
/// R(s) = (1 - 2s) [sum h^2 + 8 sum J^2]
///      + s^2 [sum h^2 + sum h^4 + 8 sum J^2 + 2 sum J^4
///             + 6 sum_i sum_{j != i} h_i^2 J_ij^2 + 6 (sum J^2)^2]
/// ```
///
/// where `sum J^k` runs over pairs `i < j`. `|R|` is floored at
/// `1e-9 * 8 sum J^2`.
pub fn cd_coefficient(instance: &SkInstance, s: f64) -> CdCoefficient {
    let n = instance.n_qubits();
    let h = instance.fields();
    let h2: f64 = h.iter().map(|v| v * v).sum();
    let h4: f64 = h.iter().map(|v| v.powi(4)).sum();
    let j2: f64 = instance.couplings().iter().map(|v| v * v).sum();
    let j4: f64 = instance.couplings().iter().map(|v| v.powi(4)).sum();
    let mut h2j2 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                h2j2 += h[i] * h[i] * instance.coupling(i, j).powi(2);
            }
        }
    }
    let r = (1.0 - 2.0 * s) * (h2 + 8.0 * j2)
        + s * s * (h2 + h4 + 8.0 * j2 + 2.0 * j4 + 6.0 * h2j2 + 6.0 * j2 * j2);
    let numerator = -0.25 * (h2 + 2.0 * j2);
    if numerator == 0.0 {
        return CdCoefficient {
            alpha: 0.0,
            r,
            floored: false,
        };
    }
    let floor = 1e-9 * 8.0 * j2;
    let floored = r.abs() < floor;
    let denominator = if floored { floor.copysign(r) } else { r };
    CdCoefficient {
        alpha: numerator / denominator,
        r,
        floored,
    }
}

pub fn cd_alpha1(instance: &SkInstance, s: f64) -> f64 {
    cd_coefficient(instance, s).alpha
}

/// First-order counterdiabatic term `s'(t) A^(1)` for the `H_AD` built by
/// [`build_h_ad`].
///
/// With `H_AD = s P - (1 - s) sum X` and `P = sum c_ij Z_i Z_j + sum g_i Z_i`
/// the first-order gauge potential is
/// `-2 alpha_1 [sum g_i Y_i + sum c_ij (Y_i Z_j + Z_i Y_j)]`.
/// Here `c_ij = -J_ij` and `g_i = -h_i`, so the term is
/// `+2 s' alpha_1 [sum h_i Y_i + sum J_ij (Y_i Z_j + Z_i Y_j)]`.
pub fn build_h_cd1(instance: &SkInstance, t: f64, total_time: f64) -> Result<WeightedPauliSum> {
    let schedule = Schedule::new(total_time)?;
    let s = schedule.s(t)?;
    let sdot = schedule.sdot(t)?;
    let n = instance.n_qubits();
    let scale = 2.0 * sdot * cd_alpha1(instance, s);
    let fields = instance
        .fields()
        .iter()
        .enumerate()
        .map(|(q, &h)| (scale * h, single(n, q, Pauli::Y)));
    let couplings = instance.pairs().flat_map(|(i, j, c)| {
        [
            (scale * c, pair(n, (i, Pauli::Y), (j, Pauli::Z))),
            (scale * c, pair(n, (i, Pauli::Z), (j, Pauli::Y))),
        ]
    });
    WeightedPauliSum::new(n, fields.chain(couplings))
}

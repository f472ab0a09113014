//! First-order Trotterized adiabatic (AD) and counterdiabatic (CD) baselines
//! with exact CNOT accounting.
//!
//! Each step starting at `t_k = k dt` applies, in order: the driver rotations
//! `exp(i (1 - s) dt X_i)`, the problem rotations `exp(i s dt J_ij Z_i Z_j)`
//! (and `exp(i s dt h_i Z_i)` for nonzero fields), and for CD the first-order
//! counterdiabatic rotations on `Y_i Z_j` and `Z_i Y_j` (and `Y_i` for nonzero
//! fields). Coefficients are evaluated at `t_k`; the last step is shortened
//! when `dt` does not divide `T`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{build_h_ad, cd_alpha1, Schedule, SkInstance};
use crate::oracle::{extremal_eigenvalues, ratio_from_bounds};
use crate::pauli::{cnot_cost, Pauli, PauliString};
use crate::state::StateVector;
use crate::trajectory::{mean_std, TrajectoryRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Protocol {
    #[serde(rename = "AD")]
    Ad,
    #[serde(rename = "CD")]
    Cd,
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::Ad => "AD",
            Protocol::Cd => "CD",
        })
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text.to_ascii_uppercase().as_str() {
            "AD" => Ok(Protocol::Ad),
            "CD" => Ok(Protocol::Cd),
            _ => Err(Error::invalid(format!("unknown protocol \"{text}\" (expected AD or CD)"))),
        }
    }
}

/// Gates applied by a Trotter circuit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateTally {
    pub cnot_count: u64,
    pub single_qubit_rotations: u64,
    pub two_qubit_rotations: u64,
    pub steps: u64,
}

impl GateTally {
    fn record(&mut self, generator: &PauliString) {
        self.cnot_count += cnot_cost(generator);
        match generator.weight() {
            0 => {}
            1 => self.single_qubit_rotations += 1,
            _ => self.two_qubit_rotations += 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordMode {
    /// Initial state plus every step.
    EveryStep,
    /// Only the state at `t = T`.
    FinalOnly,
}

#[derive(Clone, Debug)]
pub struct TrotterConfig {
    pub total_time: f64,
    pub dt: f64,
    pub record: RecordMode,
    /// Evaluate CD coefficients at the step midpoint instead of its start.
    pub cd_midpoint: bool,
}

impl TrotterConfig {
    pub const DEFAULT_DT: f64 = 0.01;

    pub fn new(total_time: f64) -> Self {
        Self {
            total_time,
            dt: Self::DEFAULT_DT,
            record: RecordMode::EveryStep,
            cd_midpoint: false,
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn final_only(mut self) -> Self {
        self.record = RecordMode::FinalOnly;
        self
    }
}

#[derive(Clone, Debug)]
pub struct TrotterRun {
    pub protocol: Protocol,
    pub state: StateVector,
    pub tally: GateTally,
    pub records: Vec<TrajectoryRecord>,
}

impl TrotterRun {
    pub fn final_record(&self) -> &TrajectoryRecord {
        self.records.last().expect("a run always records its final state")
    }

    pub fn final_ratio(&self) -> f64 {
        self.final_record().ratio
    }
}

fn pair(n: usize, a: (usize, Pauli), b: (usize, Pauli)) -> PauliString {
    PauliString::pair(n, a, b).expect("distinct qubits in range")
}

fn single(n: usize, q: usize, p: Pauli) -> PauliString {
    PauliString::single(n, q, p).expect("qubit in range")
}

/// Number of steps and the length of each; only the last may be shorter.
pub(crate) fn step_lengths(total_time: f64, dt: f64) -> impl Iterator<Item = (usize, f64, f64)> {
    let steps = (total_time / dt - 1e-9).ceil().max(1.0) as usize;
    (0..steps).map(move |k| {
        let start = k as f64 * dt;
        let len = if k + 1 == steps { total_time - start } else { dt };
        (k, start, len)
    })
}

fn record_state(instance: &SkInstance, psi: &StateVector, step: usize, t: f64, s: f64, cnot_total: u64) -> Result<TrajectoryRecord> {
    let hamiltonian = build_h_ad(instance, s)?;
    let compiled = hamiltonian.compile();
    let (energy, variance) = compiled.energy_and_variance(psi)?;
    let (e_min, e_max) = extremal_eigenvalues(&hamiltonian)?;
    let ratio = ratio_from_bounds(energy, e_min, e_max)?.clamp(0.0, 1.0);
    Ok(TrajectoryRecord {
        step,
        t,
        s,
        energy,
        variance,
        ratio,
        ansatz_size: 0,
        cnot_total,
        imag_steps: 0,
    })
}

/// Runs the Trotterized protocol from `|+>^n`.
pub fn run_trotter(instance: &SkInstance, protocol: Protocol, config: &TrotterConfig) -> Result<TrotterRun> {
    if !(config.dt > 0.0) || !config.dt.is_finite() {
        return Err(Error::invalid(format!("Trotter step must be positive, got {}", config.dt)));
    }
    let schedule = Schedule::new(config.total_time)?;
    let n = instance.n_qubits();
    let mut psi = StateVector::plus(n)?;
    let mut tally = GateTally::default();
    let mut records = Vec::new();
    if config.record == RecordMode::EveryStep {
        records.push(record_state(instance, &psi, 0, 0.0, 0.0, 0)?);
    }

    let drivers: Vec<PauliString> = (0..n).map(|q| single(n, q, Pauli::X)).collect();
    let zz: Vec<(PauliString, f64)> = instance
        .pairs()
        .map(|(i, j, c)| (pair(n, (i, Pauli::Z), (j, Pauli::Z)), c))
        .collect();
    let fields: Vec<(usize, f64)> = instance
        .fields()
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, h)| h != 0.0)
        .collect();
    let cd_pairs: Vec<(PauliString, PauliString, f64)> = instance
        .pairs()
        .map(|(i, j, c)| (pair(n, (i, Pauli::Y), (j, Pauli::Z)), pair(n, (i, Pauli::Z), (j, Pauli::Y)), c))
        .collect();

    let mut last_t = 0.0;
    for (k, t, h) in step_lengths(config.total_time, config.dt) {
        let s = schedule.s(t)?;
        for p in &drivers {
            psi.rotate(p, -(1.0 - s) * h)?;
            tally.record(p);
        }
        for (p, c) in &zz {
            psi.rotate(p, -s * c * h)?;
            tally.record(p);
        }
        for &(q, field) in &fields {
            let p = single(n, q, Pauli::Z);
            psi.rotate(&p, -s * field * h)?;
            tally.record(&p);
        }
        if protocol == Protocol::Cd {
            let t_cd = if config.cd_midpoint { t + 0.5 * h } else { t };
            let s_cd = schedule.s(t_cd)?;
            // Coefficient of every CD string is 2 s' alpha_1 times J_ij (or h_i).
            let scale = 2.0 * schedule.sdot(t_cd)? * cd_alpha1(instance, s_cd);
            for &(q, field) in &fields {
                let p = single(n, q, Pauli::Y);
                psi.rotate(&p, scale * field * h)?;
                tally.record(&p);
            }
            for (yz, zy, c) in &cd_pairs {
                psi.rotate(yz, scale * c * h)?;
                tally.record(yz);
                psi.rotate(zy, scale * c * h)?;
                tally.record(zy);
            }
        }
        tally.steps += 1;
        last_t = t + h;
        if config.record == RecordMode::EveryStep && last_t < config.total_time - 1e-12 {
            records.push(record_state(instance, &psi, k + 1, last_t, schedule.s(last_t)?, tally.cnot_count)?);
        }
    }
    psi.check_norm()?;
    let final_t = config.total_time;
    debug_assert!((last_t - final_t).abs() < 1e-9 * final_t.max(1.0));
    records.push(record_state(instance, &psi, tally.steps as usize, final_t, 1.0, tally.cnot_count)?);
    Ok(TrotterRun {
        protocol,
        state: psi,
        tally,
        records,
    })
}

/// Final outcome of one `(instance, protocol, T)` run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DilemmaRow {
    pub protocol: Protocol,
    pub n: usize,
    pub total_time: f64,
    pub seed: u64,
    pub r_final: f64,
    pub cnot_total: u64,
}

/// Ensemble statistics for one `(protocol, n, T)` cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DilemmaCell {
    pub protocol: Protocol,
    pub n: usize,
    pub total_time: f64,
    pub count: usize,
    pub mean_r: f64,
    pub std_r: f64,
    pub mean_cnot: f64,
}

#[derive(Clone, Debug, Default)]
pub struct DilemmaTable {
    pub rows: Vec<DilemmaRow>,
    pub cells: Vec<DilemmaCell>,
}

impl DilemmaTable {
    pub fn cell(&self, protocol: Protocol, n: usize, total_time: f64) -> Option<&DilemmaCell> {
        self.cells
            .iter()
            .find(|c| c.protocol == protocol && c.n == n && c.total_time == total_time)
    }

    /// Groups `rows` into cells ordered by protocol, n, then T.
    pub fn from_rows(rows: Vec<DilemmaRow>) -> Self {
        let mut keys: Vec<(Protocol, usize, f64)> = Vec::new();
        for row in &rows {
            let key = (row.protocol, row.n, row.total_time);
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
        keys.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)).then(a.2.total_cmp(&b.2)));
        let cells = keys
            .into_iter()
            .map(|(protocol, n, total_time)| {
                let members: Vec<&DilemmaRow> = rows
                    .iter()
                    .filter(|r| r.protocol == protocol && r.n == n && r.total_time == total_time)
                    .collect();
                let ratios: Vec<f64> = members.iter().map(|r| r.r_final).collect();
                let cnots: Vec<f64> = members.iter().map(|r| r.cnot_total as f64).collect();
                let (mean_r, std_r) = mean_std(&ratios);
                DilemmaCell {
                    protocol,
                    n,
                    total_time,
                    count: members.len(),
                    mean_r,
                    std_r,
                    mean_cnot: mean_std(&cnots).0,
                }
            })
            .collect();
        Self { rows, cells }
    }
}

/// Final approximation ratio for every `(instance, protocol, T)` combination.
pub fn dilemma_sweep(instances: &[SkInstance], total_times: &[f64], protocols: &[Protocol], dt: f64) -> Result<DilemmaTable> {
    if instances.is_empty() || total_times.is_empty() || protocols.is_empty() {
        return Err(Error::invalid("dilemma sweep needs nonempty instance, time and protocol grids"));
    }
    let mut rows = Vec::new();
    for instance in instances {
        for &protocol in protocols {
            for &total_time in total_times {
                let run = run_trotter(instance, protocol, &TrotterConfig::new(total_time).with_dt(dt).final_only())?;
                rows.push(DilemmaRow {
                    protocol,
                    n: instance.n_qubits(),
                    total_time,
                    seed: instance.seed(),
                    r_final: run.final_ratio(),
                    cnot_total: run.tally.cnot_count,
                });
            }
        }
    }
    Ok(DilemmaTable::from_rows(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::sample_sk;

    #[test]
    fn per_step_cnot_counts() {
        let inst = sample_sk(10, 0).unwrap();
        let ad = run_trotter(&inst, Protocol::Ad, &TrotterConfig::new(0.01).final_only()).unwrap();
        assert_eq!(ad.tally.steps, 1);
        assert_eq!(ad.tally.cnot_count, 90);
        assert_eq!(ad.tally.two_qubit_rotations, 45);
        assert_eq!(ad.tally.single_qubit_rotations, 10);
        let cd = run_trotter(&inst, Protocol::Cd, &TrotterConfig::new(0.01).final_only()).unwrap();
        assert_eq!(cd.tally.cnot_count, 270);
    }

    #[test]
    fn shortened_last_step() {
        let lengths: Vec<(usize, f64, f64)> = step_lengths(1.0, 0.3).collect();
        assert_eq!(lengths.len(), 4);
        assert!((lengths[3].2 - 0.1).abs() < 1e-12);
        assert_eq!(step_lengths(1.0, 0.01).count(), 100);
        assert_eq!(step_lengths(10.0, 0.01).count(), 1000);
    }

    #[test]
    fn records_every_step_with_valid_ratios() {
        let inst = sample_sk(4, 1).unwrap();
        let run = run_trotter(&inst, Protocol::Cd, &TrotterConfig::new(0.5).with_dt(0.1)).unwrap();
        assert_eq!(run.records.len(), 6);
        assert_eq!(run.records[0].ratio, 1.0);
        for (k, r) in run.records.iter().enumerate() {
            assert_eq!(r.step, k);
            assert!((0.0..=1.0).contains(&r.ratio));
        }
        assert_eq!(run.final_record().s, 1.0);
        assert!(run.records.windows(2).all(|w| w[0].cnot_total <= w[1].cnot_total));
    }

    #[test]
    fn rejects_bad_steps() {
        let inst = sample_sk(3, 1).unwrap();
        assert!(run_trotter(&inst, Protocol::Ad, &TrotterConfig::new(1.0).with_dt(0.0)).is_err());
        assert!(run_trotter(&inst, Protocol::Ad, &TrotterConfig::new(0.0)).is_err());
        assert!("XD".parse::<Protocol>().is_err());
        assert_eq!("cd".parse::<Protocol>().unwrap(), Protocol::Cd);
    }
}

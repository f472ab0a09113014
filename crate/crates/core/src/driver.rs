//! The hybrid real/imaginary-time loop and its real-time-only ablation.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{build_h_ad, build_pool, OperatorPool, Schedule, SkInstance};
use crate::operator::WeightedPauliSum;
use crate::oracle::{extremal_eigenvalues, ratio_from_bounds};
use crate::state::StateVector;
use crate::trajectory::TrajectoryRecord;
use crate::trotter::step_lengths;
use crate::variational::{imaginary_time_step_compiled, real_time_step_compiled, Ansatz, ExpansionConfig};
use crate::Complex64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub total_time: f64,
    pub dt: f64,
    pub dtau: f64,
    pub delta_cut: f64,
    pub eps_var: f64,
    /// Imaginary-time steps allowed per filtering block; zero disables filtering.
    pub k_max: usize,
    pub lambda: f64,
    pub max_generators: usize,
    /// Compute the instantaneous ratio at every record instead of only at `t = T`.
    pub ratio_every_step: bool,
}

impl RunConfig {
    pub fn new(total_time: f64) -> Self {
        Self {
            total_time,
            dt: 0.01,
            dtau: 0.05,
            delta_cut: 0.05,
            eps_var: 0.05,
            k_max: 11,
            lambda: 1e-6,
            max_generators: 500,
            ratio_every_step: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("T", self.total_time),
            ("dt", self.dt),
            ("dtau", self.dtau),
            ("delta_cut", self.delta_cut),
            ("eps_var", self.eps_var),
            ("lambda", self.lambda),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::invalid(format!("{name} must be positive and finite, got {value}")));
            }
        }
        if self.max_generators == 0 {
            return Err(Error::invalid("ansatz cap must be at least 1"));
        }
        Ok(())
    }

    fn expansion(&self) -> ExpansionConfig {
        ExpansionConfig {
            delta_cut: self.delta_cut,
            lambda: self.lambda,
            max_generators: self.max_generators,
        }
    }
}

/// Per-run health counters that are not part of the trajectory itself.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunDiagnostics {
    /// Real-time steps whose expansion ended with `Delta > delta_cut`.
    pub degraded_steps: usize,
    /// Largest McLachlan distance used for a real-time step.
    pub max_distance: f64,
    pub imaginary_steps: usize,
    /// Largest `<H>` increase over one imaginary-time step (negative when
    /// every step descended).
    pub max_energy_increase: f64,
    /// `cnot_total` grew during a filtering block (never expected).
    pub filtering_added_gates: bool,
}

#[derive(Clone, Debug)]
pub struct HavqdsRun {
    pub ansatz: Ansatz,
    pub records: Vec<TrajectoryRecord>,
    pub final_energy: f64,
    pub diagnostics: RunDiagnostics,
}

impl HavqdsRun {
    pub fn final_record(&self) -> &TrajectoryRecord {
        self.records.last().expect("a run always records its final state")
    }

    pub fn final_ratio(&self) -> f64 {
        self.final_record().ratio
    }

    pub fn cnot_total(&self) -> u64 {
        self.ansatz.cnot_total()
    }

    pub fn degraded(&self) -> bool {
        self.diagnostics.degraded_steps > 0
    }
}

fn ratio(hamiltonian: &WeightedPauliSum, energy: f64) -> Result<f64> {
    let (e_min, e_max) = extremal_eigenvalues(hamiltonian)?;
    Ok(ratio_from_bounds(energy, e_min, e_max)?.clamp(0.0, 1.0))
}

struct Recorder<'a> {
    instance: &'a SkInstance,
    ratio_every_step: bool,
}

impl Recorder<'_> {
    #[allow(clippy::too_many_arguments)]
    fn record(&self, step: usize, t: f64, s: f64, ansatz: &Ansatz, energy: f64, variance: f64, imag_steps: usize, last: bool) -> Result<TrajectoryRecord> {
        if !energy.is_finite() {
            return Err(Error::NonFiniteEnergy { step });
        }
        let ratio = if self.ratio_every_step || last {
            ratio(&build_h_ad(self.instance, s)?, energy)?
        } else {
            f64::NAN
        };
        Ok(TrajectoryRecord {
            step,
            t,
            s,
            energy,
            variance,
            ratio,
            ansatz_size: ansatz.len(),
            cnot_total: ansatz.cnot_total(),
            imag_steps,
        })
    }
}

fn run(instance: &SkInstance, config: &RunConfig, pool: &OperatorPool) -> Result<HavqdsRun> {
    config.validate()?;
    let schedule = Schedule::new(config.total_time)?;
    let n = instance.n_qubits();
    let expansion = config.expansion();
    let recorder = Recorder {
        instance,
        ratio_every_step: config.ratio_every_step,
    };
    let mut ansatz = Ansatz::plus(n)?;
    let mut diagnostics = RunDiagnostics {
        max_energy_increase: f64::NEG_INFINITY,
        ..RunDiagnostics::default()
    };
    let initial = build_h_ad(instance, 0.0)?.compile();
    let (e0, v0) = initial.energy_and_variance(&ansatz.prepare())?;
    let mut records = vec![recorder.record(0, 0.0, 0.0, &ansatz, e0, v0, 0, false)?];

    let steps: Vec<(usize, f64, f64)> = step_lengths(config.total_time, config.dt).collect();
    let mut final_energy = e0;
    for &(k, t, h) in &steps {
        let hamiltonian = build_h_ad(instance, schedule.s(t)?)?.compile();
        let outcome = real_time_step_compiled(&mut ansatz, &hamiltonian, pool, &expansion, h)?;
        if outcome.degraded {
            diagnostics.degraded_steps += 1;
        }
        diagnostics.max_distance = diagnostics.max_distance.max(outcome.distance);

        let step = k + 1;
        let last = step == steps.len();
        let t_next = if last { config.total_time } else { t + h };
        let s_next = if last { 1.0 } else { schedule.s(t_next)? };
        let hamiltonian = build_h_ad(instance, s_next)?.compile();
        let (mut energy, mut variance) = hamiltonian.energy_and_variance(&ansatz.prepare())?;
        let mut imag_steps = 0;
        if !last && variance > config.eps_var {
            let gates = ansatz.cnot_total();
            while variance > config.eps_var && imag_steps < config.k_max {
                let before = imaginary_time_step_compiled(&mut ansatz, &hamiltonian, config.lambda, config.dtau)?;
                (energy, variance) = hamiltonian.energy_and_variance(&ansatz.prepare())?;
                if !energy.is_finite() {
                    return Err(Error::NonFiniteEnergy { step });
                }
                diagnostics.max_energy_increase = diagnostics.max_energy_increase.max(energy - before.energy_before);
                imag_steps += 1;
            }
            diagnostics.imaginary_steps += imag_steps;
            diagnostics.filtering_added_gates |= ansatz.cnot_total() != gates;
        }
        records.push(recorder.record(step, t_next, s_next, &ansatz, energy, variance, imag_steps, last)?);
        final_energy = energy;
    }
    Ok(HavqdsRun {
        ansatz,
        records,
        final_energy,
        diagnostics,
    })
}

/// Hybrid loop: adaptive real-time steps under `H_AD(s(t))`, each followed
/// (except the last) by variance-triggered imaginary-time filtering.
pub fn run_havqds(instance: &SkInstance, config: &RunConfig) -> Result<HavqdsRun> {
    run(instance, config, &build_pool(instance.n_qubits())?)
}

/// The same loop with filtering disabled.
pub fn run_avqds_only(instance: &SkInstance, config: &RunConfig) -> Result<HavqdsRun> {
    let config = RunConfig { k_max: 0, ..config.clone() };
    run_havqds(instance, &config)
}

/// Magic bytes opening a binary amplitude dump.
pub const DUMP_MAGIC: [u8; 8] = *b"HVQDSAMP";
pub const DUMP_VERSION: u32 = 1;

/// Writes `psi` as: magic (8 bytes), version (u32), qubit count (u32),
/// amplitude count (u64), then interleaved real/imaginary f64 pairs, all
/// little-endian.
pub fn write_amplitudes<W: Write>(psi: &StateVector, mut out: W) -> Result<()> {
    out.write_all(&DUMP_MAGIC)?;
    out.write_all(&DUMP_VERSION.to_le_bytes())?;
    out.write_all(&(psi.n_qubits() as u32).to_le_bytes())?;
    out.write_all(&(psi.dim() as u64).to_le_bytes())?;
    for a in psi.amplitudes() {
        out.write_all(&a.re.to_le_bytes())?;
        out.write_all(&a.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_amplitudes<R: Read>(mut input: R) -> Result<StateVector> {
    let mut magic = [0u8; 8];
    input.read_exact(&mut magic)?;
    if magic != DUMP_MAGIC {
        return Err(Error::invalid("not an amplitude dump"));
    }
    let mut word = [0u8; 4];
    input.read_exact(&mut word)?;
    let version = u32::from_le_bytes(word);
    if version != DUMP_VERSION {
        return Err(Error::invalid(format!("unsupported dump version {version}")));
    }
    input.read_exact(&mut word)?;
    let n_qubits = u32::from_le_bytes(word) as usize;
    let mut long = [0u8; 8];
    input.read_exact(&mut long)?;
    let dim = u64::from_le_bytes(long) as usize;
    if n_qubits == 0 || n_qubits > StateVector::<f64>::MAX_QUBITS || dim != 1usize << n_qubits {
        return Err(Error::invalid(format!("inconsistent header: {n_qubits} qubits, {dim} amplitudes")));
    }
    let mut amplitudes = Vec::with_capacity(dim);
    let mut pair = [0u8; 16];
    for _ in 0..dim {
        input.read_exact(&mut pair)?;
        let re = f64::from_le_bytes(pair[..8].try_into().expect("8 bytes"));
        let im = f64::from_le_bytes(pair[8..].try_into().expect("8 bytes"));
        amplitudes.push(Complex64::new(re, im));
    }
    StateVector::from_amplitudes(amplitudes)
}

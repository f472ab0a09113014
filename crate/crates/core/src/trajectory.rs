use serde::{Deserialize, Serialize};

/// One logged point along a Trotter or variational trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub step: usize,
    pub t: f64,
    pub s: f64,
    /// `<H_AD(s)>` of the state of record.
    pub energy: f64,
    pub variance: f64,
    /// Instantaneous approximation ratio; NaN when spectra were not computed.
    pub ratio: f64,
    pub ansatz_size: usize,
    pub cnot_total: u64,
    /// Imaginary-time steps taken in the filtering block that ended here.
    pub imag_steps: usize,
}

/// Sample mean and (n - 1)-normalized standard deviation; the deviation of a
/// single sample is zero.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

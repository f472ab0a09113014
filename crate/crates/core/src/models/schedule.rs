use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// `s(t) = sin^2(pi t / 2T)`, which has `s(0) = 0`, `s(T) = 1` and vanishing
/// slope at both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schedule {
    total_time: f64,
}

impl Schedule {
    pub fn new(total_time: f64) -> Result<Self> {
        if !(total_time > 0.0) || !total_time.is_finite() {
            return Err(Error::invalid(format!("total time must be positive, got {total_time}")));
        }
        Ok(Self { total_time })
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    fn check(&self, t: f64) -> Result<f64> {
        // Accumulated step sizes may overshoot the endpoints by round-off.
        let slack = 1e-9 * self.total_time;
        if !(t >= -slack && t <= self.total_time + slack) {
            return Err(Error::invalid(format!("time {t} outside [0, {}]", self.total_time)));
        }
        Ok(t.clamp(0.0, self.total_time))
    }

    pub fn s(&self, t: f64) -> Result<f64> {
        let t = self.check(t)?;
        Ok((FRAC_PI_2 * t / self.total_time).sin().powi(2))
    }

    /// `ds/dt = (pi / 2T) sin(pi t / T)`.
    pub fn sdot(&self, t: f64) -> Result<f64> {
        let t = self.check(t)?;
        Ok(FRAC_PI_2 / self.total_time * (PI * t / self.total_time).sin())
    }
}

pub fn schedule_s(t: f64, total_time: f64) -> Result<f64> {
    Schedule::new(total_time)?.s(t)
}

pub fn schedule_sdot(t: f64, total_time: f64) -> Result<f64> {
    Schedule::new(total_time)?.sdot(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_values() {
        assert_eq!(schedule_s(0.0, 3.0).unwrap(), 0.0);
        assert_eq!(schedule_sdot(0.0, 3.0).unwrap(), 0.0);
        assert!((schedule_s(3.0, 3.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(schedule_sdot(3.0, 3.0).unwrap().abs() < 1e-15);
        assert!((schedule_s(1.5, 3.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((schedule_sdot(0.5, 1.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(schedule_s(-0.1, 1.0).is_err());
        assert!(schedule_s(1.1, 1.0).is_err());
        assert!(schedule_sdot(0.5, 0.0).is_err());
        // Round-off overshoot is tolerated and clamped.
        assert!((schedule_s(1.0 + 1e-12, 1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let schedule = Schedule::new(2.7).unwrap();
        let h = 1e-6;
        for k in 0..100 {
            let t = 0.01 + (2.7 - 0.02) * k as f64 / 99.0;
            let fd = (schedule.s(t + h).unwrap() - schedule.s(t - h).unwrap()) / (2.0 * h);
            assert!((fd - schedule.sdot(t).unwrap()).abs() < 1e-8, "t = {t}");
        }
    }
}

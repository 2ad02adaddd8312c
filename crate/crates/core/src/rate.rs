//! Efficiency budget and n-fold coincidence rate.
//!
//! The model is purely multiplicative: each of `n` photons independently
//! survives the source, every loop circulation and the detector, so
//!
//! ```text
//! rate(n) = trial_rate · η_total^n
//! η_total = source · loop_transmission^loops · detector
//! trial_rate = rep_rate / (bins_per_trial · (loops + overhead_loops))
//! ```
//!
//! No multi-photon emission, pile-up or post-selection combinatorics are
//! included, so absolute numbers are order-of-magnitude estimates only.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SECONDS_PER_HOUR: f64 = 3600.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyBudget {
    /// Laser repetition rate (Hz).
    pub rep_rate_hz: f64,
    /// Probability per trigger that a photon reaches the loop input.
    pub source_eff: f64,
    /// Transmission of one loop circulation.
    pub loop_transmission: f64,
    pub detector_eff: f64,
    pub loops: u32,
    /// Time bins loaded per experimental period.
    pub bins_per_trial: u32,
    /// Extra circulations spent on injection and ejection.
    pub overhead_loops: u32,
}

impl EfficiencyBudget {
    /// Figures of the demonstrated apparatus: 76.4 MHz, 13.9 % source,
    /// 83.4 % per loop, 33 % detection; 10-bin ring circulated 5 times.
    pub fn current() -> Self {
        Self {
            rep_rate_hz: 76.4e6,
            source_eff: 0.139,
            loop_transmission: 0.834,
            detector_eff: 0.33,
            loops: 5,
            bins_per_trial: 10,
            overhead_loops: 2,
        }
    }

    /// Projected upgrade for 20 photons: 60 % source, 95 % detection,
    /// 99 % per loop, 20 bins circulated 20 times.
    pub fn projected() -> Self {
        Self {
            rep_rate_hz: 76.4e6,
            source_eff: 0.6,
            loop_transmission: 0.99,
            detector_eff: 0.95,
            loops: 20,
            bins_per_trial: 20,
            overhead_loops: 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("source_eff", self.source_eff),
            ("loop_transmission", self.loop_transmission),
            ("detector_eff", self.detector_eff),
        ] {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::domain(format!("{name} must lie in (0, 1], got {p}")));
            }
        }
        if !(self.rep_rate_hz.is_finite() && self.rep_rate_hz > 0.0) {
            return Err(Error::domain(format!("repetition rate must be positive, got {}", self.rep_rate_hz)));
        }
        if self.trial_period_slots() == 0 {
            return Err(Error::domain("trial period is zero slots"));
        }
        Ok(())
    }

    pub fn trial_period_slots(&self) -> u64 {
        u64::from(self.bins_per_trial) * u64::from(self.loops + self.overhead_loops)
    }

    pub fn trial_rate_hz(&self) -> f64 {
        self.rep_rate_hz / self.trial_period_slots() as f64
    }

    /// Single-photon end-to-end efficiency.
    pub fn eta_total(&self) -> f64 {
        self.source_eff * self.loop_transmission.powi(self.loops as i32) * self.detector_eff
    }
}

/// n-fold coincidences per second.
pub fn n_fold_rate(budget: &EfficiencyBudget, n: u32) -> f64 {
    budget.trial_rate_hz() * budget.eta_total().powi(n as i32)
}

pub fn n_fold_rate_per_hour(budget: &EfficiencyBudget, n: u32) -> f64 {
    n_fold_rate(budget, n) * SECONDS_PER_HOUR
}

/// `rate_a(n) / rate_b(n)`
pub fn compare_rates(a: &EfficiencyBudget, b: &EfficiencyBudget, n: u32) -> f64 {
    n_fold_rate(a, n) / n_fold_rate(b, n)
}

/// Per-loop transmission at which `budget` reaches `target_hz` for `n` photons,
/// all other fields held fixed.
pub fn required_loop_transmission(budget: &EfficiencyBudget, n: u32, target_hz: f64) -> Result<f64> {
    budget.validate()?;
    if n == 0 || budget.loops == 0 {
        return Err(Error::domain("solving for loop transmission needs n >= 1 and at least one loop"));
    }
    if !(target_hz.is_finite() && target_hz > 0.0) {
        return Err(Error::domain(format!("target rate must be positive, got {target_hz}")));
    }
    let eta_needed = (target_hz / budget.trial_rate_hz()).powf(1.0 / n as f64);
    let t = (eta_needed / (budget.source_eff * budget.detector_eff)).powf(1.0 / budget.loops as f64);
    if t > 1.0 {
        return Err(Error::Refusal(format!(
            "target unreachable: needs loop transmission {t:.6} > 1"
        )));
    }
    Ok(t)
}

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use super::{enumerate_output_configurations, probability, EventLog, Model, SamplingInstance};
use crate::error::{Error, Result};
use crate::linalg::ModeConfiguration;

/// Allowed deviation of a distribution's total mass from 1.
pub const NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistributionKind {
    Indistinguishable,
    Distinguishable,
    Partial,
    Uniform,
    Gaussian,
    Empirical,
    /// Loaded from a file; provenance unknown.
    External,
}

impl fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DistributionKind::Indistinguishable => "indistinguishable",
            DistributionKind::Distinguishable => "distinguishable",
            DistributionKind::Partial => "partial",
            DistributionKind::Uniform => "uniform",
            DistributionKind::Gaussian => "gaussian",
            DistributionKind::Empirical => "empirical",
            DistributionKind::External => "external",
        };
        f.write_str(s)
    }
}

/// Normalized probability table over an ordered list of output configurations.
#[derive(Clone, Debug)]
pub struct Distribution {
    configs: Vec<ModeConfiguration>,
    probs: Vec<f64>,
    kind: DistributionKind,
    index: HashMap<ModeConfiguration, usize>,
}

impl PartialEq for Distribution {
    fn eq(&self, other: &Self) -> bool {
        self.configs == other.configs && self.probs == other.probs && self.kind == other.kind
    }
}

impl Distribution {
    pub fn new(configs: Vec<ModeConfiguration>, probs: Vec<f64>, kind: DistributionKind) -> Result<Self> {
        if configs.is_empty() || configs.len() != probs.len() {
            return Err(Error::domain(format!(
                "{} configurations but {} probabilities",
                configs.len(),
                probs.len()
            )));
        }
        let (m, n) = (configs[0].modes(), configs[0].photons());
        if configs.iter().any(|c| c.modes() != m || c.photons() != n) {
            return Err(Error::domain("configurations disagree on mode or photon count"));
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::domain(format!("invalid probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::domain(format!("probabilities sum to {total}, not 1")));
        }
        let index: HashMap<_, _> = configs.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        if index.len() != configs.len() {
            return Err(Error::domain("duplicate configuration in distribution"));
        }
        Ok(Self { configs, probs, kind, index })
    }

    /// Normalizes non-negative weights over `configs`.
    pub fn from_weights(configs: Vec<ModeConfiguration>, weights: Vec<f64>, kind: DistributionKind) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::domain(format!("weights sum to {total}")));
        }
        Self::new(configs, weights.iter().map(|w| w / total).collect(), kind)
    }

    pub fn uniform(m: usize, n: usize) -> Self {
        let configs = enumerate_output_configurations(m, n);
        let p = 1.0 / configs.len() as f64;
        let probs = vec![p; configs.len()];
        Self::new(configs, probs, DistributionKind::Uniform).expect("uniform table is valid")
    }

    pub fn point_mass(configs: Vec<ModeConfiguration>, at: &ModeConfiguration) -> Result<Self> {
        let probs = configs.iter().map(|c| if c == at { 1.0 } else { 0.0 }).collect();
        Self::new(configs, probs, DistributionKind::External)
    }

    /// Observed frequencies of `events` over the support of `support`.
    pub fn empirical(support: &Distribution, events: &EventLog) -> Result<Self> {
        if events.is_empty() {
            return Err(Error::domain("no events to tabulate"));
        }
        let mut counts = vec![0usize; support.len()];
        for ev in events.events() {
            let i = support
                .position(ev)
                .ok_or_else(|| Error::domain(format!("event {ev} outside the distribution support")))?;
            counts[i] += 1;
        }
        let total = events.len() as f64;
        let probs = counts.iter().map(|&c| c as f64 / total).collect();
        Self::new(support.configs.clone(), probs, DistributionKind::Empirical)
    }

    pub fn configs(&self) -> &[ModeConfiguration] {
        &self.configs
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn kind(&self) -> DistributionKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn modes(&self) -> usize {
        self.configs[0].modes()
    }

    pub fn photons(&self) -> usize {
        self.configs[0].photons()
    }

    pub fn position(&self, config: &ModeConfiguration) -> Option<usize> {
        self.index.get(config).copied()
    }

    /// Probability of `config`, or `None` if it lies outside the support.
    pub fn get(&self, config: &ModeConfiguration) -> Option<f64> {
        self.position(config).map(|i| self.probs[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ModeConfiguration, f64)> {
        self.configs.iter().zip(self.probs.iter().copied())
    }

    pub fn same_support(&self, other: &Distribution) -> bool {
        self.configs == other.configs
    }
}

fn raw_probabilities(inst: &SamplingInstance, model: &Model) -> Result<(Vec<ModeConfiguration>, Vec<f64>)> {
    let configs = enumerate_output_configurations(inst.modes(), inst.photons());
    let probs = configs
        .par_iter()
        .map(|t| probability(inst, t, model))
        .collect::<Result<Vec<f64>>>()?;
    Ok((configs, probs))
}

/// Exact distribution over every output configuration.
///
/// The instance must be unitary; the table is checked, not rescaled.
pub fn output_distribution(inst: &SamplingInstance, model: &Model) -> Result<Distribution> {
    if !inst.is_unitary() {
        return Err(Error::domain("lossy instance: use post_selected_distribution"));
    }
    let (configs, probs) = raw_probabilities(inst, model)?;
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::Consistency(format!("output distribution sums to {total}")));
    }
    Distribution::new(configs, probs, model.kind())
}

/// Distribution conditioned on detecting all `n` photons.
pub fn post_selected_distribution(inst: &SamplingInstance, model: &Model) -> Result<Distribution> {
    let (configs, probs) = raw_probabilities(inst, model)?;
    Distribution::from_weights(configs, probs, model.kind())
}

fn check_supports(p: &Distribution, q: &Distribution) -> Result<()> {
    if p.same_support(q) {
        Ok(())
    } else {
        Err(Error::domain("distributions have different supports"))
    }
}

/// `F = Σ_i √(p_i q_i)`
pub fn fidelity(p: &Distribution, q: &Distribution) -> Result<f64> {
    check_supports(p, q)?;
    let f: f64 = p.probs.iter().zip(&q.probs).map(|(a, b)| (a * b).sqrt()).sum();
    Ok(f.clamp(0.0, 1.0))
}

/// `½ Σ_i |p_i - q_i|`
pub fn total_variation(p: &Distribution, q: &Distribution) -> Result<f64> {
    check_supports(p, q)?;
    let d: f64 = p.probs.iter().zip(&q.probs).map(|(a, b)| (a - b).abs()).sum();
    Ok((0.5 * d).clamp(0.0, 1.0))
}

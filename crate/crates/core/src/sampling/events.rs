use rand::Rng;

use super::Distribution;
use crate::linalg::ModeConfiguration;
use crate::seeded_rng;

/// Ordered record of sampled output configurations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventLog {
    events: Vec<ModeConfiguration>,
    seed: Option<u64>,
}

impl EventLog {
    pub fn new(events: Vec<ModeConfiguration>, seed: Option<u64>) -> Self {
        Self { events, seed }
    }

    pub fn events(&self) -> &[ModeConfiguration] {
        &self.events
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// The first `k` events (or all, if fewer).
    pub fn prefix(&self, k: usize) -> EventLog {
        Self { events: self.events[..k.min(self.len())].to_vec(), seed: self.seed }
    }
}

/// `count` i.i.d. draws from `dist`, deterministic in `seed`.
pub fn draw_events(dist: &Distribution, count: usize, seed: u64) -> EventLog {
    let mut rng = seeded_rng(seed);
    let mut log = draw_events_with(dist, count, &mut rng);
    log.seed = Some(seed);
    log
}

/// Inverse-CDF sampling over the distribution's configuration order.
pub fn draw_events_with<R: Rng + ?Sized>(dist: &Distribution, count: usize, rng: &mut R) -> EventLog {
    let probs = dist.probabilities();
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in probs {
        acc += p;
        cdf.push(acc);
    }
    let total = acc;
    // rounding can leave u just past the final cumulative value
    let last_nonzero = probs.iter().rposition(|&p| p > 0.0).unwrap_or(probs.len() - 1);
    let events = (0..count)
        .map(|_| {
            let u = rng.random::<f64>() * total;
            let i = cdf.partition_point(|&c| c <= u).min(last_nonzero);
            dist.configs()[i].clone()
        })
        .collect();
    EventLog { events, seed: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::UnitaryMatrix;
    use crate::sampling::{enumerate_output_configurations, output_distribution, Model, SamplingInstance};

    fn cfg(v: &[usize]) -> ModeConfiguration {
        ModeConfiguration::new(v.to_vec())
    }

    #[test]
    fn point_mass_repeats() {
        let d = Distribution::point_mass(enumerate_output_configurations(3, 2), &cfg(&[0, 1, 1])).unwrap();
        let log = draw_events(&d, 5, 1);
        assert_eq!(log.events(), vec![cfg(&[0, 1, 1]); 5].as_slice());
    }

    #[test]
    fn zero_count_is_empty() {
        assert!(draw_events(&Distribution::uniform(4, 2), 0, 9).is_empty());
    }

    #[test]
    fn hom_sampling_never_coincides() {
        let inst = SamplingInstance::new(&UnitaryMatrix::hadamard(), cfg(&[1, 1])).unwrap();
        let d = output_distribution(&inst, &Model::Indistinguishable).unwrap();
        let n = 10_000;
        let log = draw_events(&d, n, 3);
        assert!(log.events().iter().all(|e| e != &cfg(&[1, 1])));
        let bunched = log.events().iter().filter(|e| *e == &cfg(&[2, 0])).count() as f64;
        // binomial(n, 1/2): σ = √n / 2
        let sigma = (n as f64).sqrt() / 2.0;
        assert!((bunched - n as f64 / 2.0).abs() < 4.0 * sigma);
    }

    #[test]
    fn deterministic_in_seed() {
        let d = Distribution::uniform(5, 3);
        assert_eq!(draw_events(&d, 50, 12), draw_events(&d, 50, 12));
        assert_ne!(draw_events(&d, 50, 12), draw_events(&d, 50, 13));
    }
}

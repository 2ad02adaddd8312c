//! Exact output distributions of n photons through an m-mode network and
//! seeded event sampling.
//!
//! Three photon models are supported: ideal indistinguishable bosons,
//! fully distinguishable particles, and partial distinguishability described
//! by a Gram matrix of internal-state overlaps.

mod csv_io;
mod distribution;
mod events;
mod gram;
mod probability;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ModeConfiguration, UnitaryMatrix};

pub use csv_io::{read_distribution, read_event_log, write_distribution, write_event_log};
pub use distribution::{
    fidelity, output_distribution, post_selected_distribution, total_variation, Distribution,
    DistributionKind, NORMALIZATION_TOL,
};
pub use events::{draw_events, draw_events_with, EventLog};
pub use gram::GramMatrix;
pub use probability::{
    probability, probability_distinguishable, probability_indistinguishable, probability_partial,
    PARTIAL_MAX_PHOTONS,
};

/// A fixed input state injected into a fixed network.
///
/// The matrix is normally unitary; [`SamplingInstance::lossy`] admits a
/// sub-unitary matrix for post-selection studies.
#[derive(Clone, Debug)]
pub struct SamplingInstance {
    matrix: ComplexMatrix,
    input: ModeConfiguration,
    unitary: bool,
}

impl SamplingInstance {
    pub fn new(u: &UnitaryMatrix, input: ModeConfiguration) -> Result<Self> {
        Self::build(u.as_matrix().clone(), input, true)
    }

    pub fn lossy(matrix: ComplexMatrix, input: ModeConfiguration) -> Result<Self> {
        Self::build(matrix, input, false)
    }

    fn build(matrix: ComplexMatrix, input: ModeConfiguration, unitary: bool) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::domain("network matrix must be square"));
        }
        if input.modes() != matrix.rows() {
            return Err(Error::domain(format!(
                "input has {} modes, network has {}",
                input.modes(),
                matrix.rows()
            )));
        }
        if input.photons() == 0 {
            return Err(Error::domain("input must carry at least one photon"));
        }
        Ok(Self { matrix, input, unitary })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn input(&self) -> &ModeConfiguration {
        &self.input
    }

    pub fn modes(&self) -> usize {
        self.matrix.rows()
    }

    pub fn photons(&self) -> usize {
        self.input.photons()
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }
}

/// Photon model used to evaluate output probabilities.
#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Indistinguishable,
    Distinguishable,
    Partial(GramMatrix),
}

impl Model {
    pub fn kind(&self) -> DistributionKind {
        match self {
            Model::Indistinguishable => DistributionKind::Indistinguishable,
            Model::Distinguishable => DistributionKind::Distinguishable,
            Model::Partial(_) => DistributionKind::Partial,
        }
    }
}

/// All occupation vectors of `n` photons over `m` modes, collisions included.
///
/// Ordered lexicographically by the ascending list of occupied mode indices,
/// e.g. `(2,0), (1,1), (0,2)` for two photons in two modes. There are
/// `C(m+n-1, n)` of them.
pub fn enumerate_output_configurations(m: usize, n: usize) -> Vec<ModeConfiguration> {
    assert!(m >= 1, "need at least one mode");
    (0..m)
        .combinations_with_replacement(n)
        .map(|modes| ModeConfiguration::from_modes(m, &modes).expect("mode indices in range"))
        .collect()
}

/// `C(m+n-1, n)`
pub fn configuration_count(m: usize, n: usize) -> usize {
    (1..=n).fold(1usize, |acc, k| acc * (m + k - 1) / k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_small_cases() {
        let two = enumerate_output_configurations(2, 1);
        assert_eq!(two, vec![ModeConfiguration::new(vec![1, 0]), ModeConfiguration::new(vec![0, 1])]);
        let hom = enumerate_output_configurations(2, 2);
        let text: Vec<String> = hom.iter().map(|c| c.to_string()).collect();
        assert_eq!(text, ["2-0", "1-1", "0-2"]);
        assert_eq!(enumerate_output_configurations(6, 3).len(), 56);
        assert_eq!(enumerate_output_configurations(8, 4).len(), 330);
        assert_eq!(enumerate_output_configurations(4, 0).len(), 1);
    }

    #[test]
    fn count_formula_matches_enumeration() {
        for m in 1..7 {
            for n in 0..6 {
                assert_eq!(configuration_count(m, n), enumerate_output_configurations(m, n).len());
            }
        }
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        let all = enumerate_output_configurations(5, 3);
        for w in all.windows(2) {
            assert!(w[0].expanded() < w[1].expanded());
        }
        assert!(all.iter().all(|c| c.photons() == 3));
    }

    #[test]
    fn instance_validation() {
        let u = UnitaryMatrix::identity(3);
        assert!(SamplingInstance::new(&u, ModeConfiguration::new(vec![1, 0])).is_err());
        assert!(SamplingInstance::new(&u, ModeConfiguration::new(vec![0, 0, 0])).is_err());
        let inst = SamplingInstance::new(&u, ModeConfiguration::new(vec![1, 0, 1])).unwrap();
        assert_eq!((inst.modes(), inst.photons()), (3, 2));
    }
}

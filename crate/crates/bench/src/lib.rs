//! Shared fixtures for the benchmarks.

use timebin::compiler::{example_schedule, ExampleCircuit};
use timebin::linalg::haar_random_unitary;
use timebin::sampling::SamplingInstance;
use timebin::{ComplexMatrix, ModeConfiguration};

/// Leading `n × n` block of a Haar unitary.
pub fn haar_block(n: usize, seed: u64) -> ComplexMatrix {
    let u = haar_random_unitary(n.max(1) * 2, seed).expect("haar");
    let idx: Vec<usize> = (0..n).collect();
    u.select(&idx, &idx)
}

/// `n` photons in the first modes of an `m`-mode Haar network.
pub fn haar_instance(n: usize, m: usize, seed: u64) -> SamplingInstance {
    let u = haar_random_unitary(m, seed).expect("haar");
    let input = ModeConfiguration::from_modes(m, &(0..n).collect::<Vec<_>>()).expect("input");
    SamplingInstance::new(&u, input).expect("instance")
}

pub fn example(n: usize, m: usize) -> ExampleCircuit {
    example_schedule(n, m, 1).expect("example schedule")
}

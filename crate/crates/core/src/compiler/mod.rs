//! Pulse schedules for the fiber-loop apparatus and their compilation into
//! the equivalent multimode network.
//!
//! A ring of `K` time-bin slots circulates `N` times. Each slot carries two
//! rail modes, horizontal and vertical polarization, flattened as
//! `(slot - 1) * 2 + rail`. One pass applies a programmable rotation
//! `R(θ, φ)` to every slot's (H, V) pair and then delays the V rail by one
//! bin; the delay wraps from slot `K` back to slot 1.
//!
//! Pass 1 acts first, so the network after `N` loops is
//! `pass_N · … · pass_1`.

mod schedule_file;

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_unitary, is_fully_connected, ComplexMatrix, ModeConfiguration, UnitaryMatrix};
use crate::seeded_rng;

pub use schedule_file::ScheduleFile;

pub const DEFAULT_SLOTS: usize = 10;
pub const DEFAULT_BIN_NS: f64 = 13.0;

/// Closure tolerance used by [`example_schedule`].
pub const EXAMPLE_CLOSURE_TOL: f64 = 1e-8;
/// Connectivity threshold used by [`example_schedule`].
pub const EXAMPLE_CONNECTIVITY: f64 = 1e-3;
const EXAMPLE_ATTEMPTS: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rail {
    H,
    V,
}

impl Rail {
    fn bit(self) -> usize {
        match self {
            Rail::H => 0,
            Rail::V => 1,
        }
    }
}

/// A (slot, rail) mode; slots are numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RailMode {
    pub slot: usize,
    pub rail: Rail,
}

impl RailMode {
    pub fn new(slot: usize, rail: Rail) -> Self {
        Self { slot, rail }
    }

    pub fn from_index(index: usize) -> Self {
        let rail = if index.is_multiple_of(2) { Rail::H } else { Rail::V };
        Self { slot: index / 2 + 1, rail }
    }

    /// Zero-based flattened index into the `2K` network modes.
    pub fn index(self) -> usize {
        (self.slot - 1) * 2 + self.rail.bit()
    }

    fn check(self, slots: usize) -> Result<()> {
        if self.slot == 0 || self.slot > slots {
            return Err(Error::domain(format!("slot {} outside 1..={slots}", self.slot)));
        }
        Ok(())
    }
}

impl fmt::Display for RailMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.slot, self.rail)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoopConfig {
    pub slots: usize,
    pub loops: usize,
    pub bin_ns: f64,
    pub injection: Vec<RailMode>,
}

impl LoopConfig {
    pub fn new(slots: usize, loops: usize, injection: Vec<RailMode>) -> Result<Self> {
        let cfg = Self { slots, loops, bin_ns: DEFAULT_BIN_NS, injection };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.slots == 0 || self.loops == 0 {
            return Err(Error::domain("loop config needs at least one slot and one loop"));
        }
        if !(self.bin_ns.is_finite() && self.bin_ns > 0.0) {
            return Err(Error::domain(format!("bin duration must be positive, got {}", self.bin_ns)));
        }
        let mut seen = vec![false; self.slots + 1];
        for mode in &self.injection {
            mode.check(self.slots)?;
            if std::mem::replace(&mut seen[mode.slot], true) {
                return Err(Error::domain(format!("slot {} injected twice", mode.slot)));
            }
        }
        Ok(())
    }

    pub fn modes(&self) -> usize {
        2 * self.slots
    }

    /// Injected photons as a configuration over the positions of `subset`.
    pub fn input_configuration(&self, subset: &[RailMode]) -> Result<ModeConfiguration> {
        let positions = self
            .injection
            .iter()
            .map(|mode| {
                subset
                    .iter()
                    .position(|s| s == mode)
                    .ok_or_else(|| Error::domain(format!("injected mode {mode} is not in the mode subset")))
            })
            .collect::<Result<Vec<_>>>()?;
        ModeConfiguration::from_modes(subset.len(), &positions)
    }

    /// Every rail mode of the ring, in flattened order.
    pub fn all_modes(&self) -> Vec<RailMode> {
        (0..self.modes()).map(RailMode::from_index).collect()
    }
}

/// Per-loop, per-slot rotation angles and phases (radians).
#[derive(Clone, Debug, PartialEq)]
pub struct PulseSchedule {
    pub angles: Vec<Vec<f64>>,
    pub phases: Vec<Vec<f64>>,
}

impl PulseSchedule {
    pub fn new(angles: Vec<Vec<f64>>, phases: Vec<Vec<f64>>) -> Result<Self> {
        let s = Self { angles, phases };
        if s.angles.len() != s.phases.len() {
            return Err(Error::domain("angle and phase tables have different loop counts"));
        }
        for (a, p) in s.angles.iter().zip(&s.phases) {
            if a.len() != p.len() {
                return Err(Error::domain("angle and phase rows have different lengths"));
            }
            if a.iter().chain(p).any(|x| !x.is_finite()) {
                return Err(Error::domain("schedule contains a non-finite value"));
            }
        }
        Ok(s)
    }

    /// Angles only, with all phases zero.
    pub fn from_angles(angles: Vec<Vec<f64>>) -> Result<Self> {
        let phases = angles.iter().map(|row| vec![0.0; row.len()]).collect();
        Self::new(angles, phases)
    }

    pub fn zeros(loops: usize, slots: usize) -> Self {
        Self {
            angles: vec![vec![0.0; slots]; loops],
            phases: vec![vec![0.0; slots]; loops],
        }
    }

    pub fn loops(&self) -> usize {
        self.angles.len()
    }

    fn check_against(&self, config: &LoopConfig) -> Result<()> {
        if self.loops() != config.loops || self.angles.iter().any(|row| row.len() != config.slots) {
            return Err(Error::domain(format!(
                "schedule shape does not match {} loops x {} slots",
                config.loops, config.slots
            )));
        }
        Ok(())
    }
}

/// `R(θ, φ) = [[cos θ, -e^{iφ} sin θ], [e^{-iφ} sin θ, cos θ]]` on (H, V).
pub fn rotation(theta: f64, phi: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    [
        [Complex64::new(c, 0.0), -e * s],
        [e.conj() * s, Complex64::new(c, 0.0)],
    ]
}

/// One circulation: slot rotations followed by the cyclic one-bin V delay.
pub fn pass_unitary(angles: &[f64], phases: &[f64], slots: usize) -> Result<UnitaryMatrix> {
    if slots == 0 || angles.len() != slots || phases.len() != slots {
        return Err(Error::domain(format!(
            "pass needs {slots} angles and phases, got {} and {}",
            angles.len(),
            phases.len()
        )));
    }
    let mut u = ComplexMatrix::zeros(2 * slots, 2 * slots);
    for t in 0..slots {
        let r = rotation(angles[t], phases[t]);
        let h_out = 2 * t;
        let v_out = 2 * ((t + 1) % slots) + 1;
        for (rail_in, (&to_h, &to_v)) in r[0].iter().zip(&r[1]).enumerate() {
            let col = 2 * t + rail_in;
            u[(h_out, col)] = to_h;
            u[(v_out, col)] = to_v;
        }
    }
    UnitaryMatrix::new(u)
}

pub fn compile_network(config: &LoopConfig, schedule: &PulseSchedule) -> Result<UnitaryMatrix> {
    compile_prefix(config, schedule, config.loops)
}

/// Network after the first `loops_done` circulations; identity for zero.
pub fn compile_prefix(
    config: &LoopConfig,
    schedule: &PulseSchedule,
    loops_done: usize,
) -> Result<UnitaryMatrix> {
    config.validate()?;
    schedule.check_against(config)?;
    if loops_done > config.loops {
        return Err(Error::domain(format!(
            "requested {loops_done} loops of a {}-loop schedule",
            config.loops
        )));
    }
    let mut acc = UnitaryMatrix::identity(config.modes());
    for k in 0..loops_done {
        let pass = pass_unitary(&schedule.angles[k], &schedule.phases[k], config.slots)?;
        acc = pass.compose(&acc)?;
    }
    Ok(acc)
}

/// All prefixes `0..=N`, built incrementally.
pub fn compile_prefixes(config: &LoopConfig, schedule: &PulseSchedule) -> Result<Vec<UnitaryMatrix>> {
    config.validate()?;
    schedule.check_against(config)?;
    let mut out = Vec::with_capacity(config.loops + 1);
    out.push(UnitaryMatrix::identity(config.modes()));
    for k in 0..config.loops {
        let pass = pass_unitary(&schedule.angles[k], &schedule.phases[k], config.slots)?;
        let next = pass.compose(out.last().expect("non-empty"))?;
        out.push(next);
    }
    Ok(out)
}

/// Restriction of `full` to `subset`, together with its closure deviation.
#[derive(Clone, Debug)]
pub struct EffectiveUnitary {
    pub unitary: UnitaryMatrix,
    pub deviation: f64,
}

/// Extracts the block on `subset`; fails with [`Error::Leakage`] when
/// amplitude escapes it by more than `tol`.
pub fn effective_unitary(full: &UnitaryMatrix, subset: &[RailMode], tol: f64) -> Result<EffectiveUnitary> {
    if subset.is_empty() {
        return Err(Error::domain("mode subset is empty"));
    }
    let indices: Vec<usize> = subset.iter().map(|m| m.index()).collect();
    for (a, &i) in indices.iter().enumerate() {
        if i >= full.dim() {
            return Err(Error::domain(format!("mode {} outside a {}-mode network", subset[a], full.dim())));
        }
        if indices[..a].contains(&i) {
            return Err(Error::domain(format!("mode {} listed twice", subset[a])));
        }
    }
    let sub = full.select(&indices, &indices);
    let deviation = check_unitary(&sub)?;
    if deviation > tol {
        return Err(Error::Leakage { deviation, tol });
    }
    let unitary = UnitaryMatrix::with_tolerance(sub, tol.max(crate::linalg::UNITARITY_TOL))?;
    Ok(EffectiveUnitary { unitary, deviation })
}

/// A ready-to-run circuit: loop layout, pulses and the confined mode set.
#[derive(Clone, Debug)]
pub struct ExampleCircuit {
    pub config: LoopConfig,
    pub schedule: PulseSchedule,
    pub subset: Vec<RailMode>,
}

impl ExampleCircuit {
    pub fn input(&self) -> ModeConfiguration {
        self.config
            .input_configuration(&self.subset)
            .expect("example injection lies inside its subset")
    }

    pub fn effective(&self) -> Result<EffectiveUnitary> {
        let full = compile_network(&self.config, &self.schedule)?;
        effective_unitary(&full, &self.subset, EXAMPLE_CLOSURE_TOL)
    }
}

/// Representative schedule producing a fully connected `m_modes` network.
///
/// The ring is sized to `m_modes / 2` slots so that both rails of every slot
/// form the mode subset and the cyclic delay keeps evolution inside it.
/// Photons enter the H rail of slots `1..=n_photons`. The loop count is
/// `max(5, K + 2)`, enough for every input to reach every output.
pub fn example_schedule(n_photons: usize, m_modes: usize, seed: u64) -> Result<ExampleCircuit> {
    if m_modes == 0 || !m_modes.is_multiple_of(2) {
        return Err(Error::domain(format!("mode count must be even and positive, got {m_modes}")));
    }
    let slots = m_modes / 2;
    if n_photons == 0 || n_photons > slots {
        return Err(Error::domain(format!(
            "need 1..={slots} photons for {m_modes} modes (one per slot), got {n_photons}"
        )));
    }
    let loops = (slots + 2).max(5);
    let injection = (1..=n_photons).map(|s| RailMode::new(s, Rail::H)).collect();
    let config = LoopConfig::new(slots, loops, injection)?;
    let subset = config.all_modes();

    let mut rng = seeded_rng(seed);
    for _ in 0..EXAMPLE_ATTEMPTS {
        let angles = (0..loops)
            .map(|_| (0..slots).map(|_| rng.random_range(0.0..FRAC_PI_2)).collect())
            .collect();
        let phases = (0..loops)
            .map(|_| (0..slots).map(|_| rng.random_range(0.0..TAU)).collect())
            .collect();
        let schedule = PulseSchedule::new(angles, phases)?;
        let circuit = ExampleCircuit { config: config.clone(), schedule, subset: subset.clone() };
        match circuit.effective() {
            Ok(eff) if is_fully_connected(&eff.unitary, EXAMPLE_CONNECTIVITY) => return Ok(circuit),
            Ok(_) | Err(Error::Leakage { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Refusal(format!(
        "no fully connected {m_modes}-mode schedule found in {EXAMPLE_ATTEMPTS} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    use super::*;
    use crate::linalg::haar::haar_with_rng;

    fn random_schedule(loops: usize, slots: usize, seed: u64) -> PulseSchedule {
        let mut rng = seeded_rng(seed);
        let angles = (0..loops).map(|_| (0..slots).map(|_| rng.random_range(0.0..TAU)).collect()).collect();
        let phases = (0..loops).map(|_| (0..slots).map(|_| rng.random_range(0.0..TAU)).collect()).collect();
        PulseSchedule::new(angles, phases).unwrap()
    }

    #[test]
    fn zero_angle_pass_is_a_v_shift() {
        let u = pass_unitary(&[0.0; 3], &[0.0; 3], 3).unwrap();
        for t in 0..3 {
            assert_eq!(u[(2 * t, 2 * t)], Complex64::new(1.0, 0.0));
            assert_eq!(u[(2 * ((t + 1) % 3) + 1, 2 * t + 1)], Complex64::new(1.0, 0.0));
        }
        assert_eq!(u.as_slice().iter().filter(|z| z.norm() > 0.0).count(), 6);
    }

    #[test]
    fn single_slot_quarter_turn_swaps_rails() {
        let u = pass_unitary(&[FRAC_PI_2], &[0.0], 1).unwrap();
        assert!(u[(0, 0)].norm() < 1e-15 && u[(1, 1)].norm() < 1e-15);
        assert!((u[(0, 1)] + 1.0).norm() < 1e-15);
        assert!((u[(1, 0)] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn eighth_turn_is_balanced_coupler() {
        let cfg = LoopConfig::new(1, 1, vec![]).unwrap();
        let sched = PulseSchedule::from_angles(vec![vec![FRAC_PI_4]]).unwrap();
        let u = compile_network(&cfg, &sched).unwrap();
        for z in u.as_slice() {
            assert!((z.norm() - FRAC_1_SQRT_2).abs() < 1e-15);
        }
    }

    #[test]
    fn random_pass_is_unitary() {
        let s = random_schedule(1, 3, 11);
        let u = pass_unitary(&s.angles[0], &s.phases[0], 3).unwrap();
        assert!(check_unitary(&u).unwrap() <= 1e-12);
    }

    #[test]
    fn pass_rejects_length_mismatch() {
        assert!(matches!(pass_unitary(&[0.0; 2], &[0.0; 3], 3), Err(Error::Domain(_))));
    }

    #[test]
    fn single_loop_network_is_the_pass() {
        let cfg = LoopConfig::new(4, 1, vec![]).unwrap();
        let s = random_schedule(1, 4, 2);
        let net = compile_network(&cfg, &s).unwrap();
        let pass = pass_unitary(&s.angles[0], &s.phases[0], 4).unwrap();
        assert_eq!(net, pass);
    }

    #[test]
    fn zero_angles_fix_h_rails() {
        let cfg = LoopConfig::new(5, 7, vec![]).unwrap();
        let u = compile_network(&cfg, &PulseSchedule::zeros(7, 5)).unwrap();
        for t in 0..5 {
            assert_eq!(u[(2 * t, 2 * t)], Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn prefix_edges_and_two_loop_product() {
        let cfg = LoopConfig::new(4, 5, vec![]).unwrap();
        let s = random_schedule(5, 4, 3);
        assert_eq!(compile_prefix(&cfg, &s, 0).unwrap(), UnitaryMatrix::identity(8));
        assert_eq!(compile_prefix(&cfg, &s, 5).unwrap(), compile_network(&cfg, &s).unwrap());
        let p1 = pass_unitary(&s.angles[0], &s.phases[0], 4).unwrap();
        let p2 = pass_unitary(&s.angles[1], &s.phases[1], 4).unwrap();
        let explicit = p2.as_matrix().matmul(&p1).unwrap();
        assert_eq!(compile_prefix(&cfg, &s, 2).unwrap().as_matrix(), &explicit);
        assert!(matches!(compile_prefix(&cfg, &s, 6), Err(Error::Domain(_))));
    }

    #[test]
    fn prefixes_match_prefix_calls() {
        let cfg = LoopConfig::new(3, 4, vec![]).unwrap();
        let s = random_schedule(4, 3, 5);
        let all = compile_prefixes(&cfg, &s).unwrap();
        for (k, u) in all.iter().enumerate() {
            assert_eq!(u, &compile_prefix(&cfg, &s, k).unwrap());
        }
    }

    #[test]
    fn schedule_shape_mismatch() {
        let cfg = LoopConfig::new(3, 2, vec![]).unwrap();
        assert!(matches!(compile_network(&cfg, &PulseSchedule::zeros(2, 4)), Err(Error::Domain(_))));
        assert!(matches!(compile_network(&cfg, &PulseSchedule::zeros(3, 3)), Err(Error::Domain(_))));
    }

    #[test]
    fn config_validation() {
        assert!(LoopConfig::new(0, 1, vec![]).is_err());
        assert!(LoopConfig::new(3, 1, vec![RailMode::new(4, Rail::H)]).is_err());
        assert!(LoopConfig::new(3, 1, vec![RailMode::new(2, Rail::H), RailMode::new(2, Rail::V)]).is_err());
    }

    #[test]
    fn effective_unitary_trivial_cases() {
        let subset = vec![RailMode::new(1, Rail::H), RailMode::new(2, Rail::V)];
        let eff = effective_unitary(&UnitaryMatrix::identity(6), &subset, 1e-10).unwrap();
        assert_eq!(eff.deviation, 0.0);
        assert_eq!(eff.unitary, UnitaryMatrix::identity(2));

        let cfg = LoopConfig::new(3, 4, vec![]).unwrap();
        let u = compile_network(&cfg, &PulseSchedule::zeros(4, 3)).unwrap();
        let h: Vec<_> = (1..=3).map(|s| RailMode::new(s, Rail::H)).collect();
        let eff = effective_unitary(&u, &h, 1e-10).unwrap();
        assert_eq!(eff.deviation, 0.0);
        assert_eq!(eff.unitary, UnitaryMatrix::identity(3));
    }

    #[test]
    fn dense_network_leaks_from_small_subset() {
        let cfg = LoopConfig::new(10, 6, vec![]).unwrap();
        let u = compile_network(&cfg, &random_schedule(6, 10, 9)).unwrap();
        let subset: Vec<_> = (0..6).map(RailMode::from_index).collect();
        match effective_unitary(&u, &subset, 1e-8) {
            Err(Error::Leakage { deviation, .. }) => assert!(deviation > 1e-3),
            other => panic!("expected leakage, got {other:?}"),
        }
    }

    #[test]
    fn effective_unitary_rejects_duplicates() {
        let subset = vec![RailMode::new(1, Rail::H), RailMode::new(1, Rail::H)];
        assert!(matches!(
            effective_unitary(&UnitaryMatrix::identity(4), &subset, 1e-10),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn example_schedules_are_connected_and_closed() {
        for (n, m) in [(3, 6), (4, 8), (1, 2)] {
            let circ = example_schedule(n, m, 1).unwrap();
            let eff = circ.effective().unwrap();
            assert_eq!(eff.unitary.dim(), m);
            assert!(eff.deviation <= EXAMPLE_CLOSURE_TOL);
            assert!(is_fully_connected(&eff.unitary, EXAMPLE_CONNECTIVITY));
            assert_eq!(circ.input().photons(), n);
        }
        let a = example_schedule(3, 6, 4).unwrap();
        let b = example_schedule(3, 6, 4).unwrap();
        assert_eq!(a.schedule, b.schedule);
    }

    #[test]
    fn example_schedule_rejects_odd_modes() {
        assert!(matches!(example_schedule(1, 5, 1), Err(Error::Domain(_))));
        assert!(matches!(example_schedule(4, 6, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn rail_index_is_bijective() {
        for i in 0..20 {
            assert_eq!(RailMode::from_index(i).index(), i);
        }
        assert_eq!(RailMode::new(3, Rail::V).index(), 5);
    }

    #[test]
    fn compose_reverifies() {
        let mut rng = seeded_rng(0);
        let a = haar_with_rng(5, &mut rng).unwrap();
        let b = haar_with_rng(5, &mut rng).unwrap();
        assert!(check_unitary(&a.compose(&b).unwrap()).unwrap() < 1e-12);
    }
}

use rand::seq::SliceRandom;
use timebin::linalg::haar_random_unitary;
use timebin::sampling::{draw_events, output_distribution, Distribution, EventLog, Model, SamplingInstance};
use timebin::validation::{aa_counter, bayes_confidence, lr_counter, row_norm_statistic, HypothesisPair};
use timebin::{seeded_rng, ModeConfiguration};

fn instance(seed: u64) -> SamplingInstance {
    let u = haar_random_unitary(6, seed).unwrap();
    SamplingInstance::new(&u, ModeConfiguration::from_modes(6, &[0, 1, 2]).unwrap()).unwrap()
}

fn shuffled(log: &EventLog, seed: u64) -> EventLog {
    let mut ev = log.events().to_vec();
    ev.shuffle(&mut seeded_rng(seed));
    EventLog::new(ev, None)
}

#[test]
fn final_statistics_ignore_event_order() {
    let inst = instance(3);
    let ind = output_distribution(&inst, &Model::Indistinguishable).unwrap();
    let dist = output_distribution(&inst, &Model::Distinguishable).unwrap();
    let hyp = HypothesisPair::new(ind.clone(), Distribution::uniform(6, 3)).unwrap();
    let log = draw_events(&ind, 80, 9);
    let other = shuffled(&log, 10);

    let a = aa_counter(inst.matrix(), inst.input(), &log).unwrap();
    let b = aa_counter(inst.matrix(), inst.input(), &other).unwrap();
    assert_eq!(a.last(), b.last());
    let a = lr_counter(&log, &ind, &dist).unwrap();
    let b = lr_counter(&other, &ind, &dist).unwrap();
    assert_eq!(a.last(), b.last());
    let a = bayes_confidence(&log.prefix(10), &hyp).unwrap();
    let b = bayes_confidence(&shuffled(&log.prefix(10), 11), &hyp).unwrap();
    assert!((a.last().unwrap() - b.last().unwrap()).abs() < 1e-12);
}

#[test]
fn counters_move_by_one_per_event() {
    let inst = instance(4);
    let ind = output_distribution(&inst, &Model::Indistinguishable).unwrap();
    let dist = output_distribution(&inst, &Model::Distinguishable).unwrap();
    let log = draw_events(&dist, 60, 1);
    for t in [aa_counter(inst.matrix(), inst.input(), &log).unwrap(), lr_counter(&log, &ind, &dist).unwrap()] {
        assert_eq!(t.len(), 60);
        let mut prev = 0.0;
        for &v in &t.values {
            assert!((v - prev).abs() <= 1.0);
            prev = v;
        }
    }
    let aa = aa_counter(inst.matrix(), inst.input(), &log).unwrap();
    assert!(aa.values.windows(2).all(|w| (w[1] - w[0]).abs() == 1.0));
}

#[test]
fn bayes_confidence_stays_low_when_the_alternative_is_true() {
    // Events drawn from the uniform alternative: the posterior for the boson
    // hypothesis should not exceed one half in the typical trial.
    let mut finals = Vec::new();
    for trial in 0..101u64 {
        let inst = instance(500 + trial);
        let ind = output_distribution(&inst, &Model::Indistinguishable).unwrap();
        let uniform = Distribution::uniform(6, 3);
        let hyp = HypothesisPair::new(ind, uniform.clone()).unwrap();
        let log = draw_events(&uniform, 20, trial);
        finals.push(bayes_confidence(&log, &hyp).unwrap().last().unwrap());
    }
    finals.sort_by(f64::total_cmp);
    assert!(finals[50] <= 0.5, "median {}", finals[50]);
}

#[test]
fn mean_row_norm_statistic_separates_boson_from_uniform() {
    for seed in 0..20 {
        let inst = instance(seed);
        let ind = output_distribution(&inst, &Model::Indistinguishable).unwrap();
        let uniform = Distribution::uniform(6, 3);
        let mean = |d: &Distribution| -> f64 {
            d.iter()
                .map(|(c, p)| p * row_norm_statistic(inst.matrix(), inst.input(), c).unwrap())
                .sum()
        };
        assert!(mean(&ind) > mean(&uniform), "seed {seed}");
    }
}

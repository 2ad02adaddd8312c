//! Certification of sampled events against alternative hypotheses.
//!
//! * [`aa_counter`]: the row-norm discriminator. For each event the
//!   scattering submatrix's squared row norms, scaled by `m/n`, are
//!   multiplied together; a product above 1 counts in favour of a genuine
//!   boson sampler, otherwise against. Needs no permanents.
//! * [`bayes_confidence`]: running posterior confidence `χ/(1+χ)` that the
//!   events came from the main hypothesis rather than an alternative, with
//!   `χ` the likelihood ratio.
//! * [`lr_counter`]: ±1 vote per event on whether the indistinguishable
//!   model explains it better than the distinguishable one.
//!
//! Likelihood products are accumulated in log space; each event contributes
//! at most [`LOG_SATURATION`] nats either way.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{scattering_submatrix, ComplexMatrix, ModeConfiguration};
use crate::sampling::{
    enumerate_output_configurations, output_distribution, Distribution, DistributionKind, EventLog, Model,
    SamplingInstance,
};

/// Per-event cap on the log-likelihood ratio, in nats.
pub const LOG_SATURATION: f64 = 700.0;

/// Confidence required for a Bayesian PASS verdict unless overridden.
pub const DEFAULT_BAYES_THRESHOLD: f64 = 0.99;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestKind {
    Aa,
    Bayes,
    Lr,
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestKind::Aa => "aa",
            TestKind::Bayes => "bayes",
            TestKind::Lr => "lr",
        })
    }
}

impl FromStr for TestKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aa" => Ok(TestKind::Aa),
            "bayes" => Ok(TestKind::Bayes),
            "lr" => Ok(TestKind::Lr),
            other => Err(Error::domain(format!("unknown test {other:?} (aa, bayes, lr)"))),
        }
    }
}

/// Running statistic after each processed event.
#[derive(Clone, Debug, PartialEq)]
pub struct CounterTrajectory {
    pub test: TestKind,
    pub values: Vec<f64>,
}

impl CounterTrajectory {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// Counters pass when positive; Bayesian confidence when at or above `threshold`.
    pub fn passes(&self, bayes_threshold: f64) -> bool {
        match (self.test, self.last()) {
            (_, None) => false,
            (TestKind::Bayes, Some(c)) => c >= bayes_threshold,
            (_, Some(v)) => v > 0.0,
        }
    }

    fn format_value(&self, v: f64) -> String {
        match self.test {
            TestKind::Bayes => format!("{v}"),
            _ => format!("{}", v as i64),
        }
    }

    /// One-line verdict, e.g. `PASS test=aa final=+38 events=50`.
    pub fn verdict(&self, bayes_threshold: f64) -> String {
        let status = if self.passes(bayes_threshold) { "PASS" } else { "FAIL" };
        let last = self.last().unwrap_or(0.0);
        let final_value = match self.test {
            TestKind::Bayes => format!("{last:.6}"),
            _ => format!("{:+}", last as i64),
        };
        format!("{status} test={} final={final_value} events={}", self.test, self.len())
    }

    /// CSV with header `event_index,statistic`; indices start at 1.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["event_index", "statistic"])?;
        for (i, &v) in self.values.iter().enumerate() {
            w.write_record([(i + 1).to_string(), self.format_value(v)])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(test: TestKind, input: R) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            event_index: usize,
            statistic: f64,
        }
        let mut r = csv::Reader::from_reader(input);
        let mut values = Vec::new();
        for (k, row) in r.deserialize().enumerate() {
            let row: Row = row?;
            if row.event_index != k + 1 {
                return Err(Error::parse(format!("trajectory index {} out of sequence", row.event_index)));
            }
            values.push(row.statistic);
        }
        Ok(Self { test, values })
    }
}

/// `R = Π_i (m/n) Σ_j |A_ij|²` over the rows of the scattering submatrix.
pub fn row_norm_statistic(u: &ComplexMatrix, input: &ModeConfiguration, output: &ModeConfiguration) -> Result<f64> {
    let a = scattering_submatrix(u, input, output)?;
    let scale = u.rows() as f64 / input.photons() as f64;
    Ok((0..a.rows())
        .map(|i| scale * a.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>())
        .product())
}

/// +1 when `R > 1`, otherwise -1 (ties included), accumulated per event.
pub fn aa_counter(u: &ComplexMatrix, input: &ModeConfiguration, events: &EventLog) -> Result<CounterTrajectory> {
    let mut counter = 0i64;
    let mut values = Vec::with_capacity(events.len());
    for ev in events.events() {
        counter += if row_norm_statistic(u, input, ev)? > 1.0 { 1 } else { -1 };
        values.push(counter as f64);
    }
    Ok(CounterTrajectory { test: TestKind::Aa, values })
}

/// Main and alternative hypotheses over a common support.
#[derive(Clone, Debug)]
pub struct HypothesisPair {
    main: Distribution,
    alt: Distribution,
}

impl HypothesisPair {
    pub fn new(main: Distribution, alt: Distribution) -> Result<Self> {
        if !main.same_support(&alt) {
            return Err(Error::domain("hypotheses have different supports"));
        }
        Ok(Self { main, alt })
    }

    pub fn main(&self) -> &Distribution {
        &self.main
    }

    pub fn alt(&self) -> &Distribution {
        &self.alt
    }

    /// `ln(p_main(x) / p_alt(x))`, saturated at ±[`LOG_SATURATION`].
    pub fn log_ratio(&self, x: &ModeConfiguration) -> Result<f64> {
        let i = self
            .main
            .position(x)
            .ok_or_else(|| Error::domain(format!("event {x} outside the hypothesis support")))?;
        log_ratio(self.main.probabilities()[i], self.alt.probabilities()[i], x)
    }
}

fn log_ratio(p: f64, q: f64, x: &ModeConfiguration) -> Result<f64> {
    match (p > 0.0, q > 0.0) {
        (false, false) => Err(Error::domain(format!("event {x} has zero probability under both hypotheses"))),
        (true, false) => Ok(LOG_SATURATION),
        (false, true) => Ok(-LOG_SATURATION),
        (true, true) => Ok((p.ln() - q.ln()).clamp(-LOG_SATURATION, LOG_SATURATION)),
    }
}

/// Posterior confidence `c_k = χ_k / (1 + χ_k)` with `χ_k = Π_{i≤k} p_main(x_i)/p_alt(x_i)`.
pub fn bayes_confidence(events: &EventLog, hyp: &HypothesisPair) -> Result<CounterTrajectory> {
    let mut log_chi = 0.0;
    let mut values = Vec::with_capacity(events.len());
    for ev in events.events() {
        log_chi += hyp.log_ratio(ev)?;
        values.push(logistic(log_chi.clamp(-LOG_SATURATION, LOG_SATURATION)));
    }
    Ok(CounterTrajectory { test: TestKind::Bayes, values })
}

fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// ±1 (or 0 on ties) per event according to `p_ind(x)` versus `p_dist(x)`.
pub fn lr_counter(events: &EventLog, p_ind: &Distribution, p_dist: &Distribution) -> Result<CounterTrajectory> {
    if !p_ind.same_support(p_dist) {
        return Err(Error::domain("hypotheses have different supports"));
    }
    let mut counter = 0i64;
    let mut values = Vec::with_capacity(events.len());
    for ev in events.events() {
        let i = p_ind
            .position(ev)
            .ok_or_else(|| Error::domain(format!("event {ev} outside the hypothesis support")))?;
        let (p, q) = (p_ind.probabilities()[i], p_dist.probabilities()[i]);
        if p == 0.0 && q == 0.0 {
            return Err(Error::domain(format!("event {ev} has zero probability under both hypotheses")));
        }
        counter += match p.partial_cmp(&q).expect("finite probabilities") {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
        };
        values.push(counter as f64);
    }
    Ok(CounterTrajectory { test: TestKind::Lr, values })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlternativeKind {
    Uniform,
    Distinguishable,
    Gaussian,
}

impl FromStr for AlternativeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(AlternativeKind::Uniform),
            "distinguishable" | "dist" => Ok(AlternativeKind::Distinguishable),
            "gaussian" | "normal" => Ok(AlternativeKind::Gaussian),
            other => Err(Error::domain(format!(
                "unknown alternative {other:?} (uniform, distinguishable, gaussian)"
            ))),
        }
    }
}

impl fmt::Display for AlternativeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlternativeKind::Uniform => "uniform",
            AlternativeKind::Distinguishable => "distinguishable",
            AlternativeKind::Gaussian => "gaussian",
        })
    }
}

/// Bell profile over the lexicographic configuration index.
///
/// `None` fields fall back to the midpoint of the index range and a width of
/// one sixth of the support size.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GaussianParams {
    pub center: Option<f64>,
    pub width: Option<f64>,
}

/// Builds the alternative hypothesis for `inst`.
pub fn make_alternative(kind: AlternativeKind, inst: &SamplingInstance, params: GaussianParams) -> Result<Distribution> {
    let (m, n) = (inst.modes(), inst.photons());
    match kind {
        AlternativeKind::Uniform => Ok(Distribution::uniform(m, n)),
        AlternativeKind::Distinguishable => output_distribution(inst, &Model::Distinguishable),
        AlternativeKind::Gaussian => {
            let configs = enumerate_output_configurations(m, n);
            let len = configs.len() as f64;
            let center = params.center.unwrap_or((len - 1.0) / 2.0);
            let width = params.width.unwrap_or(len / 6.0);
            if !(width.is_finite() && width > 0.0 && center.is_finite()) {
                return Err(Error::domain(format!("invalid gaussian center {center} / width {width}")));
            }
            let weights = (0..configs.len())
                .map(|i| {
                    let z = (i as f64 - center) / width;
                    (-0.5 * z * z).exp()
                })
                .collect();
            Distribution::from_weights(configs, weights, DistributionKind::Gaussian)
        }
    }
}

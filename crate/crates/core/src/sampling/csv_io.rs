//! CSV forms of distributions (`config,probability`) and event logs
//! (`index,config`). Configurations are dash-separated occupations such as
//! `1-0-2-0-0-0`; event indices start at 1.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{Distribution, DistributionKind, EventLog};
use crate::error::{Error, Result};
use crate::linalg::ModeConfiguration;

#[derive(Serialize, Deserialize)]
struct DistributionRow {
    config: String,
    probability: f64,
}

#[derive(Serialize, Deserialize)]
struct EventRow {
    index: usize,
    config: String,
}

pub fn write_distribution<W: Write>(dist: &Distribution, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (config, probability) in dist.iter() {
        w.serialize(DistributionRow { config: config.to_string(), probability })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_distribution<R: Read>(input: R) -> Result<Distribution> {
    let mut r = csv::Reader::from_reader(input);
    check_header(&mut r, &["config", "probability"])?;
    let mut configs = Vec::new();
    let mut probs = Vec::new();
    for row in r.deserialize() {
        let row: DistributionRow = row?;
        configs.push(row.config.parse::<ModeConfiguration>()?);
        probs.push(row.probability);
    }
    Distribution::new(configs, probs, DistributionKind::External).map_err(|e| Error::parse(e.to_string()))
}

pub fn write_event_log<W: Write>(log: &EventLog, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if log.is_empty() {
        w.write_record(["index", "config"])?;
    }
    for (i, ev) in log.events().iter().enumerate() {
        w.serialize(EventRow { index: i + 1, config: ev.to_string() })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_event_log<R: Read>(input: R) -> Result<EventLog> {
    let mut r = csv::Reader::from_reader(input);
    check_header(&mut r, &["index", "config"])?;
    let mut events = Vec::new();
    for (k, row) in r.deserialize().enumerate() {
        let row: EventRow = row?;
        if row.index != k + 1 {
            return Err(Error::parse(format!("event index {} out of sequence (expected {})", row.index, k + 1)));
        }
        events.push(row.config.parse::<ModeConfiguration>()?);
    }
    if let Some(first) = events.first() {
        let (m, n) = (first.modes(), first.photons());
        if events.iter().any(|e| e.modes() != m || e.photons() != n) {
            return Err(Error::parse("events disagree on mode or photon count"));
        }
    }
    Ok(EventLog::new(events, None))
}

fn check_header<R: Read>(r: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let header = r.headers()?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::parse(format!(
            "expected header {:?}, found {:?}",
            expected.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    Ok(())
}

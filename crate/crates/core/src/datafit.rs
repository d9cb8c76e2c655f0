//! Public step datasets: CSV ingestion, zero-day filtering and the
//! method-of-moments gamma fit of the step model.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use chrono::{Days, NaiveDate};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::seeded;
use crate::scalar::Scalar;
use crate::simulation::StepModel;

#[derive(Debug, Error)]
pub enum DataFitError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("need at least two samples, got {0}")]
    TooFewSamples(usize),
    #[error("samples must be positive and finite")]
    NonPositive,
    #[error("samples have zero variance")]
    DegenerateVariance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub person_id: String,
    pub date: NaiveDate,
    pub steps: u32,
}

/// Daily step counts of many people; `(person_id, date)` is unique.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepRecordSet {
    pub records: Vec<StepRecord>,
}

impl StepRecordSet {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn steps(&self) -> Vec<f64> {
        self.records.iter().map(|r| f64::from(r.steps)).collect()
    }
}

/// A row that could not be loaded; `line` is 1-based and counts the header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    pub line: u64,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub set: StepRecordSet,
    pub row_errors: Vec<RowError>,
}

const COLUMNS: [&str; 3] = ["person_id", "date", "steps"];

/// Parses `person_id,date,steps` CSV; bad rows are reported, the rest kept.
pub fn read_step_csv<R: Read>(reader: R) -> Result<LoadReport, DataFitError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let mut idx = [0usize; 3];
    for (slot, name) in idx.iter_mut().zip(COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| DataFitError::Schema(format!("missing column `{name}`")))?;
    }
    let mut report = LoadReport::default();
    let mut seen = HashSet::new();
    for row in rdr.records() {
        let row = match row {
            Ok(row) => row,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                report.row_errors.push(RowError { line, message: e.to_string() });
                continue;
            }
        };
        let line = row.position().map_or(0, |p| p.line());
        let field = |i: usize| row.get(i).unwrap_or("");
        let parsed = (|| {
            let person_id = field(idx[0]).to_string();
            if person_id.is_empty() {
                return Err("empty person_id".to_string());
            }
            let date = NaiveDate::parse_from_str(field(idx[1]), "%Y-%m-%d")
                .map_err(|e| format!("bad date `{}`: {e}", field(idx[1])))?;
            let steps = field(idx[2])
                .parse::<u32>()
                .map_err(|_| format!("steps must be a non-negative integer, got `{}`", field(idx[2])))?;
            Ok(StepRecord { person_id, date, steps })
        })();
        match parsed {
            Ok(rec) => {
                if seen.insert((rec.person_id.clone(), rec.date)) {
                    report.set.records.push(rec);
                } else {
                    report.row_errors.push(RowError {
                        line,
                        message: format!("duplicate record for {} on {}", rec.person_id, rec.date),
                    });
                }
            }
            Err(message) => report.row_errors.push(RowError { line, message }),
        }
    }
    Ok(report)
}

pub fn load_step_csv(path: &Path) -> Result<LoadReport, DataFitError> {
    let file = std::fs::File::open(path).map_err(|source| DataFitError::Io { path: path.to_owned(), source })?;
    read_step_csv(file)
}

pub fn write_step_csv<W: Write>(set: &StepRecordSet, writer: W) -> Result<(), DataFitError> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(COLUMNS)?;
    for r in &set.records {
        wtr.write_record([r.person_id.as_str(), &r.date.format("%Y-%m-%d").to_string(), &r.steps.to_string()])?;
    }
    wtr.flush().map_err(|e| DataFitError::Csv(e.into()))?;
    Ok(())
}

/// Drops days with zero steps, keeping order.
pub fn filter_zero_days(set: &StepRecordSet) -> StepRecordSet {
    StepRecordSet { records: set.records.iter().filter(|r| r.steps > 0).cloned().collect() }
}

/// Method-of-moments gamma fit: `k = mean^2 / var`, `theta = var / mean`
/// with the population variance.
pub fn fit_gamma_moments<T: Scalar>(samples: &[T]) -> Result<StepModel<T>, DataFitError> {
    if samples.len() < 2 {
        return Err(DataFitError::TooFewSamples(samples.len()));
    }
    if samples.iter().any(|&s| !(s.is_finite() && s > T::zero())) {
        return Err(DataFitError::NonPositive);
    }
    let n = T::from_usize_lossy(samples.len());
    let mean = samples.iter().copied().sum::<T>() / n;
    let var = samples.iter().map(|&s| (s - mean) * (s - mean)).sum::<T>() / n;
    if var <= T::zero() {
        return Err(DataFitError::DegenerateVariance);
    }
    Ok(StepModel { k: mean * mean / var, theta: var / mean })
}

/// Seeded stand-in for a public step dataset: gamma days with occasional zero days.
pub fn synthetic_dataset(
    persons: usize,
    days: u32,
    start: NaiveDate,
    model: &StepModel<f64>,
    zero_rate: f64,
    seed: u64,
) -> StepRecordSet {
    let mut rng = seeded(seed);
    let sampler = model.sampler();
    let mut records = Vec::with_capacity(persons * days as usize);
    for p in 0..persons {
        for d in 0..days {
            let zero = rng.random::<f64>() < zero_rate;
            let draw = sampler.sample(&mut rng).round() as u32;
            records.push(StepRecord {
                person_id: format!("P{:03}", p + 1),
                date: start + Days::new(u64::from(d)),
                steps: if zero { 0 } else { draw.max(1) },
            });
        }
    }
    StepRecordSet { records }
}

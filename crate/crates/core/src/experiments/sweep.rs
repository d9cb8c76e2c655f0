use std::io::Write;
use std::path::Path;

use crate::experiments::{run_experiment, ExperimentConfig, ExperimentError, ExperimentResult, SweepGrid};

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub param: String,
    pub config: ExperimentConfig,
    pub result: ExperimentResult,
}

/// Output of a sweep; `best` indexes the point with the largest overall mean.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    pub best: usize,
}

impl SweepResult {
    pub fn best_point(&self) -> &SweepPoint {
        &self.points[self.best]
    }

    /// Points ordered by overall mean, best first.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.points.len()).collect();
        order.sort_by(|&a, &b| {
            self.points[b].result.overall_mean.total_cmp(&self.points[a].result.overall_mean).then(a.cmp(&b))
        });
        order
    }
}

/// Runs `base` at every grid point. All points share `base.master_seed`, so
/// trial `i` sees the same environment and player streams everywhere.
pub fn run_sweep(base: &ExperimentConfig, grid: &SweepGrid) -> Result<SweepResult, ExperimentError> {
    if grid.is_empty() {
        return Err(ExperimentError::Config("sweep grid is empty".into()));
    }
    let mut points = Vec::with_capacity(grid.len());
    for (param, config) in grid.points(base)? {
        let result = run_experiment(&config)?;
        points.push(SweepPoint { param, config, result });
    }
    let best = (0..points.len())
        .max_by(|&a, &b| points[a].result.overall_mean.total_cmp(&points[b].result.overall_mean).then(b.cmp(&a)))
        .expect("non-empty grid");
    Ok(SweepResult { points, best })
}

/// `x` with nine significant digits, printed like C's `%.9g`.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{x:.*}", (8 - exp) as usize)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes `param,step,mean_reward,freq_A,freq_B,freq_C`, one row per point and step.
pub fn write_results<W: Write>(points: &[(String, &ExperimentResult)], writer: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["param", "step", "mean_reward", "freq_A", "freq_B", "freq_C"])?;
    for (param, result) in points {
        for (i, (reward, freq)) in
            result.per_step_mean_reward.iter().zip(&result.per_step_arm_frequencies).enumerate()
        {
            w.write_record([
                param.clone(),
                (i + 1).to_string(),
                format_sig9(*reward),
                format_sig9(freq[0]),
                format_sig9(freq[1]),
                format_sig9(freq[2]),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// File version of [`write_results`]; errors name the path.
pub fn write_results_csv(points: &[(String, &ExperimentResult)], path: &Path) -> Result<(), ExperimentError> {
    let io_err = |e: String| ExperimentError::Io(format!("{}: {e}", path.display()));
    let file = std::fs::File::create(path).map_err(|e| io_err(e.to_string()))?;
    write_results(points, std::io::BufWriter::new(file)).map_err(|e| io_err(e.to_string()))
}

impl SweepResult {
    pub fn csv_rows(&self) -> Vec<(String, &ExperimentResult)> {
        self.points.iter().map(|p| (p.param.clone(), &p.result)).collect()
    }
}

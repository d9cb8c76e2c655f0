use serde::Serialize;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Mean of per-trial differences `a - b` with a 95% confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairedDifference {
    pub n: usize,
    pub mean: f64,
    pub std_error: f64,
    pub lower: f64,
    pub upper: f64,
}

impl PairedDifference {
    /// True when the whole interval lies above zero.
    pub fn significantly_positive(&self) -> bool {
        self.lower > 0.0
    }
}

/// Paired comparison of two per-trial series drawn with the same seeds.
///
/// `None` when lengths differ or fewer than two pairs are given.
pub fn paired_difference(a: &[f64], b: &[f64]) -> Option<PairedDifference> {
    if a.len() != b.len() || a.len() < 2 {
        return None;
    }
    let n = a.len();
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mean = diffs.iter().sum::<f64>() / n as f64;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let std_error = (var / n as f64).sqrt();
    Some(PairedDifference { n, mean, std_error, lower: mean - Z95 * std_error, upper: mean + Z95 * std_error })
}

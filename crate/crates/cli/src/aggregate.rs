use crate::error::{HarnessError, Result};

/// Trimmed mean with a normal-approximation 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Number of values inside the trimming window.
    pub kept: usize,
}

impl Aggregate {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }
}

pub const MIN_RECORDS: usize = 3;
pub const Z95: f64 = 1.96;

/// Percentile `q` (0..=100) of ascending `sorted`, interpolating linearly
/// between closest ranks.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = (sorted.len() - 1) as f64 * q / 100.0;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Mean of the values in `[P5, P95]` with `mean ± 1.96 s / √k`.
pub fn aggregate(values: &[f64]) -> Result<Aggregate> {
    if values.len() < MIN_RECORDS {
        return Err(HarnessError::TooFewRecords { needed: MIN_RECORDS, found: values.len() });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (lo, hi) = (percentile(&sorted, 5.0), percentile(&sorted, 95.0));
    let kept: Vec<f64> = sorted.into_iter().filter(|&v| v >= lo && v <= hi).collect();
    let k = kept.len() as f64;
    let mean = kept.iter().sum::<f64>() / k;
    let half = if kept.len() > 1 {
        let var = kept.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
        Z95 * var.sqrt() / k.sqrt()
    } else {
        0.0
    };
    Ok(Aggregate { mean, ci_low: mean - half, ci_high: mean + half, kept: kept.len() })
}

/// Plain mean and sample standard deviation.
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, sd)
}

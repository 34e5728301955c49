use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::aggregate::{aggregate, mean_sd};
use crate::error::Result;
use crate::record::{group_by_cell, write_records, CellKey, RunRecord};

/// One row of `summary.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub suite: String,
    pub graph_type: String,
    pub n1: usize,
    pub n2: usize,
    pub rho1: f64,
    pub rho2: f64,
    pub sigma: f64,
    pub nkp_noise: f64,
    pub model: String,
    pub runs: usize,
    pub failed: usize,
    pub trimmed_mse: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub mean_runtime_s: Option<f64>,
    pub sd_runtime_s: Option<f64>,
    pub mean_iterations: Option<f64>,
    pub mean_residual_pre: Option<f64>,
    pub mean_residual_post: Option<f64>,
}

impl SummaryRow {
    pub fn cell(&self) -> CellKey {
        CellKey {
            suite: self.suite.clone(),
            graph_type: self.graph_type.clone(),
            n1: self.n1,
            n2: self.n2,
            rho1: self.rho1,
            rho2: self.rho2,
            sigma: self.sigma,
            nkp_noise: self.nkp_noise,
            model: self.model.clone(),
        }
    }

    pub fn half_width(&self) -> Option<f64> {
        Some(0.5 * (self.ci_high? - self.ci_low?))
    }
}

fn mean_of(values: impl Iterator<Item = f64>) -> Option<f64> {
    let v: Vec<f64> = values.collect();
    (!v.is_empty()).then(|| mean_sd(&v).0)
}

/// Per-cell aggregates. Failed runs are counted but excluded; cells with
/// too few successful runs get empty statistics.
pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    group_by_cell(records)
        .into_iter()
        .map(|(key, recs)| {
            let ok: Vec<&RunRecord> = recs.iter().copied().filter(|r| !r.failed).collect();
            let mses: Vec<f64> = ok.iter().filter_map(|r| r.mse).collect();
            let agg = aggregate(&mses).ok();
            let times: Vec<f64> = ok.iter().filter_map(|r| r.runtime_s).collect();
            let (mt, st) = if times.is_empty() { (None, None) } else {
                let (m, s) = mean_sd(&times);
                (Some(m), Some(s))
            };
            SummaryRow {
                suite: key.suite,
                graph_type: key.graph_type,
                n1: key.n1,
                n2: key.n2,
                rho1: key.rho1,
                rho2: key.rho2,
                sigma: key.sigma,
                nkp_noise: key.nkp_noise,
                model: key.model,
                runs: recs.len(),
                failed: recs.len() - ok.len(),
                trimmed_mse: agg.map(|a| a.mean),
                ci_low: agg.map(|a| a.ci_low),
                ci_high: agg.map(|a| a.ci_high),
                mean_runtime_s: mt,
                sd_runtime_s: st,
                mean_iterations: mean_of(ok.iter().filter_map(|r| r.iterations.map(|i| i as f64))),
                mean_residual_pre: mean_of(recs.iter().filter_map(|r| r.residual_pre)),
                mean_residual_post: mean_of(recs.iter().filter_map(|r| r.residual_post)),
            }
        })
        .collect()
}

/// Name of the x-axis quantity of a suite's figures.
fn x_axis(suite: &str) -> &'static str {
    match suite {
        "robustness" => "sigma",
        "timing" => "order",
        "nkp" => "nkp_noise",
        _ => "density",
    }
}

/// Two-column series, one file per (figure, model). Timing series plot the
/// mean runtime against `n1 * n2`, every other suite the trimmed MSE.
pub fn plot_series(rows: &[SummaryRow]) -> Vec<(String, Vec<(f64, f64)>)> {
    let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for r in rows {
        let (name, x, y) = match r.suite.as_str() {
            "timing" => (
                format!("timing_{}_rho{}_{}", r.graph_type, r.rho1, r.model),
                (r.n1 * r.n2) as f64,
                r.mean_runtime_s,
            ),
            "robustness" => (
                format!("robustness_{}_{}x{}_rho{}_{}", r.graph_type, r.n1, r.n2, r.rho1, r.model),
                r.sigma,
                r.trimmed_mse,
            ),
            "nkp" => (
                format!("nkp_{}_{}x{}_rho{}_sigma{}_{}", r.graph_type, r.n1, r.n2, r.rho1, r.sigma, r.model),
                r.nkp_noise,
                r.trimmed_mse,
            ),
            _ => (
                format!("{}_{}_{}x{}_sigma{}_{}", r.suite, r.graph_type, r.n1, r.n2, r.sigma, r.model),
                r.rho1,
                r.trimmed_mse,
            ),
        };
        let Some(y) = y else { continue };
        match series.iter_mut().find(|(n, _)| *n == name) {
            Some((_, pts)) => pts.push((x, y)),
            None => series.push((name, vec![(x, y)])),
        }
    }
    series
}

/// Writes `runs.csv`, `summary.csv` and `plotdata/*.csv` under `dir`.
pub fn write_outputs(dir: &Path, records: &[RunRecord]) -> Result<Vec<SummaryRow>> {
    fs::create_dir_all(dir.join("plotdata"))?;
    write_records(BufWriter::new(File::create(dir.join("runs.csv"))?), records)?;
    let rows = summarize(records);
    let mut w = csv::Writer::from_path(dir.join("summary.csv"))?;
    for r in &rows {
        w.serialize(r)?;
    }
    w.flush()?;
    for (name, pts) in plot_series(&rows) {
        let suite = name.split('_').next().unwrap_or_default().to_string();
        let mut w = csv::Writer::from_path(dir.join("plotdata").join(format!("{name}.csv")))?;
        let y = if suite == "timing" { "runtime_s" } else { "trimmed_mse" };
        w.write_record([x_axis(&suite), y])?;
        for (x, y) in pts {
            w.write_record([x.to_string(), y.to_string()])?;
        }
        w.flush()?;
    }
    Ok(rows)
}

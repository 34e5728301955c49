use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// One (cell, model, repetition) outcome.
///
/// `mse`, `runtime_s` and `iterations` are empty for failed runs; the NKP
/// residuals are only filled in by the nkp suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub suite: String,
    pub graph_type: String,
    pub n1: usize,
    pub n2: usize,
    pub rho1: f64,
    pub rho2: f64,
    pub sigma: f64,
    pub nkp_noise: f64,
    pub model: String,
    pub rep: u64,
    pub seed: u64,
    pub mse: Option<f64>,
    pub runtime_s: Option<f64>,
    pub iterations: Option<usize>,
    pub failed: bool,
    pub error: String,
    pub residual_pre: Option<f64>,
    pub residual_post: Option<f64>,
}

/// Identity of the cell a record belongs to.
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub struct CellKey {
    pub suite: String,
    pub graph_type: String,
    pub n1: usize,
    pub n2: usize,
    pub rho1: f64,
    pub rho2: f64,
    pub sigma: f64,
    pub nkp_noise: f64,
    pub model: String,
}

impl RunRecord {
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
}

pub fn write_records<W: Write>(w: W, records: &[RunRecord]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(r: R) -> Result<Vec<RunRecord>> {
    let mut input = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for row in input.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

/// Groups records by cell, keeping first-appearance order of cells and
/// input order within a cell.
pub fn group_by_cell(records: &[RunRecord]) -> Vec<(CellKey, Vec<&RunRecord>)> {
    let mut groups: Vec<(CellKey, Vec<&RunRecord>)> = Vec::new();
    for r in records {
        let key = r.cell();
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(r),
            None => groups.push((key, vec![r])),
        }
    }
    groups
}

use std::time::Instant;

use rayon::prelude::*;

use kronreg::gcrf::{self, FitOptions, GcrfProblem};
use kronreg::graph::edge_density;
use kronreg::nkp::{nearest_kron, similarity_residual, sparsify_factors};
use kronreg::spectral::{build_basis, exact_basis, exact_kron_basis_with_cap};
use kronreg::synthdata::{gen_dataset, Dataset, DatasetSpec};
use kronreg::{ProductSimilarity, RngStream, SimilarityMatrix, SpectralBasis};

use crate::config::{Model, Suite, SuiteConfig};
use crate::error::{HarnessError, Result};
use crate::record::RunRecord;

/// Parameters shared by all models and repetitions of one dataset cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellParams {
    pub n1: usize,
    pub n2: usize,
    pub rho: f64,
    pub sigma: f64,
    pub violation: Option<f64>,
}

impl SuiteConfig {
    /// Dataset cells in output order.
    pub fn cells(&self) -> Vec<CellParams> {
        let mut out = Vec::new();
        for &(n1, n2) in &self.sizes {
            for &rho in &self.densities {
                for &sigma in &self.output_noises {
                    for violation in self.violations() {
                        out.push(CellParams { n1, n2, rho, sigma, violation });
                    }
                }
            }
        }
        out
    }

    fn dataset_spec(&self, cell: &CellParams) -> DatasetSpec {
        let mut spec = DatasetSpec::new(self.graph, cell.n1, cell.n2, cell.rho);
        spec.output_noise = cell.sigma;
        spec.rewire = self.rewire;
        spec.violation = cell.violation;
        spec
    }
}

/// Sparsified nearest-Kronecker factors of a dataset's similarity matrix.
struct NkpFactors {
    s1: SimilarityMatrix,
    s2: SimilarityMatrix,
    seconds: f64,
    residual_pre: f64,
    residual_post: f64,
}

fn nkp_factors(d: &Dataset, cap: usize) -> Result<NkpFactors> {
    let s = match &d.s {
        ProductSimilarity::Dense(s) => s.clone(),
        k @ ProductSimilarity::Kronecker { .. } => k.to_dense(cap)?,
    };
    let start = Instant::now();
    let f = nearest_kron(s.view(), d.spec.n1, d.spec.n2)?;
    let (s1, s2) = sparsify_factors(&f, edge_density(&d.s1), edge_density(&d.s2))?;
    let seconds = start.elapsed().as_secs_f64();
    let residual_post = similarity_residual(&s, &s1, &s2)?;
    Ok(NkpFactors { s1, s2, seconds, residual_pre: f.residual_fro, residual_post })
}

struct Outcome {
    mse: f64,
    seconds: f64,
    iterations: usize,
}

fn evaluate(
    cfg: &SuiteConfig,
    model: Model,
    d: &Dataset,
    nkp: Option<&std::result::Result<NkpFactors, String>>,
) -> Result<Outcome> {
    let factors = || -> Result<&NkpFactors> {
        match nkp {
            Some(Ok(f)) => Ok(f),
            Some(Err(e)) => Err(HarnessError::Config(format!("nearest Kronecker product failed: {e}"))),
            None => Err(HarnessError::Config("nearest Kronecker product not computed".into())),
        }
    };
    let start = Instant::now();
    let mut extra = 0.0;
    let basis: SpectralBasis = match model {
        Model::Base => match &d.s {
            ProductSimilarity::Kronecker { s1, s2 } => exact_kron_basis_with_cap(s1, s2, cfg.dense_cap)?,
            ProductSimilarity::Dense(s) => exact_basis(s, cfg.dense_cap)?,
        },
        Model::BaseSvd => {
            let f = factors()?;
            extra = f.seconds;
            exact_kron_basis_with_cap(&f.s1, &f.s2, cfg.dense_cap)?
        }
        _ => {
            let kind = model.factored_kind().expect("approximation");
            if cfg.suite == Suite::Nkp {
                let f = factors()?;
                extra = f.seconds;
                build_basis(kind, &f.s1, &f.s2, cfg.pairing, cfg.dense_cap)?
            } else {
                build_basis(kind, &d.s1, &d.s2, cfg.pairing, cfg.dense_cap)?
            }
        }
    };
    let problem = GcrfProblem::build(&basis, d.y_train.view(), d.r_train.view())?;
    let opts = FitOptions { fix_beta_zero: cfg.beta_zero, ..FitOptions::default() };
    let fit = gcrf::fit(&problem, &opts)?;
    let yhat = gcrf::predict(&basis, fit.alpha, fit.beta, d.r_test.view())?;
    let seconds = start.elapsed().as_secs_f64() + extra;
    let mse = gcrf::mse(yhat.view(), d.y_test.view())?;
    Ok(Outcome { mse, seconds, iterations: fit.iterations })
}

/// All model records of one repetition, in `cfg.models` order.
pub fn run_repetition(cfg: &SuiteConfig, cell: &CellParams, rep: u64) -> Vec<RunRecord> {
    let base = |model: Model| RunRecord {
        suite: cfg.suite.name().into(),
        graph_type: cfg.graph.short_name().into(),
        n1: cell.n1,
        n2: cell.n2,
        rho1: cell.rho,
        rho2: cell.rho,
        sigma: cell.sigma,
        nkp_noise: cell.violation.unwrap_or(0.0),
        model: model.name().into(),
        rep,
        seed: cfg.base_seed,
        mse: None,
        runtime_s: None,
        iterations: None,
        failed: false,
        error: String::new(),
        residual_pre: None,
        residual_post: None,
    };
    let failed = |model: Model, msg: String| RunRecord { failed: true, error: msg, ..base(model) };

    let data = match gen_dataset(&cfg.dataset_spec(cell), RngStream::new(cfg.base_seed, rep)) {
        Ok(d) => d,
        Err(e) => return cfg.models.iter().map(|&m| failed(m, e.to_string())).collect(),
    };
    let needs_nkp = cfg
        .models
        .iter()
        .any(|&m| m == Model::BaseSvd || (cfg.suite == Suite::Nkp && m.factored_kind().is_some()));
    let nkp = needs_nkp.then(|| nkp_factors(&data, cfg.dense_cap).map_err(|e| e.to_string()));
    let (residual_pre, residual_post) = match &nkp {
        Some(Ok(f)) if cfg.suite == Suite::Nkp => (Some(f.residual_pre), Some(f.residual_post)),
        _ => (None, None),
    };

    cfg.models
        .iter()
        .map(|&model| {
            let rec = match evaluate(cfg, model, &data, nkp.as_ref()) {
                Ok(o) => RunRecord {
                    mse: Some(o.mse),
                    runtime_s: Some(o.seconds),
                    iterations: Some(o.iterations),
                    ..base(model)
                },
                Err(e) => failed(model, e.to_string()),
            };
            RunRecord { residual_pre, residual_post, ..rec }
        })
        .collect()
}

/// Runs every cell of the suite. Records are ordered by cell, then model,
/// then repetition, independent of scheduling.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let run_cell = |cell: &CellParams| -> Vec<Vec<RunRecord>> {
        let reps = 0..cfg.reps as u64;
        if cfg.suite == Suite::Timing {
            reps.map(|rep| run_repetition(cfg, cell, rep)).collect()
        } else {
            reps.into_par_iter().map(|rep| run_repetition(cfg, cell, rep)).collect()
        }
    };
    let pool = match cfg.workers {
        Some(n) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| HarnessError::Config(e.to_string()))?,
        ),
        None => None,
    };
    let mut out = Vec::new();
    for cell in cfg.cells() {
        let per_rep = match &pool {
            Some(p) => p.install(|| run_cell(&cell)),
            None => run_cell(&cell),
        };
        for m in 0..cfg.models.len() {
            out.extend(per_rep.iter().map(|recs| recs[m].clone()));
        }
    }
    Ok(out)
}

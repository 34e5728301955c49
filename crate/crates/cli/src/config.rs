use std::fmt;
use std::str::FromStr;

use kronreg::graph::DEFAULT_DENSE_CAP;
use kronreg::synthdata::DEFAULT_OUTPUT_NOISE;
use kronreg::{BasisKind, GraphKind, Pairing};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Fitness,
    Robustness,
    Timing,
    Nkp,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Fitness, Suite::Robustness, Suite::Timing, Suite::Nkp];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fitness => "fitness",
            Suite::Robustness => "robustness",
            Suite::Timing => "timing",
            Suite::Nkp => "nkp",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    /// Exact eigenbasis of the (possibly violated) product Laplacian.
    Base,
    /// Exact eigenbasis of the sparsified nearest Kronecker product.
    BaseSvd,
    LaplaceVec,
    NormLaplaceVec,
    Msn,
}

impl Model {
    pub const ALL: [Model; 5] = [Model::Base, Model::BaseSvd, Model::LaplaceVec, Model::NormLaplaceVec, Model::Msn];
    pub const APPROXIMATIONS: [Model; 3] = [Model::LaplaceVec, Model::NormLaplaceVec, Model::Msn];

    pub fn name(self) -> &'static str {
        match self {
            Model::Base => "base",
            Model::BaseSvd => "base_svd",
            Model::LaplaceVec => "laplace_vec",
            Model::NormLaplaceVec => "norm_laplace_vec",
            Model::Msn => "msn",
        }
    }

    /// Basis built from the factor pair.
    pub fn factored_kind(self) -> Option<BasisKind> {
        match self {
            Model::LaplaceVec => Some(BasisKind::LaplaceVec),
            Model::NormLaplaceVec => Some(BasisKind::NormLaplaceVec),
            Model::Msn => Some(BasisKind::Msn),
            Model::Base | Model::BaseSvd => None,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        let s = if s == "baseSVD" { "base_svd" } else { s };
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown model {s:?}")))
    }
}

/// Parses `30x50`.
pub fn parse_size(s: &str) -> Result<(usize, usize)> {
    let bad = || HarnessError::Config(format!("size {s:?} is not of the form N1xN2"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub graph: GraphKind,
    pub sizes: Vec<(usize, usize)>,
    pub densities: Vec<f64>,
    pub output_noises: Vec<f64>,
    pub nkp_noises: Vec<f64>,
    pub models: Vec<Model>,
    pub reps: usize,
    pub base_seed: u64,
    pub pairing: Pairing,
    pub dense_cap: usize,
    pub rewire: f64,
    /// Worker threads for repetitions; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Fit with β held at zero (the unstructured predictor).
    pub beta_zero: bool,
}

impl SuiteConfig {
    /// Defaults for `suite` mirroring the experiment design of each suite.
    pub fn new(suite: Suite, graph: GraphKind) -> Self {
        let mut cfg = Self {
            suite,
            graph,
            sizes: vec![(30, 50)],
            densities: vec![0.1, 0.3, 0.5, 0.65, 0.8],
            output_noises: vec![DEFAULT_OUTPUT_NOISE],
            nkp_noises: vec![],
            models: vec![Model::Base, Model::LaplaceVec, Model::NormLaplaceVec, Model::Msn],
            reps: 100,
            base_seed: 1,
            pairing: Pairing::Sorted,
            dense_cap: DEFAULT_DENSE_CAP,
            rewire: kronreg::randnet::DEFAULT_REWIRE,
            workers: None,
            beta_zero: false,
        };
        match suite {
            Suite::Fitness => {}
            Suite::Robustness => {
                cfg.densities = vec![0.5];
                cfg.output_noises = vec![0.0, 0.25, 0.33, 0.5];
            }
            Suite::Timing => {
                cfg.sizes = vec![(50, 30), (50, 100), (100, 200)];
                cfg.densities = vec![0.3];
                cfg.reps = 10;
            }
            Suite::Nkp => {
                cfg.densities = vec![0.1, 0.2, 0.3];
                cfg.nkp_noises = vec![0.0, 0.05, 0.1, 0.15, 0.2, 0.4, 0.6];
                cfg.models = Model::ALL.to_vec();
            }
        }
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(HarnessError::Config(m));
        if self.reps == 0 {
            return fail("reps must be at least 1".into());
        }
        if self.sizes.is_empty() {
            return fail("no sizes given".into());
        }
        if let Some(&(a, b)) = self.sizes.iter().find(|&&(a, b)| a < 2 || b < 2) {
            return fail(format!("factor orders must be >= 2, got {a}x{b}"));
        }
        if self.densities.is_empty() {
            return fail("no densities given".into());
        }
        if let Some(d) = self.densities.iter().find(|&&d| !(d > 0.0 && d <= 1.0)) {
            return fail(format!("density {d} outside (0, 1]"));
        }
        if self.output_noises.is_empty() {
            return fail("no output noise levels given".into());
        }
        if let Some(s) = self.output_noises.iter().find(|&&s| !(s >= 0.0) || !s.is_finite()) {
            return fail(format!("noise std {s} is invalid"));
        }
        if self.suite == Suite::Nkp && self.nkp_noises.is_empty() {
            return fail("nkp suite needs --nkp-noises".into());
        }
        if let Some(f) = self.nkp_noises.iter().find(|&&f| !(f >= 0.0) || !f.is_finite()) {
            return fail(format!("added-edge fraction {f} is invalid"));
        }
        if self.models.is_empty() {
            return fail("no models given".into());
        }
        if self.workers == Some(0) {
            return fail("workers must be at least 1".into());
        }
        Ok(())
    }

    /// Added-edge fractions swept by this suite; `None` means the product
    /// stays an exact Kronecker product.
    pub fn violations(&self) -> Vec<Option<f64>> {
        if self.suite == Suite::Nkp {
            self.nkp_noises.iter().map(|&f| Some(f)).collect()
        } else {
            vec![None]
        }
    }
}

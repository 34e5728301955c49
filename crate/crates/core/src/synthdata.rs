//! Synthetic instances: Kronecker-structured outputs, attribute-weighted
//! factor graphs, an unstructured predictor consistent with the GCRF mean,
//! and optional random violations of the Kronecker pattern.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2, ArrayView1};
use rand::seq::index;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::graph::{self, SimilarityMatrix};
use crate::io;
use crate::randnet::{self, attribute_kernel, GraphKind, RngStream};

pub const DEFAULT_OUTPUT_NOISE: f64 = 0.33;
pub const DEFAULT_ATTRIBUTE_NOISE: f64 = 0.25;
pub const TRUE_ALPHA: f64 = 1.0;
pub const TRUE_BETA: f64 = 5.0;

/// Similarity matrix of the product graph, kept factored when possible.
#[derive(Debug, Clone, PartialEq)]
pub enum ProductSimilarity {
    Kronecker { s1: SimilarityMatrix, s2: SimilarityMatrix },
    Dense(SimilarityMatrix),
}

impl ProductSimilarity {
    pub fn order(&self) -> usize {
        match self {
            ProductSimilarity::Kronecker { s1, s2 } => s1.order() * s2.order(),
            ProductSimilarity::Dense(s) => s.order(),
        }
    }

    pub fn is_kronecker(&self) -> bool {
        matches!(self, ProductSimilarity::Kronecker { .. })
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        match self {
            // (i,k)~(j,l) needs both i~j and k~l; each pair of factor
            // edges yields two product edges.
            ProductSimilarity::Kronecker { s1, s2 } => 2 * s1.edge_count() * s2.edge_count(),
            ProductSimilarity::Dense(s) => s.edge_count(),
        }
    }

    pub fn to_dense(&self, cap: usize) -> Result<SimilarityMatrix> {
        match self {
            ProductSimilarity::Kronecker { s1, s2 } => {
                SimilarityMatrix::new(graph::kronecker_with_cap(s1.view(), s2.view(), cap)?)
            }
            ProductSimilarity::Dense(s) => Ok(s.clone()),
        }
    }

    /// `L(S) x`; the Kronecker case works on the `n1 × n2` reshaping of `x`
    /// as `(d1 d2ᵀ) ∘ X − S1 X S2`.
    pub fn laplacian_apply(&self, x: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
        let n = self.order();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len() });
        }
        Ok(match self {
            ProductSimilarity::Kronecker { s1, s2 } => {
                let (n1, n2) = (s1.order(), s2.order());
                let grid = x.to_shape((n1, n2)).expect("length checked");
                let (d1, d2) = (s1.degrees(), s2.degrees());
                let mut out = s1.entries().dot(&grid).dot(s2.entries());
                out.indexed_iter_mut()
                    .for_each(|((i, k), v)| *v = d1[i] * d2[k] * grid[[i, k]] - *v);
                out.into_shape_with_order(n).expect("contiguous")
            }
            ProductSimilarity::Dense(s) => {
                let d = s.degrees();
                let sx = s.entries().dot(&x);
                Array1::from_shape_fn(n, |p| d[p] * x[p] - sx[p])
            }
        })
    }
}

/// Flat Kronecker product `a ⊗ b` of two vectors.
pub fn kron_vec(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> Array1<f64> {
    let n2 = b.len();
    Array1::from_shape_fn(a.len() * n2, |p| a[p / n2] * b[p % n2])
}

fn normal_vec<R: Rng + ?Sized>(n: usize, std: f64, rng: &mut R) -> Array1<f64> {
    (0..n).map(|_| std * rng.sample::<f64, _>(StandardNormal)).collect()
}

/// `(y1, y2, y1 ⊗ y2 + ν)` with standard normal `y1`, `y2` and
/// `ν ~ N(0, sigma1²)` entrywise.
pub fn gen_outputs<R: Rng + ?Sized>(
    n1: usize,
    n2: usize,
    sigma1: f64,
    rng: &mut R,
) -> Result<(Array1<f64>, Array1<f64>, Array1<f64>)> {
    if n1 < 2 || n2 < 2 {
        return Err(Error::InvalidArgument(format!("factor orders must be >= 2, got {n1}, {n2}")));
    }
    if !(sigma1 >= 0.0) {
        return Err(Error::InvalidArgument(format!("noise std {sigma1} is negative")));
    }
    let y1 = normal_vec(n1, 1.0, rng);
    let y2 = normal_vec(n2, 1.0, rng);
    let y = kron_vec(y1.view(), y2.view()) + normal_vec(n1 * n2, sigma1, rng);
    Ok((y1, y2, y))
}

/// Unstructured predictor `R = (αI + βL(S)) Y / α`, for which the GCRF
/// mean at `(α, β)` reproduces `Y`.
pub fn predictor_from_outputs(s: &ProductSimilarity, y: ArrayView1<'_, f64>, alpha: f64, beta: f64) -> Result<Array1<f64>> {
    let ly = s.laplacian_apply(y)?;
    Ok(&y + &(ly * (beta / alpha)))
}

/// Adds `⌊frac · |E|⌋` edges to a Kronecker similarity matrix at uniformly
/// chosen zero off-diagonal positions. `|E|` counts nonzero entries of `S`,
/// so every undirected edge contributes twice.
///
/// Row `p` decodes to the vertex pair `(p / n2, p % n2)`; a new edge between
/// `p` and `q` gets `k(y1p[p/n2], y1p[q/n2]) · k(y2p[p%n2], y2p[q%n2])`.
pub fn violate_kron<R: Rng + ?Sized>(
    s: &SimilarityMatrix,
    y1p: ArrayView1<'_, f64>,
    y2p: ArrayView1<'_, f64>,
    frac: f64,
    rng: &mut R,
) -> Result<SimilarityMatrix> {
    if !(frac >= 0.0) || !frac.is_finite() {
        return Err(Error::InvalidArgument(format!("violation fraction {frac} is invalid")));
    }
    let count = (frac * (2 * s.edge_count()) as f64 + 1e-9).floor() as usize;
    add_random_edges(s, y1p, y2p, count, rng)
}

/// [`violate_kron`] with an explicit number of added edges.
pub fn add_random_edges<R: Rng + ?Sized>(
    s: &SimilarityMatrix,
    y1p: ArrayView1<'_, f64>,
    y2p: ArrayView1<'_, f64>,
    count: usize,
    rng: &mut R,
) -> Result<SimilarityMatrix> {
    let (n1, n2) = (y1p.len(), y2p.len());
    let n = s.order();
    if n != n1 * n2 {
        return Err(Error::DimensionMismatch { expected: n1 * n2, found: n });
    }
    if count == 0 {
        return Ok(s.clone());
    }
    let entries = s.entries();
    let mut zeros = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            if entries[[p, q]] == 0.0 {
                zeros.push((p, q));
            }
        }
    }
    if count > zeros.len() {
        return Err(Error::InsufficientZeros { requested: count, available: zeros.len() });
    }
    let mut out = entries.clone();
    for idx in index::sample(rng, zeros.len(), count) {
        let (p, q) = zeros[idx];
        let w = attribute_kernel(y1p[p / n2], y1p[q / n2]) * attribute_kernel(y2p[p % n2], y2p[q % n2]);
        out[[p, q]] = w;
        out[[q, p]] = w;
    }
    SimilarityMatrix::new(out)
}

/// Generation parameters of one instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetSpec {
    pub graph: GraphKind,
    pub n1: usize,
    pub n2: usize,
    pub rho: f64,
    /// Std of the output noise `ν1`.
    pub output_noise: f64,
    /// Std of the attribute noise `ν2`.
    pub attribute_noise: f64,
    pub alpha: f64,
    pub beta: f64,
    pub rewire: f64,
    /// Fraction of added off-pattern edges; `None` keeps `S` factored.
    pub violation: Option<f64>,
}

impl DatasetSpec {
    pub fn new(graph: GraphKind, n1: usize, n2: usize, rho: f64) -> Self {
        Self {
            graph,
            n1,
            n2,
            rho,
            output_noise: DEFAULT_OUTPUT_NOISE,
            attribute_noise: DEFAULT_ATTRIBUTE_NOISE,
            alpha: TRUE_ALPHA,
            beta: TRUE_BETA,
            rewire: randnet::DEFAULT_REWIRE,
            violation: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub spec: DatasetSpec,
    pub stream: RngStream,
    pub s1: SimilarityMatrix,
    pub s2: SimilarityMatrix,
    pub s: ProductSimilarity,
    pub y1: Array1<f64>,
    pub y2: Array1<f64>,
    pub y1_noisy: Array1<f64>,
    pub y2_noisy: Array1<f64>,
    pub y_train: Array1<f64>,
    pub y_test: Array1<f64>,
    pub r_train: Array1<f64>,
    pub r_test: Array1<f64>,
}

const PART_STRUCTURE: u64 = 0;
const PART_TRAIN: u64 = 1;
const PART_TEST: u64 = 2;
const PART_VIOLATION: u64 = 3;

/// Draws one instance. Structure, train noise, test noise and violations
/// use separate child streams, so changing the output noise level leaves
/// graphs and attributes untouched.
pub fn gen_dataset(spec: &DatasetSpec, stream: RngStream) -> Result<Dataset> {
    let DatasetSpec { n1, n2, .. } = *spec;
    if n1 < 2 || n2 < 2 {
        return Err(Error::InvalidArgument(format!("factor orders must be >= 2, got {n1}, {n2}")));
    }
    for (name, v) in [("output noise", spec.output_noise), ("attribute noise", spec.attribute_noise)] {
        if !(v >= 0.0) {
            return Err(Error::InvalidArgument(format!("{name} std {v} is negative")));
        }
    }
    if !(spec.alpha > 0.0) {
        return Err(Error::NonPositiveParam { name: "alpha", value: spec.alpha });
    }

    let mut rng = stream.child(PART_STRUCTURE).rng();
    let y1 = normal_vec(n1, 1.0, &mut rng);
    let y2 = normal_vec(n2, 1.0, &mut rng);
    let y1_noisy = &y1 + &normal_vec(n1, spec.attribute_noise, &mut rng);
    let y2_noisy = &y2 + &normal_vec(n2, spec.attribute_noise, &mut rng);
    let g = randnet::generate(spec.graph, n1, spec.rho, spec.rewire, &mut rng)?;
    let h = randnet::generate(spec.graph, n2, spec.rho, spec.rewire, &mut rng)?;
    let s1 = randnet::assign_weights(&g, y1_noisy.view())?;
    let s2 = randnet::assign_weights(&h, y2_noisy.view())?;

    let s = match spec.violation {
        None => ProductSimilarity::Kronecker { s1: s1.clone(), s2: s2.clone() },
        Some(frac) => {
            let k = graph::kron_similarity(&s1, &s2)?;
            let mut vrng = stream.child(PART_VIOLATION).rng();
            ProductSimilarity::Dense(violate_kron(&k, y1_noisy.view(), y2_noisy.view(), frac, &mut vrng)?)
        }
    };

    let clean = kron_vec(y1.view(), y2.view());
    let noisy = |part: u64| -> Result<(Array1<f64>, Array1<f64>)> {
        let mut rng = stream.child(part).rng();
        let y = &clean + &normal_vec(n1 * n2, spec.output_noise, &mut rng);
        let r = predictor_from_outputs(&s, y.view(), spec.alpha, spec.beta)?;
        Ok((y, r))
    };
    let (y_train, r_train) = noisy(PART_TRAIN)?;
    let (y_test, r_test) = noisy(PART_TEST)?;

    Ok(Dataset {
        spec: *spec,
        stream,
        s1,
        s2,
        s,
        y1,
        y2,
        y1_noisy,
        y2_noisy,
        y_train,
        y_test,
        r_train,
        r_test,
    })
}

impl Dataset {
    /// Key-value description of the generation parameters.
    pub fn meta(&self) -> String {
        let sp = &self.spec;
        let mut out = String::new();
        let _ = writeln!(out, "graph={}", sp.graph.short_name());
        let _ = writeln!(out, "n1={}", sp.n1);
        let _ = writeln!(out, "n2={}", sp.n2);
        let _ = writeln!(out, "rho={}", sp.rho);
        let _ = writeln!(out, "output_noise={}", sp.output_noise);
        let _ = writeln!(out, "attribute_noise={}", sp.attribute_noise);
        let _ = writeln!(out, "alpha={}", sp.alpha);
        let _ = writeln!(out, "beta={}", sp.beta);
        let _ = writeln!(out, "rewire={}", sp.rewire);
        let _ = writeln!(out, "violation={}", sp.violation.map_or("none".to_string(), |v| v.to_string()));
        let _ = writeln!(out, "seed={}", self.stream.seed);
        let _ = writeln!(out, "stream={}", self.stream.stream);
        let _ = writeln!(out, "s_kind={}", if self.s.is_kronecker() { "kronecker" } else { "dense" });
        out
    }

    /// Writes `S1.csv`, `S2.csv`, `S.csv` (violated instances only; the
    /// Kronecker case is `S1 ⊗ S2`), outputs, predictors and `meta.txt`.
    pub fn write_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        io::write_matrix_csv(dir.join("S1.csv"), self.s1.view())?;
        io::write_matrix_csv(dir.join("S2.csv"), self.s2.view())?;
        if let ProductSimilarity::Dense(s) = &self.s {
            io::write_matrix_csv(dir.join("S.csv"), s.view())?;
        }
        let vectors: [(&str, &Array1<f64>); 8] = [
            ("y1", &self.y1),
            ("y2", &self.y2),
            ("y1_noisy", &self.y1_noisy),
            ("y2_noisy", &self.y2_noisy),
            ("y_train", &self.y_train),
            ("y_test", &self.y_test),
            ("R_train", &self.r_train),
            ("R_test", &self.r_test),
        ];
        for (name, v) in vectors {
            io::write_vector_csv(dir.join(format!("{name}.csv")), v.view())?;
        }
        fs::write(dir.join("meta.txt"), self.meta())?;
        Ok(())
    }

    /// Train/test outputs as `n1 × n2` grids.
    pub fn y_train_grid(&self) -> Array2<f64> {
        self.y_train.to_shape((self.spec.n1, self.spec.n2)).expect("consistent").to_owned()
    }
}

//! Nearest Kronecker product `min ‖A − B ⊗ C‖_F` through the rank-1
//! approximation of the rearranged matrix `ℛ(A)`, and thresholding of the
//! recovered factors back into sparse similarity matrices.
//!
//! `vec` stacks columns. Row `j * m1 + i` of `ℛ(A)` is `vec(A_ij)ᵀ`, where
//! `A_ij` is the `m2 × n2` block in block-row `i`, block-column `j`.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::graph::{self, SimilarityMatrix};
use crate::randnet::RngStream;

pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITER: usize = 5000;
/// Seed of the power-iteration start vector used by [`nearest_kron`].
pub const NKP_SEED: u64 = 0x6e6b70;
const DUST: f64 = 1e-12;
/// Relative tolerance for asymmetry and negative entries in recovered factors.
const FACTOR_RTOL: f64 = 1e-8;

/// Column-stacking `vec`.
pub fn vec_op(m: ArrayView2<'_, f64>) -> Array1<f64> {
    m.t().iter().copied().collect()
}

/// Inverse of [`vec_op`].
pub fn unvec(v: ArrayView1<'_, f64>, rows: usize, cols: usize) -> Result<Array2<f64>> {
    if v.len() != rows * cols {
        return Err(Error::DimensionMismatch { expected: rows * cols, found: v.len() });
    }
    Ok(Array2::from_shape_fn((rows, cols), |(i, j)| v[j * rows + i]))
}

/// Block shape of a `(m1 m2) × (n1 n2)` matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockShape {
    pub m1: usize,
    pub n1: usize,
    pub m2: usize,
    pub n2: usize,
}

impl BlockShape {
    fn check(&self, a: ArrayView2<'_, f64>) -> Result<()> {
        let (rows, cols) = a.dim();
        if rows != self.m1 * self.m2 || cols != self.n1 * self.n2 {
            let BlockShape { m1, n1, m2, n2 } = *self;
            return Err(Error::BadFactorization { rows, cols, m1, n1, m2, n2 });
        }
        Ok(())
    }
}

/// Materialized `ℛ(A)`, of shape `(m1 n1) × (m2 n2)`.
pub fn rearrange(a: ArrayView2<'_, f64>, shape: BlockShape) -> Result<Array2<f64>> {
    let view = RearrangedView::new(a, shape)?;
    let BlockShape { m1, n1, m2, n2 } = shape;
    Ok(Array2::from_shape_fn((m1 * n1, m2 * n2), |(r, c)| view.entry(r, c)))
}

/// Matrix-free operator interface for the power iteration.
pub trait LinearOperator {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    /// `M x`.
    fn apply(&self, x: ArrayView1<'_, f64>) -> Array1<f64>;
    /// `Mᵀ y`.
    fn apply_transpose(&self, y: ArrayView1<'_, f64>) -> Array1<f64>;
}

impl LinearOperator for ArrayView2<'_, f64> {
    fn nrows(&self) -> usize {
        self.nrows()
    }

    fn ncols(&self) -> usize {
        self.ncols()
    }

    fn apply(&self, x: ArrayView1<'_, f64>) -> Array1<f64> {
        self.dot(&x)
    }

    fn apply_transpose(&self, y: ArrayView1<'_, f64>) -> Array1<f64> {
        self.t().dot(&y)
    }
}

impl LinearOperator for Array2<f64> {
    fn nrows(&self) -> usize {
        self.nrows()
    }

    fn ncols(&self) -> usize {
        self.ncols()
    }

    fn apply(&self, x: ArrayView1<'_, f64>) -> Array1<f64> {
        self.dot(&x)
    }

    fn apply_transpose(&self, y: ArrayView1<'_, f64>) -> Array1<f64> {
        self.t().dot(&y)
    }
}

/// `ℛ(A)` as an operator reading `A` in place.
#[derive(Debug, Clone, Copy)]
pub struct RearrangedView<'a> {
    a: ArrayView2<'a, f64>,
    shape: BlockShape,
}

impl<'a> RearrangedView<'a> {
    pub fn new(a: ArrayView2<'a, f64>, shape: BlockShape) -> Result<Self> {
        shape.check(a)?;
        Ok(Self { a, shape })
    }

    /// `ℛ(A)[r, c]`.
    pub fn entry(&self, r: usize, c: usize) -> f64 {
        let BlockShape { m1, m2, n2, .. } = self.shape;
        let (i, j) = (r % m1, r / m1);
        let (k, l) = (c % m2, c / m2);
        self.a[[i * m2 + k, j * n2 + l]]
    }
}

impl LinearOperator for RearrangedView<'_> {
    fn nrows(&self) -> usize {
        self.shape.m1 * self.shape.n1
    }

    fn ncols(&self) -> usize {
        self.shape.m2 * self.shape.n2
    }

    fn apply(&self, x: ArrayView1<'_, f64>) -> Array1<f64> {
        let BlockShape { m1, n1, m2, n2 } = self.shape;
        let mut out = Array1::zeros(m1 * n1);
        for i in 0..m1 {
            for j in 0..n1 {
                let mut acc = 0.0;
                for l in 0..n2 {
                    let col = j * n2 + l;
                    for k in 0..m2 {
                        acc += self.a[[i * m2 + k, col]] * x[l * m2 + k];
                    }
                }
                out[j * m1 + i] = acc;
            }
        }
        out
    }

    fn apply_transpose(&self, y: ArrayView1<'_, f64>) -> Array1<f64> {
        let BlockShape { m1, n1, m2, n2 } = self.shape;
        let mut out = Array1::zeros(m2 * n2);
        for i in 0..m1 {
            for j in 0..n1 {
                let w = y[j * m1 + i];
                if w == 0.0 {
                    continue;
                }
                for l in 0..n2 {
                    let col = j * n2 + l;
                    for k in 0..m2 {
                        out[l * m2 + k] += w * self.a[[i * m2 + k, col]];
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularTriple {
    pub sigma: f64,
    pub u: Array1<f64>,
    pub v: Array1<f64>,
    pub iterations: usize,
}

fn norm(x: &Array1<f64>) -> f64 {
    x.dot(x).sqrt()
}

/// Leading singular triple by power iteration on `MᵀM`.
///
/// Stops once `‖M v − σ u‖ ≤ tol σ`; `Mᵀ u = σ v` holds by construction.
pub fn dominant_singular_triple<M, R>(
    m: &M,
    tol: f64,
    max_iter: usize,
    rng: &mut R,
) -> Result<SingularTriple>
where
    M: LinearOperator + ?Sized,
    R: Rng + ?Sized,
{
    let mut v: Array1<f64> = (0..m.ncols()).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let nv = norm(&v);
    if nv == 0.0 {
        return Err(Error::ZeroOperator);
    }
    v /= nv;
    let mut mv = m.apply(v.view());
    for it in 1..=max_iter {
        let nu = norm(&mv);
        if nu == 0.0 {
            return Err(Error::ZeroOperator);
        }
        let u = &mv / nu;
        let w = m.apply_transpose(u.view());
        let sigma = norm(&w);
        if sigma == 0.0 {
            return Err(Error::ZeroOperator);
        }
        v = w / sigma;
        mv = m.apply(v.view());
        let resid = norm(&(&mv - &(&u * sigma)));
        if resid <= tol * sigma {
            return Ok(SingularTriple { sigma, u, v, iterations: it });
        }
    }
    Err(Error::NoConvergence { what: "power iteration", iterations: max_iter })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KronFactors {
    pub b: Array2<f64>,
    pub c: Array2<f64>,
    pub sigma1: f64,
    pub residual_fro: f64,
}

/// `‖A − B ⊗ C‖_F` without forming `B ⊗ C`.
pub fn kron_residual(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>, c: ArrayView2<'_, f64>) -> Result<f64> {
    let (m1, n1) = b.dim();
    let (m2, n2) = c.dim();
    BlockShape { m1, n1, m2, n2 }.check(a)?;
    let mut acc = 0.0;
    for ((r, col), &v) in a.indexed_iter() {
        let d = v - b[[r / m2, col / n2]] * c[[r % m2, col % n2]];
        acc += d * d;
    }
    Ok(acc.sqrt())
}

/// Nearest `B ⊗ C` to a square `(n1 n2) × (n1 n2)` matrix with square
/// `n1 × n1` and `n2 × n2` factors.
pub fn nearest_kron(a: ArrayView2<'_, f64>, n1: usize, n2: usize) -> Result<KronFactors> {
    let shape = BlockShape { m1: n1, n1, m2: n2, n2 };
    let mut rng = RngStream::new(NKP_SEED, 0).rng();
    nearest_kron_with(a, shape, POWER_TOL, POWER_MAX_ITER, &mut rng)
}

/// General-shape variant of [`nearest_kron`].
pub fn nearest_kron_with<R: Rng + ?Sized>(
    a: ArrayView2<'_, f64>,
    shape: BlockShape,
    tol: f64,
    max_iter: usize,
    rng: &mut R,
) -> Result<KronFactors> {
    let view = RearrangedView::new(a, shape)?;
    let SingularTriple { sigma, u, v, .. } = dominant_singular_triple(&view, tol, max_iter, rng)?;
    let mut b = unvec((&u * sigma).view(), shape.m1, shape.n1)?;
    let mut c = unvec(v.view(), shape.m2, shape.n2)?;
    if b.sum() < 0.0 {
        b.mapv_inplace(|x| -x);
        c.mapv_inplace(|x| -x);
    }
    let residual_fro = kron_residual(a, b.view(), c.view())?;
    Ok(KronFactors { b, c, sigma1: sigma, residual_fro })
}

/// Number of undirected edges a graph of order `n` has at density `rho`.
fn kept_pairs(n: usize, rho: f64) -> usize {
    let pairs = n * n.saturating_sub(1) / 2;
    ((rho * pairs as f64 + 1e-9).floor() as usize).min(pairs)
}

/// Keeps the `⌊ρ n(n−1)/2⌋` largest off-diagonal entries of a symmetric
/// nonnegative factor and zeroes the rest.
pub fn sparsify_factor(m: ArrayView2<'_, f64>, rho: f64) -> Result<SimilarityMatrix> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.ncols() });
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidArgument(format!("density {rho} outside [0, 1]")));
    }
    let scale = m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let mut deviation = 0.0_f64;
    for i in 0..n {
        for j in 0..i {
            deviation = deviation.max((m[[i, j]] - m[[j, i]]).abs());
        }
    }
    if deviation > FACTOR_RTOL * scale {
        return Err(Error::AsymmetricFactor { deviation });
    }
    if m.iter().any(|&v| v < -FACTOR_RTOL * scale) {
        return Err(Error::InvalidMatrix("factor has negative entries".into()));
    }

    let mut candidates: Vec<(usize, usize, f64)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let w = 0.5 * (m[[i, j]] + m[[j, i]]);
            if w > DUST {
                candidates.push((i, j, w));
            }
        }
    }
    candidates.sort_by(|a, b| b.2.total_cmp(&a.2));
    candidates.truncate(kept_pairs(n, rho));
    SimilarityMatrix::from_edges(n, &candidates)
}

/// [`sparsify_factor`] applied to both recovered factors.
pub fn sparsify_factors(
    f: &KronFactors,
    rho1: f64,
    rho2: f64,
) -> Result<(SimilarityMatrix, SimilarityMatrix)> {
    Ok((sparsify_factor(f.b.view(), rho1)?, sparsify_factor(f.c.view(), rho2)?))
}

/// `‖A − S1 ⊗ S2‖_F` for similarity factors.
pub fn similarity_residual(a: &SimilarityMatrix, s1: &SimilarityMatrix, s2: &SimilarityMatrix) -> Result<f64> {
    kron_residual(a.view(), s1.view(), s2.view())
}

/// Convenience wrapper: full Kronecker product of the recovered factors.
pub fn reconstruct(f: &KronFactors) -> Result<Array2<f64>> {
    graph::kronecker(f.b.view(), f.c.view())
}

//! Weighted graphs as dense similarity matrices and the matrices derived
//! from them.

use ndarray::{Array1, Array2, ArrayView2};

use crate::error::{Error, Result};

/// Largest matrix order that dense constructions will materialize.
///
/// An order-8192 `f64` matrix is 512 MiB; the exact eigenbasis needs a few
/// of those at once.
pub const DEFAULT_DENSE_CAP: usize = 8192;

const SYMMETRY_RTOL: f64 = 1e-12;

/// Symmetric, nonnegative weighted adjacency matrix with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    entries: Array2<f64>,
}

impl SimilarityMatrix {
    pub fn new(entries: Array2<f64>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(Error::InvalidMatrix(format!("{rows}x{cols} is not square")));
        }
        for i in 0..rows {
            if entries[[i, i]] != 0.0 {
                return Err(Error::InvalidMatrix(format!(
                    "nonzero diagonal entry {} at {i}",
                    entries[[i, i]]
                )));
            }
            for j in 0..i {
                let (a, b) = (entries[[i, j]], entries[[j, i]]);
                if !a.is_finite() || !b.is_finite() || a < 0.0 || b < 0.0 {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({i}, {j}) is negative or not finite"
                    )));
                }
                if (a - b).abs() > SYMMETRY_RTOL * a.max(b) {
                    return Err(Error::InvalidMatrix(format!(
                        "asymmetric pair ({i}, {j}): {a} vs {b}"
                    )));
                }
            }
        }
        let mut entries = entries;
        for i in 0..rows {
            for j in 0..i {
                let avg = 0.5 * (entries[[i, j]] + entries[[j, i]]);
                entries[[i, j]] = avg;
                entries[[j, i]] = avg;
            }
        }
        Ok(Self { entries })
    }

    /// Edgeless graph on `n` vertices.
    pub fn zeros(n: usize) -> Self {
        Self { entries: Array2::zeros((n, n)) }
    }

    /// Builds a matrix from undirected weighted edges `(i, j, w)`.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut entries = Array2::zeros((n, n));
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidMatrix(format!("edge ({i}, {j}) out of range for n = {n}")));
            }
            if i == j {
                return Err(Error::InvalidMatrix(format!("self-loop at {i}")));
            }
            entries[[i, j]] = w;
            entries[[j, i]] = w;
        }
        Self::new(entries)
    }

    /// Unit-weight graph with the given 0/1 adjacency pattern.
    pub fn unweighted(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let weighted: Vec<_> = edges.iter().map(|&(i, j)| (i, j, 1.0)).collect();
        Self::from_edges(n, &weighted)
    }

    pub fn order(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.entries.view()
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.entries
    }

    /// Weighted degrees (row sums).
    pub fn degrees(&self) -> Array1<f64> {
        self.entries.sum_axis(ndarray::Axis(1))
    }

    /// Number of unordered vertex pairs with a positive weight.
    pub fn edge_count(&self) -> usize {
        let n = self.order();
        (0..n)
            .map(|i| (i + 1..n).filter(|&j| self.entries[[i, j]] > 0.0).count())
            .sum()
    }

    /// First vertex whose degree is zero, if any.
    pub fn isolated_vertex(&self) -> Option<usize> {
        self.degrees().iter().position(|&d| d == 0.0)
    }
}

/// Dense symmetric matrix (Laplacians and similar operators).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymMatrix {
    entries: Array2<f64>,
}

impl DenseSymMatrix {
    pub fn new(entries: Array2<f64>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(Error::InvalidMatrix(format!("{rows}x{cols} is not square")));
        }
        let scale = entries.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..rows {
            for j in 0..i {
                if (entries[[i, j]] - entries[[j, i]]).abs() > SYMMETRY_RTOL * scale {
                    return Err(Error::InvalidMatrix(format!("asymmetric pair ({i}, {j})")));
                }
            }
        }
        Ok(Self { entries })
    }

    pub(crate) fn from_symmetric(entries: Array2<f64>) -> Self {
        debug_assert_eq!(entries.nrows(), entries.ncols());
        Self { entries }
    }

    pub fn order(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.diag().sum()
    }
}

/// `L = D - S`.
pub fn laplacian(s: &SimilarityMatrix) -> DenseSymMatrix {
    let degrees = s.degrees();
    let mut l = s.entries().mapv(|w| -w);
    for (i, d) in degrees.iter().enumerate() {
        l[[i, i]] = *d;
    }
    DenseSymMatrix::from_symmetric(l)
}

/// `D^{-1/2} S D^{-1/2}`, i.e. `I - 𝓛`.
pub fn normalized_adjacency(s: &SimilarityMatrix) -> Result<DenseSymMatrix> {
    if let Some(vertex) = s.isolated_vertex() {
        return Err(Error::IsolatedVertex { vertex });
    }
    let inv_sqrt = s.degrees().mapv(|d| d.sqrt().recip());
    let n = s.order();
    let a = Array2::from_shape_fn((n, n), |(i, j)| inv_sqrt[i] * s.entries()[[i, j]] * inv_sqrt[j]);
    Ok(DenseSymMatrix::from_symmetric(a))
}

/// `𝓛 = I - D^{-1/2} S D^{-1/2}`; fails on isolated vertices.
pub fn normalized_laplacian(s: &SimilarityMatrix) -> Result<DenseSymMatrix> {
    let mut a = normalized_adjacency(s)?.into_inner();
    a.mapv_inplace(|v| -v);
    for i in 0..a.nrows() {
        a[[i, i]] += 1.0;
    }
    Ok(DenseSymMatrix::from_symmetric(a))
}

/// Kronecker product with the default order cap.
pub fn kronecker(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
    kronecker_with_cap(a, b, DEFAULT_DENSE_CAP)
}

/// Kronecker product `A ⊗ B`: entry `(p*i + k, q*j + l)` is `A[i,j] * B[k,l]`
/// where `B` is `p × q`.
pub fn kronecker_with_cap(
    a: ArrayView2<'_, f64>,
    b: ArrayView2<'_, f64>,
    cap: usize,
) -> Result<Array2<f64>> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let (rows, cols) = (ar * br, ac * bc);
    if rows.max(cols) > cap {
        return Err(Error::SizeOverflow { order: rows.max(cols), cap });
    }
    let mut out = Array2::zeros((rows, cols));
    for ((i, j), &aij) in a.indexed_iter() {
        if aij == 0.0 {
            continue;
        }
        let mut block = out.slice_mut(ndarray::s![i * br..(i + 1) * br, j * bc..(j + 1) * bc]);
        block.zip_mut_with(&b, |o, &bkl| *o = aij * bkl);
    }
    Ok(out)
}

/// Similarity matrix of the Kronecker product graph.
pub fn kron_similarity(s1: &SimilarityMatrix, s2: &SimilarityMatrix) -> Result<SimilarityMatrix> {
    let k = kronecker(s1.view(), s2.view())?;
    Ok(SimilarityMatrix { entries: k })
}

/// Fraction of unordered vertex pairs that carry an edge.
pub fn edge_density(s: &SimilarityMatrix) -> f64 {
    let n = s.order();
    if n < 2 {
        return 0.0;
    }
    s.edge_count() as f64 / (n * (n - 1) / 2) as f64
}

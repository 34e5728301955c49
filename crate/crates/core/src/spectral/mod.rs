//! Eigenbases for the Laplacian of a Kronecker product graph.
//!
//! A [`SpectralBasis`] pairs an orthonormal basis of `R^{n1 n2}` with one
//! (exact or estimated) Laplacian eigenvalue per basis vector. Factored
//! bases store `W1` and `W2` and represent `W1 ⊗ W2` implicitly; the
//! eigenvalue at flat index `n2 * i + j` belongs to column `w1_i ⊗ w2_j`.

mod eigen;
mod estimate;

use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, Array2, ArrayView1};

use crate::error::{Error, Result};

pub use eigen::{sym_eig, EigenSystem};
pub use estimate::{
    approx_laplace_vec, approx_msn, approx_norm_laplace_vec, build_basis, exact_basis,
    exact_kron_basis, exact_kron_basis_with_cap,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisKind {
    /// Numerical eigendecomposition of the full product Laplacian.
    ExactDense,
    /// Kronecker products of factor Laplacian eigenvectors.
    LaplaceVec,
    /// Kronecker products of factor normalized-adjacency eigenvectors with
    /// degree-scaled eigenvalues.
    NormLaplaceVec,
    /// Exact eigensystem of the product's normalized Laplacian, standing in
    /// for the combinatorial one.
    Msn,
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisKind::ExactDense => "exact_dense",
            BasisKind::LaplaceVec => "laplace_vec",
            BasisKind::NormLaplaceVec => "norm_laplace_vec",
            BasisKind::Msn => "msn",
        })
    }
}

/// How factor eigenvalues are matched with factor degrees in the
/// degree-weighted estimates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Pairing {
    /// Rank pairing: ascending degrees against ascending Laplacian
    /// eigenvalues (descending normalized-adjacency eigenvalues).
    #[default]
    Sorted,
    /// Eigenvector `i` (in the same eigenvalue order) takes the degree of
    /// vertex `i`.
    VertexOrder,
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pairing::Sorted => "sorted",
            Pairing::VertexOrder => "vertex-order",
        })
    }
}

impl FromStr for Pairing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sorted" => Ok(Pairing::Sorted),
            "vertex-order" | "vertex_order" => Ok(Pairing::VertexOrder),
            other => Err(Error::InvalidArgument(format!("unknown pairing {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Vectors {
    Dense(Array2<f64>),
    Factored { left: Array2<f64>, right: Array2<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBasis {
    kind: BasisKind,
    vectors: Vectors,
    eigenvalues: Array1<f64>,
}

/// Negative estimates are clamped to zero so that `αI + β diag(μ̂)` stays
/// positive definite for `α > 0, β ≥ 0`.
fn clamp_nonnegative(mut values: Array1<f64>) -> Array1<f64> {
    values.mapv_inplace(|v| v.max(0.0));
    values
}

impl SpectralBasis {
    /// Basis with explicitly stored `N × N` orthonormal vectors.
    pub fn from_dense(kind: BasisKind, vectors: Array2<f64>, eigenvalues: Array1<f64>) -> Result<Self> {
        let n = vectors.nrows();
        if vectors.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: vectors.ncols() });
        }
        if eigenvalues.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: eigenvalues.len() });
        }
        Ok(Self { kind, vectors: Vectors::Dense(vectors), eigenvalues: clamp_nonnegative(eigenvalues) })
    }

    /// Basis `left ⊗ right`; `eigenvalues[n2 * i + j]` pairs with column
    /// `left_i ⊗ right_j`.
    pub fn from_factors(
        kind: BasisKind,
        left: Array2<f64>,
        right: Array2<f64>,
        eigenvalues: Array1<f64>,
    ) -> Result<Self> {
        for m in [&left, &right] {
            if m.nrows() != m.ncols() {
                return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
            }
        }
        let n = left.nrows() * right.nrows();
        if eigenvalues.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: eigenvalues.len() });
        }
        Ok(Self {
            kind,
            vectors: Vectors::Factored { left, right },
            eigenvalues: clamp_nonnegative(eigenvalues),
        })
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// Dimension `N` of the space the basis spans.
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &Array1<f64> {
        &self.eigenvalues
    }

    /// `(W1, W2)` for factored bases.
    pub fn factors(&self) -> Option<(&Array2<f64>, &Array2<f64>)> {
        match &self.vectors {
            Vectors::Factored { left, right } => Some((left, right)),
            Vectors::Dense(_) => None,
        }
    }

    pub fn dense_vectors(&self) -> Option<&Array2<f64>> {
        match &self.vectors {
            Vectors::Dense(u) => Some(u),
            Vectors::Factored { .. } => None,
        }
    }

    /// Materializes the full `N × N` basis matrix.
    pub fn to_dense(&self, cap: usize) -> Result<Array2<f64>> {
        match &self.vectors {
            Vectors::Dense(u) => Ok(u.clone()),
            Vectors::Factored { left, right } => {
                crate::graph::kronecker_with_cap(left.view(), right.view(), cap)
            }
        }
    }

    fn check_len(&self, x: &ArrayView1<'_, f64>) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        Ok(())
    }

    /// Coordinates `Uᵀ x`. Factored bases compute `W1ᵀ X W2` on the
    /// `n1 × n2` reshaping of `x`, never forming `U`.
    pub fn project(&self, x: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
        self.check_len(&x)?;
        Ok(match &self.vectors {
            Vectors::Dense(u) => u.t().dot(&x),
            Vectors::Factored { left, right } => {
                let grid = x.to_shape((left.nrows(), right.nrows())).expect("length checked");
                let coeffs = left.t().dot(&grid).dot(right);
                coeffs.into_shape_with_order(self.dim()).expect("contiguous")
            }
        })
    }

    /// Inverse of [`project`](Self::project): `U c`.
    pub fn back_project(&self, coeffs: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
        self.check_len(&coeffs)?;
        Ok(match &self.vectors {
            Vectors::Dense(u) => u.dot(&coeffs),
            Vectors::Factored { left, right } => {
                let grid = coeffs.to_shape((left.nrows(), right.nrows())).expect("length checked");
                let x = left.dot(&grid).dot(&right.t());
                x.into_shape_with_order(self.dim()).expect("contiguous")
            }
        })
    }
}

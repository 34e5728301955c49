use ndarray::{s, Array1};

use super::eigen::{sym_eig, sym_eig_array, EigenSystem};
use super::{BasisKind, Pairing, SpectralBasis};
use crate::error::{Error, Result};
use crate::graph::{self, SimilarityMatrix, DEFAULT_DENSE_CAP};

/// Exact eigenbasis of `L(S1 ⊗ S2)` using the default dense cap.
pub fn exact_kron_basis(s1: &SimilarityMatrix, s2: &SimilarityMatrix) -> Result<SpectralBasis> {
    exact_kron_basis_with_cap(s1, s2, DEFAULT_DENSE_CAP)
}

pub fn exact_kron_basis_with_cap(
    s1: &SimilarityMatrix,
    s2: &SimilarityMatrix,
    cap: usize,
) -> Result<SpectralBasis> {
    let product = graph::kronecker_with_cap(s1.view(), s2.view(), cap)?;
    exact_basis(&SimilarityMatrix::new(product)?, cap)
}

/// Exact eigenbasis of `L(S)` for an arbitrary (not necessarily Kronecker)
/// similarity matrix.
pub fn exact_basis(s: &SimilarityMatrix, cap: usize) -> Result<SpectralBasis> {
    if s.order() > cap {
        return Err(Error::SizeOverflow { order: s.order(), cap });
    }
    let EigenSystem { values, vectors } = sym_eig(&graph::laplacian(s))?;
    SpectralBasis::from_dense(BasisKind::ExactDense, vectors, values)
}

fn sorted_ascending(v: &Array1<f64>) -> Array1<f64> {
    let mut out = v.to_vec();
    out.sort_by(f64::total_cmp);
    Array1::from(out)
}

fn paired_degrees(s: &SimilarityMatrix, pairing: Pairing) -> Array1<f64> {
    match pairing {
        Pairing::Sorted => sorted_ascending(&s.degrees()),
        Pairing::VertexOrder => s.degrees(),
    }
}

/// Eigenpairs of `D^{-1/2} S D^{-1/2}` with eigenvalues descending.
fn normalized_adjacency_desc(s: &SimilarityMatrix) -> Result<EigenSystem> {
    let a = graph::normalized_adjacency(s)?;
    let EigenSystem { values, vectors } = sym_eig_array(a.entries())?;
    Ok(EigenSystem {
        values: values.slice(s![..;-1]).to_owned(),
        vectors: vectors.slice(s![.., ..;-1]).to_owned(),
    })
}

fn outer_flat(n1: usize, n2: usize, f: impl Fn(usize, usize) -> f64) -> Array1<f64> {
    Array1::from_shape_fn(n1 * n2, |p| f(p / n2, p % n2))
}

/// Factor Laplacian eigenvectors with eigenvalues
/// `μ_i d_j + d_i μ_j − μ_i μ_j`, degrees paired per `pairing`.
pub fn approx_laplace_vec(
    s1: &SimilarityMatrix,
    s2: &SimilarityMatrix,
    pairing: Pairing,
) -> Result<SpectralBasis> {
    let e1 = sym_eig(&graph::laplacian(s1))?;
    let e2 = sym_eig(&graph::laplacian(s2))?;
    let (d1, d2) = (paired_degrees(s1, pairing), paired_degrees(s2, pairing));
    let (m1, m2) = (&e1.values, &e2.values);
    let mu = outer_flat(s1.order(), s2.order(), |i, j| {
        m1[i] * d2[j] + d1[i] * m2[j] - m1[i] * m2[j]
    });
    SpectralBasis::from_factors(BasisKind::LaplaceVec, e1.vectors, e2.vectors, mu)
}

/// Factor normalized-adjacency eigenvectors with eigenvalues
/// `(1 − λ_i λ_j) d_i d_j`, degrees paired per `pairing`.
pub fn approx_norm_laplace_vec(
    s1: &SimilarityMatrix,
    s2: &SimilarityMatrix,
    pairing: Pairing,
) -> Result<SpectralBasis> {
    let e1 = normalized_adjacency_desc(s1)?;
    let e2 = normalized_adjacency_desc(s2)?;
    let (d1, d2) = (paired_degrees(s1, pairing), paired_degrees(s2, pairing));
    let (l1, l2) = (&e1.values, &e2.values);
    let mu = outer_flat(s1.order(), s2.order(), |i, j| (1.0 - l1[i] * l2[j]) * d1[i] * d2[j]);
    SpectralBasis::from_factors(BasisKind::NormLaplaceVec, e1.vectors, e2.vectors, mu)
}

/// Exact eigensystem of the product's normalized Laplacian,
/// `1 − λ_i λ_j` on `v_i ⊗ v_j`.
pub fn approx_msn(s1: &SimilarityMatrix, s2: &SimilarityMatrix) -> Result<SpectralBasis> {
    let e1 = normalized_adjacency_desc(s1)?;
    let e2 = normalized_adjacency_desc(s2)?;
    let (l1, l2) = (&e1.values, &e2.values);
    let mu = outer_flat(s1.order(), s2.order(), |i, j| 1.0 - l1[i] * l2[j]);
    SpectralBasis::from_factors(BasisKind::Msn, e1.vectors, e2.vectors, mu)
}

/// Builds any basis kind from the two factors. `ExactDense` forms the
/// product and is subject to `cap`.
pub fn build_basis(
    kind: BasisKind,
    s1: &SimilarityMatrix,
    s2: &SimilarityMatrix,
    pairing: Pairing,
    cap: usize,
) -> Result<SpectralBasis> {
    match kind {
        BasisKind::ExactDense => exact_kron_basis_with_cap(s1, s2, cap),
        BasisKind::LaplaceVec => approx_laplace_vec(s1, s2, pairing),
        BasisKind::NormLaplaceVec => approx_norm_laplace_vec(s1, s2, pairing),
        BasisKind::Msn => approx_msn(s1, s2),
    }
}

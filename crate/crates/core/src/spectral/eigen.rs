use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::graph::DenseSymMatrix;

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub values: Array1<f64>,
    pub vectors: Array2<f64>,
}

/// Dense symmetric eigendecomposition.
///
/// Output is sorted ascending and each eigenvector is signed so that its
/// largest-magnitude component (first one on ties) is positive.
pub fn sym_eig(m: &DenseSymMatrix) -> Result<EigenSystem> {
    sym_eig_array(m.entries())
}

pub(crate) fn sym_eig_array(a: &Array2<f64>) -> Result<EigenSystem> {
    let n = a.nrows();
    if n == 0 {
        return Ok(EigenSystem { values: Array1::zeros(0), vectors: Array2::zeros((0, 0)) });
    }
    let mat = faer::Mat::<f64>::from_fn(n, n, |i, j| a[[i, j]]);
    let evd = mat
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| Error::NoConvergence { what: "symmetric eigensolver", iterations: 0 })?;
    let s = evd.S().column_vector();
    let u = evd.U();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&p, &q| s[p].total_cmp(&s[q]));

    let values = Array1::from_iter(order.iter().map(|&p| s[p]));
    let mut vectors = Array2::from_shape_fn((n, n), |(i, c)| u[(i, order[c])]);
    for mut col in vectors.columns_mut() {
        let mut lead = 0;
        for i in 1..n {
            if col[i].abs() > col[lead].abs() {
                lead = i;
            }
        }
        if col[lead] < 0.0 {
            col.mapv_inplace(|v| -v);
        }
    }
    Ok(EigenSystem { values, vectors })
}

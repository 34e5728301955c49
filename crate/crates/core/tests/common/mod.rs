#![allow(dead_code)]

use kronreg::SimilarityMatrix;
use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cycle(n: usize) -> SimilarityMatrix {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    SimilarityMatrix::unweighted(n, &edges).unwrap()
}

pub fn complete(n: usize) -> SimilarityMatrix {
    let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    SimilarityMatrix::unweighted(n, &edges).unwrap()
}

/// Random weighted graph where each pair is an edge with probability `p`,
/// plus a Hamiltonian path so that no vertex is isolated.
pub fn random_connected(n: usize, p: f64, rng: &mut impl Rng) -> SimilarityMatrix {
    let mut m = Array2::zeros((n, n));
    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 || rng.random_bool(p) {
                let w = rng.random_range(0.1..1.0);
                m[[i, j]] = w;
                m[[j, i]] = w;
            }
        }
    }
    SimilarityMatrix::new(m).unwrap()
}

pub fn random_vec(n: usize, rng: &mut impl Rng) -> Array1<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn random_mat(r: usize, c: usize, rng: &mut impl Rng) -> Array2<f64> {
    Array2::from_shape_fn((r, c), |_| rng.random_range(-1.0..1.0))
}

/// Brute-force Kronecker product.
pub fn kron(a: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    let (p, q) = b.dim();
    let mut out = Array2::zeros((a.nrows() * p, a.ncols() * q));
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            for k in 0..p {
                for l in 0..q {
                    out[[i * p + k, j * q + l]] = a[[i, j]] * b[[k, l]];
                }
            }
        }
    }
    out
}

pub fn dense_laplacian(s: &Array2<f64>) -> Array2<f64> {
    let n = s.nrows();
    Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j {
            s.row(i).sum() - s[[i, i]]
        } else {
            -s[[i, j]]
        }
    })
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
pub fn cholesky(a: &Array2<f64>) -> Array2<f64> {
    let n = a.nrows();
    let mut l = Array2::<f64>::zeros((n, n));
    for j in 0..n {
        let mut d = a[[j, j]];
        for k in 0..j {
            d -= l[[j, k]] * l[[j, k]];
        }
        assert!(d > 0.0, "matrix not positive definite");
        l[[j, j]] = d.sqrt();
        for i in j + 1..n {
            let mut s = a[[i, j]];
            for k in 0..j {
                s -= l[[i, k]] * l[[j, k]];
            }
            l[[i, j]] = s / l[[j, j]];
        }
    }
    l
}

/// Solves `A x = b` for symmetric positive definite `A`.
pub fn spd_solve(a: &Array2<f64>, b: &Array1<f64>) -> Array1<f64> {
    let l = cholesky(a);
    let n = b.len();
    let mut z = Array1::zeros(n);
    for i in 0..n {
        let s: f64 = (0..i).map(|k| l[[i, k]] * z[k]).sum();
        z[i] = (b[i] - s) / l[[i, i]];
    }
    let mut x = Array1::zeros(n);
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| l[[k, i]] * x[k]).sum();
        x[i] = (z[i] - s) / l[[i, i]];
    }
    x
}

pub fn spd_logdet(a: &Array2<f64>) -> f64 {
    let l = cholesky(a);
    2.0 * l.diag().iter().map(|v| v.ln()).sum::<f64>()
}

pub fn fro(a: &Array2<f64>) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn sorted(v: &Array1<f64>) -> Vec<f64> {
    let mut out = v.to_vec();
    out.sort_by(f64::total_cmp);
    out
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

//! Dense Cholesky factorization for the SPD systems that appear in the
//! ADMM updates and graph projections.

// resolves f64 math in no_std builds; test builds link std and shadow it
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{dot, DenseMatrix};

/// Lower-triangular Cholesky factor of a symmetric positive definite
/// matrix, `A = L L^T`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>, // full n x n storage, strict upper triangle left zero
}

impl Cholesky {
    /// Factors `a`; fails if the matrix is not numerically positive
    /// definite (a pivot falls below `1e-14` times the largest diagonal).
    pub fn factor(a: &DenseMatrix) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n {
            return Err(Error::InvalidInput("cholesky requires a square matrix".into()));
        }
        let diag_max = (0..n).fold(0.0f64, |m, i| m.max(a.get(i, i).abs()));
        let pivot_floor = 1e-14 * diag_max.max(f64::MIN_POSITIVE);

        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let d = a.get(j, j) - dot(&l[j * n..j * n + j], &l[j * n..j * n + j]);
            if !(d > pivot_floor) {
                return Err(Error::InvalidInput(
                    "matrix is not positive definite (rank deficient?)".into(),
                ));
            }
            let ljj = d.sqrt();
            l[j * n + j] = ljj;
            for i in (j + 1)..n {
                let s = a.get(i, j) - dot(&l[i * n..i * n + j], &l[j * n..j * n + j]);
                l[i * n + j] = s / ljj;
            }
        }
        Ok(Self { n, l })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Solves `A x = b` via the two triangular solves.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n, "cholesky solve dimension mismatch");
        let n = self.n;
        let mut x = b.to_vec();
        // L y = b
        for i in 0..n {
            let s = x[i] - dot(&self.l[i * n..i * n + i], &x[..i]);
            x[i] = s / self.l[i * n + i];
        }
        // L^T x = y, outer-product form so row i of L is read
        // contiguously
        for i in (0..n).rev() {
            x[i] /= self.l[i * n + i];
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            let row = &self.l[i * n..i * n + i];
            for (k, &lik) in row.iter().enumerate() {
                x[k] -= lik * xi;
            }
        }
        x
    }

    /// Dense inverse of the factored matrix.
    pub fn inverse(&self) -> DenseMatrix {
        let n = self.n;
        let mut inv = DenseMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            let col = self.solve(&e);
            e[j] = 0.0;
            for i in 0..n {
                inv.set(i, j, col[i]);
            }
        }
        // symmetrize to scrub round-off asymmetry
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (inv.get(i, j) + inv.get(j, i));
                inv.set(i, j, v);
                inv.set(j, i, v);
            }
        }
        inv
    }
}

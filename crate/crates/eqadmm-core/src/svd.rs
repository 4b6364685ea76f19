//! Singular value machinery: one-sided Jacobi at desk scale, power and
//! inverse iteration on the Gram matrix beyond it.

// resolves f64 math in no_std builds; test builds link std and shadow it
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use crate::cholesky::Cholesky;
use crate::matrix::{dot, norm2, DenseMatrix};

/// Above this minimum dimension the exact Jacobi sweep is replaced by
/// power/inverse iteration.
pub(crate) const JACOBI_DIM_LIMIT: usize = 200;

const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITER: usize = 10_000;

/// Extreme singular values `(sigma_max, sigma_min)` of a rectangular
/// matrix; `sigma_min` ranges over the min(m, n) singular values.
pub(crate) fn singular_extremes(a: &DenseMatrix) -> (f64, f64) {
    if a.rows().min(a.cols()) <= JACOBI_DIM_LIMIT {
        let sv = jacobi_singular_values(a);
        (sv[0], sv[sv.len() - 1])
    } else {
        let g = gram_small_side(a);
        let smax = power_lambda_max(g.rows(), |v| g.matvec(v)).max(0.0).sqrt();
        let smin = match Cholesky::factor(&g) {
            Ok(chol) => {
                let lam_inv = power_lambda_max(g.rows(), |v| chol.solve(v));
                if lam_inv > 0.0 && lam_inv.is_finite() {
                    (1.0 / lam_inv).sqrt()
                } else {
                    0.0
                }
            }
            Err(_) => 0.0,
        };
        (smax, smin)
    }
}

/// All singular values, sorted descending, via one-sided Jacobi
/// (Hestenes): plane rotations orthogonalize the columns, whose norms
/// then converge to the singular values.
pub(crate) fn jacobi_singular_values(a: &DenseMatrix) -> Vec<f64> {
    // operate on the tall orientation so column count = min(m, n)
    let mut b = if a.rows() >= a.cols() {
        a.clone()
    } else {
        a.transpose()
    };
    let m = b.rows();
    let n = b.cols();
    let tol = 1e-15;
    let max_sweeps = 60;

    for _ in 0..max_sweeps {
        let mut rotated = false;
        for j in 0..n {
            for k in (j + 1)..n {
                let mut ajj = 0.0;
                let mut akk = 0.0;
                let mut ajk = 0.0;
                for i in 0..m {
                    let bj = b.get(i, j);
                    let bk = b.get(i, k);
                    ajj += bj * bj;
                    akk += bk * bk;
                    ajk += bj * bk;
                }
                if ajk.abs() <= tol * (ajj * akk).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (akk - ajj) / (2.0 * ajk);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let bj = b.get(i, j);
                    let bk = b.get(i, k);
                    b.set(i, j, c * bj - s * bk);
                    b.set(i, k, s * bj + c * bk);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = (0..n)
        .map(|j| {
            let mut s = 0.0;
            for i in 0..m {
                let v = b.get(i, j);
                s += v * v;
            }
            s.sqrt()
        })
        .collect();
    sv.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// `sigma_max = ||A||` by power iteration on the smaller Gram matrix,
/// deterministic start vector, relative tolerance 1e-10, at most 10000
/// iterations.
pub(crate) fn power_sigma_max(a: &DenseMatrix) -> f64 {
    let g = gram_small_side(a);
    power_lambda_max(g.rows(), |v| g.matvec(v)).max(0.0).sqrt()
}

fn gram_small_side(a: &DenseMatrix) -> DenseMatrix {
    if a.cols() <= a.rows() {
        a.gram()
    } else {
        a.transpose().gram()
    }
}

/// splitmix64 step; used only to build a deterministic, unstructured
/// start vector for the power iterations.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn start_vector(n: usize) -> Vec<f64> {
    let mut state = 0x517CC1B727220A95u64;
    let mut v: Vec<f64> = (0..n)
        .map(|_| 0.5 + (splitmix64(&mut state) >> 11) as f64 / (1u64 << 53) as f64)
        .collect();
    let nrm = norm2(&v);
    for x in &mut v {
        *x /= nrm;
    }
    v
}

/// Largest eigenvalue of an SPD operator by power iteration, converging
/// on the Rayleigh quotient.
fn power_lambda_max(n: usize, apply: impl Fn(&[f64]) -> Vec<f64>) -> f64 {
    let mut v = start_vector(n);
    let mut lam_prev = 0.0;
    for _ in 0..POWER_MAX_ITER {
        let w = apply(&v);
        let lam = dot(&v, &w);
        let nw = norm2(&w);
        if nw == 0.0 {
            return 0.0;
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / nw;
        }
        if (lam - lam_prev).abs() <= POWER_TOL * lam.abs().max(f64::MIN_POSITIVE) {
            return lam;
        }
        lam_prev = lam;
    }
    lam_prev
}

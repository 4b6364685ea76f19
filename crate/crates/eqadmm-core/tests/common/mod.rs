//! Shared test oracles. Everything here is an independent code path
//! from the library: eigen-based singular values instead of one-sided
//! Jacobi, Gaussian elimination instead of Cholesky, the explicit
//! block-matrix projector, and textbook scalar-rho ADMM loops.

#![allow(dead_code)]

use eqadmm_core::matrix::DenseMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(m: usize, n: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
    DenseMatrix::new(m, n, (0..m * n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
        .unwrap()
}

pub fn gaussian_vec(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..len).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Positive diagonal with entries log-uniform in `10^[-decades, decades]`.
pub fn log_uniform_diag(len: usize, decades: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..len)
        .map(|_| 10f64.powf(rng.random::<f64>() * 2.0 * decades - decades))
        .collect()
}

/// Gaussian elimination with partial pivoting; panics on singular
/// systems (oracle-side only).
pub fn solve_dense(a: &DenseMatrix, b: &[f64]) -> Vec<f64> {
    let n = a.rows();
    assert_eq!(a.cols(), n);
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        assert!(m[piv][col].abs() > 1e-300, "oracle solve hit a singular pivot");
        m.swap(col, piv);
        rhs.swap(col, piv);
        for row in (col + 1)..n {
            let factor = m[row][col] / m[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                m[row][k] -= factor * m[col][k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = rhs[row];
        for k in (row + 1)..n {
            s -= m[row][k] * x[k];
        }
        x[row] = s / m[row][row];
    }
    x
}

/// Classical two-sided Jacobi eigendecomposition of a symmetric matrix:
/// returns eigenvalues (descending) and the matching eigenvectors as
/// matrix columns.
pub fn jacobi_eigen_sym(s_in: &DenseMatrix) -> (Vec<f64>, DenseMatrix) {
    let n = s_in.rows();
    assert_eq!(s_in.cols(), n);
    let mut s = s_in.clone();
    let mut v = DenseMatrix::identity(n);

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        let mut scale = 0.0f64;
        for p in 0..n {
            scale = scale.max(s.get(p, p).abs());
            for q in (p + 1)..n {
                off = off.max(s.get(p, q).abs());
            }
        }
        if off <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let spq = s.get(p, q);
                if spq.abs() <= 1e-300 {
                    continue;
                }
                let tau = (s.get(q, q) - s.get(p, p)) / (2.0 * spq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = c * t;
                for k in 0..n {
                    let skp = s.get(k, p);
                    let skq = s.get(k, q);
                    s.set(k, p, c * skp - sn * skq);
                    s.set(k, q, sn * skp + c * skq);
                }
                for k in 0..n {
                    let spk = s.get(p, k);
                    let sqk = s.get(q, k);
                    s.set(p, k, c * spk - sn * sqk);
                    s.set(q, k, sn * spk + c * sqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - sn * vkq);
                    v.set(k, q, sn * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s.get(j, j).partial_cmp(&s.get(i, i)).unwrap());
    let eigvals: Vec<f64> = order.iter().map(|&i| s.get(i, i)).collect();
    let eigvecs = DenseMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));
    (eigvals, eigvecs)
}

/// Oracle singular values via the eigenvalues of the smaller Gram
/// matrix, descending.
pub fn oracle_singular_values(a: &DenseMatrix) -> Vec<f64> {
    let g = if a.cols() <= a.rows() {
        a.gram()
    } else {
        a.transpose().gram()
    };
    let (eigvals, _) = jacobi_eigen_sym(&g);
    eigvals.iter().map(|&l| l.max(0.0).sqrt()).collect()
}

/// Symmetric positive square root `P^(1/2)` through the eigen oracle.
pub fn spd_sqrt(p: &DenseMatrix) -> DenseMatrix {
    let n = p.rows();
    let (eigvals, q) = jacobi_eigen_sym(p);
    DenseMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| q.get(i, k) * eigvals[k].max(0.0).sqrt() * q.get(j, k))
            .sum()
    })
}

/// The projector onto `{(x, y) : M x = y}` in its explicit block form:
/// `[I M^T; M -I]^-1 [I M^T; 0 0] (x, y)`, evaluated by building the
/// full (m+n) x (m+n) system and solving it by Gaussian elimination.
pub fn block_projection(m_mat: &DenseMatrix, x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let m = m_mat.rows();
    let n = m_mat.cols();
    let dim = m + n;
    let block = DenseMatrix::from_fn(dim, dim, |i, j| {
        if i < n && j < n {
            if i == j {
                1.0
            } else {
                0.0
            }
        } else if i < n {
            m_mat.get(j - n, i)
        } else if j < n {
            m_mat.get(i - n, j)
        } else if i == j {
            -1.0
        } else {
            0.0
        }
    });
    let mut rhs = vec![0.0; dim];
    let mty = m_mat.matvec_transpose(y);
    for i in 0..n {
        rhs[i] = x[i] + mty[i];
    }
    let sol = solve_dense(&block, &rhs);
    (sol[..n].to_vec(), sol[n..].to_vec())
}

fn soft(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

/// Textbook scalar-rho consensus ADMM for the lasso
/// (`min 0.5||Ax-b||^2 + lambda||z||_1 s.t. x = z`), returning the
/// (x, z) iterates. Uses its own Gaussian-elimination solve.
pub fn textbook_lasso_admm(
    a: &DenseMatrix,
    b: &[f64],
    lambda: f64,
    rho: f64,
    iters: usize,
) -> Vec<(Vec<f64>, Vec<f64>)> {
    let n = a.cols();
    let mut k = a.gram();
    for i in 0..n {
        k.set(i, i, k.get(i, i) + rho);
    }
    let atb = a.matvec_transpose(b);
    let mut x = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut u = vec![0.0; n];
    let mut history = Vec::with_capacity(iters);
    for _ in 0..iters {
        let rhs: Vec<f64> = (0..n).map(|i| atb[i] + rho * (z[i] - u[i])).collect();
        x = solve_dense(&k, &rhs);
        z = (0..n).map(|i| soft(x[i] + u[i], lambda / rho)).collect();
        for i in 0..n {
            u[i] += x[i] - z[i];
        }
        history.push((x.clone(), z.clone()));
    }
    history
}

/// Textbook graph projection splitting with a uniform scalar step rho:
/// prox steps with parameter rho on f and g, Euclidean projection onto
/// `{A x = y}` by Gaussian elimination, scaled dual updates. Supports
/// the quadratic/l1 pair used by the scalar-consistency checks.
pub fn textbook_graph_splitting_lasso(
    a: &DenseMatrix,
    b: &[f64],
    lambda: f64,
    rho: f64,
    iters: usize,
) -> Vec<(Vec<f64>, Vec<f64>)> {
    let m = a.rows();
    let n = a.cols();
    let mut gram1 = a.gram();
    for i in 0..n {
        gram1.set(i, i, gram1.get(i, i) + 1.0);
    }
    let mut x = vec![0.0; n];
    let mut y = vec![0.0; m];
    let mut xp = vec![0.0; n];
    let mut yp = vec![0.0; m];
    let mut ux = vec![0.0; n];
    let mut uy = vec![0.0; m];
    let mut history = Vec::with_capacity(iters);
    for _ in 0..iters {
        x = (0..n).map(|i| soft(xp[i] - ux[i], lambda / rho)).collect();
        y = (0..m).map(|i| (rho * (yp[i] - uy[i]) + b[i]) / (1.0 + rho)).collect();
        let vx: Vec<f64> = (0..n).map(|i| x[i] + ux[i]).collect();
        let vy: Vec<f64> = (0..m).map(|i| y[i] + uy[i]).collect();
        let mut rhs = a.matvec_transpose(&vy);
        for i in 0..n {
            rhs[i] += vx[i];
        }
        xp = solve_dense(&gram1, &rhs);
        yp = a.matvec(&xp);
        for i in 0..n {
            ux[i] += x[i] - xp[i];
        }
        for i in 0..m {
            uy[i] += y[i] - yp[i];
        }
        history.push((x.clone(), y.clone()));
    }
    history
}

/// 1-D numeric minimizer by iterated grid refinement; handles
/// nonsmooth and extended-real objectives as long as the minimum lies
/// inside the bracket.
pub fn numeric_argmin_1d(phi: impl Fn(f64) -> f64, center: f64, radius: f64) -> f64 {
    let mut lo = center - radius;
    let mut hi = center + radius;
    let grid = 2000usize;
    let mut best = center;
    for _ in 0..5 {
        let step = (hi - lo) / grid as f64;
        let mut best_val = f64::INFINITY;
        for k in 0..=grid {
            let u = lo + step * k as f64;
            let val = phi(u);
            if val < best_val {
                best_val = val;
                best = u;
            }
        }
        lo = best - 2.0 * step;
        hi = best + 2.0 * step;
    }
    best
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0f64, |m, (&x, &y)| m.max((x - y).abs()))
}

pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|&x| x * x).sum::<f64>().sqrt()
}

//! Consensus ADMM with a diagonal preconditioner: solve
//! `minimize (1/2)||Ax - b||^2 + g(z)  subject to  F x = F z`
//! for a positive diagonal `F`, which generalizes the scalar step size
//! (`F = sqrt(rho) I` recovers textbook scalar-rho ADMM), plus the
//! helpers for choosing `F`: the optimal scalar rho and the scaling
//! that equilibrates `(A^T A)^-1`.

// resolves f64 math in no_std builds; test builds link std and shadow it
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use crate::cholesky::Cholesky;
use crate::equilibration::ruiz_symmetric;
use crate::error::{Error, Result};
use crate::matrix::{norm2, DenseMatrix};
use crate::metrics::{condition_number, NormOrder, SINGULARITY_RTOL};
use crate::problems::{scaled_prox, SeparableFunction};
use crate::svd;

/// Consensus problem data; `precond` is the diagonal of `F`.
#[derive(Debug, Clone)]
pub struct ConsensusProblem {
    pub a: DenseMatrix,
    pub b: Vec<f64>,
    pub g: SeparableFunction,
    pub precond: Vec<f64>,
}

impl ConsensusProblem {
    pub fn new(a: DenseMatrix, b: Vec<f64>, g: SeparableFunction, precond: Vec<f64>) -> Result<Self> {
        if b.len() != a.rows() {
            return Err(Error::InvalidInput("b length must match row count".into()));
        }
        if precond.len() != a.cols() {
            return Err(Error::InvalidInput("preconditioner length must match column count".into()));
        }
        if precond.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidInput("preconditioner entries must be positive".into()));
        }
        if let Some(d) = g.dim() {
            if d != a.cols() {
                return Err(Error::InvalidInput("g dimension must match column count".into()));
            }
        }
        Ok(Self { a, b, g, precond })
    }
}

#[derive(Debug, Clone)]
pub struct ConsensusTrace {
    pub iterations: usize,
    pub objective_history: Vec<f64>,
    /// `(primal, dual)` residual norms per iteration.
    pub residual_history: Vec<(f64, f64)>,
    pub x_final: Vec<f64>,
    pub z_final: Vec<f64>,
    pub converged: bool,
}

/// Runs consensus ADMM until the relative primal and dual residuals
/// drop below `tol` or `max_iter` is reached (reported in the trace,
/// not an error).
///
/// Per iteration, with `F = diag(precond)` and `y` the transformed dual:
/// - x-update: `(A^T A + F^2) x = A^T b + F^2 z - F y` (factored once),
/// - z-update: weighted prox of `g` with coordinate weights `F_ii^2`,
/// - dual update: `y += F (x - z)`.
///
/// Stopping is relative: `||F(x-z)|| <= tol * max(||Fx||, ||Fz||)` and
/// `||F^2 dz|| <= tol * ||Fy||`, with a vanishing-solution floor of
/// `1e-6` times the largest iterate scale seen so far, since the pure
/// relative test can never fire when the solution is exactly zero.
pub fn solve_consensus(prob: &ConsensusProblem, tol: f64, max_iter: usize) -> Result<ConsensusTrace> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tol must be positive".into()));
    }
    let a = &prob.a;
    let f = &prob.precond;
    let n = a.cols();

    let mut k = a.gram();
    for i in 0..n {
        k.set(i, i, k.get(i, i) + f[i] * f[i]);
    }
    let chol = Cholesky::factor(&k)?;
    let atb = a.matvec_transpose(&prob.b);
    let inv_f: Vec<f64> = f.iter().map(|&v| 1.0 / v).collect();

    let mut x = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut y = vec![0.0; n];

    let mut objective_history = Vec::new();
    let mut residual_history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut primal_scale_seen = 0.0f64;
    let mut dual_scale_seen = 0.0f64;

    while iterations < max_iter {
        iterations += 1;

        let rhs: Vec<f64> = (0..n).map(|i| atb[i] + f[i] * f[i] * z[i] - f[i] * y[i]).collect();
        x = chol.solve(&rhs);

        // z = argmin g(z) + (1/2) ||z - (x + F^-1 y)||_{F^2}^2,
        // computed through the unit-weight scaled prox via u = F z
        let w: Vec<f64> = (0..n).map(|i| f[i] * x[i] + y[i]).collect();
        let u = scaled_prox(&prob.g, &inv_f, &w)?;
        let z_new: Vec<f64> = (0..n).map(|i| u[i] * inv_f[i]).collect();

        let dual_vec: Vec<f64> = (0..n).map(|i| f[i] * f[i] * (z_new[i] - z[i])).collect();
        z = z_new;

        let primal_vec: Vec<f64> = (0..n).map(|i| f[i] * (x[i] - z[i])).collect();
        for i in 0..n {
            y[i] += primal_vec[i];
        }

        let r_primal = norm2(&primal_vec);
        let r_dual = norm2(&dual_vec);
        residual_history.push((r_primal, r_dual));

        let ax = a.matvec(&x);
        let fit = 0.5
            * ax.iter()
                .zip(&prob.b)
                .map(|(axi, bi)| (axi - bi) * (axi - bi))
                .sum::<f64>();
        objective_history.push(fit + prob.g.eval(&z));

        let fx = norm2(&(0..n).map(|i| f[i] * x[i]).collect::<Vec<_>>());
        let fz = norm2(&(0..n).map(|i| f[i] * z[i]).collect::<Vec<_>>());
        let fy = norm2(&(0..n).map(|i| f[i] * y[i]).collect::<Vec<_>>());
        primal_scale_seen = primal_scale_seen.max(fx).max(fz);
        dual_scale_seen = dual_scale_seen.max(fy);
        let eps_pri = tol * fx.max(fz).max(1e-6 * primal_scale_seen);
        let eps_dual = tol * fy.max(1e-6 * dual_scale_seen);
        if r_primal <= eps_pri && r_dual <= eps_dual {
            converged = true;
            break;
        }
    }

    Ok(ConsensusTrace {
        iterations,
        objective_history,
        residual_history,
        x_final: x,
        z_final: z,
        converged,
    })
}

/// `rho* = sqrt(sigma_min(A) sigma_max(A))`, the scalar step that
/// optimizes the convergence rate bound; requires full column rank.
pub fn optimal_scalar_rho(a: &DenseMatrix) -> Result<f64> {
    if a.rows() < a.cols() {
        return Err(Error::InvalidInput(
            "optimal scalar rho requires full column rank (m >= n)".into(),
        ));
    }
    let (smax, smin) = svd::singular_extremes(a);
    if smin <= SINGULARITY_RTOL * smax {
        return Err(Error::InvalidInput("matrix is rank deficient".into()));
    }
    Ok((smin * smax).sqrt())
}

/// Diagonal `F` that equilibrates `P = (A^T A)^-1`, found by the
/// symmetric Ruiz iteration on the explicitly formed inverse.
pub fn equilibrate_gram_inverse(a: &DenseMatrix, eps: f64, max_iter: usize) -> Result<Vec<f64>> {
    let p = gram_inverse(a)?;
    let (d, _) = ruiz_symmetric(&p, NormOrder::L2, eps, max_iter)?;
    Ok(d)
}

/// Convergence rate bound `kappa(F (A^T A)^-1 F)` used to rank
/// preconditioner choices.
pub fn convergence_rate_bound(a: &DenseMatrix, f_diag: &[f64]) -> Result<f64> {
    if f_diag.len() != a.cols() {
        return Err(Error::InvalidInput("preconditioner length must match column count".into()));
    }
    let p = gram_inverse(a)?;
    condition_number(&p.scaled(f_diag, f_diag))
}

fn gram_inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    let g = a.gram();
    let chol = Cholesky::factor(&g)
        .map_err(|_| Error::InvalidInput("A^T A is singular; full column rank required".into()))?;
    Ok(chol.inverse())
}

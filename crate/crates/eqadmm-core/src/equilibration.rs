//! Diagonal equilibration: Sinkhorn-Knopp and Ruiz iterations that
//! drive all rows and all columns of `D A E` to equal lp norms, plus
//! the stationarity residual of the underlying convex program.
//!
//! Both algorithms loop until the row and column norm ratios `r1`, `r2`
//! are within `eps` of 1 (a ratio can never be below 1, so the
//! termination test is on `r - 1`) or until `max_iter` passes.

// resolves f64 math in no_std builds; test builds link std and shadow it
#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::metrics::{col_norm, condition_number, norm_ratio, row_col_ratios, row_norm, scaled_row_col_norms, NormOrder};

pub const DEFAULT_EPS: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 100;

/// Scaling factors stay inside this range; leaving it aborts with a
/// divergence error (structurally unbalanced matrix).
const D_RANGE: (f64, f64) = (1e-30, 1e30);

/// Positive diagonal scaling pair: `D = diag(d1)` (rows), `E = diag(d2)`
/// (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalScaling {
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

impl DiagonalScaling {
    pub fn new(d1: Vec<f64>, d2: Vec<f64>) -> Result<Self> {
        if d1.iter().chain(d2.iter()).any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidInput(
                "scaling entries must be strictly positive and finite".into(),
            ));
        }
        Ok(Self { d1, d2 })
    }

    pub fn identity(rows: usize, cols: usize) -> Self {
        Self {
            d1: vec![1.0; rows],
            d2: vec![1.0; cols],
        }
    }

    /// `diag(d1) * A * diag(d2)`
    pub fn apply(&self, a: &DenseMatrix) -> DenseMatrix {
        a.scaled(&self.d1, &self.d2)
    }
}

/// Per-run record: ratio histories (one entry per iteration) and the
/// condition number before and after scaling.
#[derive(Debug, Clone)]
pub struct EquilibrationReport {
    pub iterations: usize,
    pub r1_history: Vec<f64>,
    pub r2_history: Vec<f64>,
    pub kappa_before: f64,
    pub kappa_after: f64,
    pub converged: bool,
}

fn check_equilibratable(a: &DenseMatrix, p: NormOrder) -> Result<()> {
    // a zero row or column can never reach a nonzero norm
    row_col_ratios(a, p).map(|_| ())
}

fn ratios_or_degenerate(row_norms: &[f64], col_norms: &[f64]) -> Result<(f64, f64)> {
    match (norm_ratio(row_norms), norm_ratio(col_norms)) {
        (Some(r1), Some(r2)) => Ok((r1, r2)),
        _ => Err(Error::DegenerateInput("scaled matrix has a vanishing row or column".into())),
    }
}

fn check_range(d: &[f64], what: &str) -> Result<()> {
    for &v in d {
        if !(v >= D_RANGE.0 && v <= D_RANGE.1) {
            return Err(Error::Divergence(format!(
                "{what} scaling left the range [{:e}, {:e}]",
                D_RANGE.0, D_RANGE.1
            )));
        }
    }
    Ok(())
}

/// Sinkhorn-Knopp equilibration in the lp norm.
///
/// Each pass sets `d1_i` to the inverse lp norm of row i of
/// `A diag(d2)` and then `d2_j` to the inverse lp norm of column j of
/// `diag(d1) A`. For a nonnegative matrix and p = 1 this is exactly the
/// classical update `d1 := (A d2)^-1`, `d2 := (A^T d1)^-1`; for general
/// entries and finite p it is the same update applied to the matrix
/// `|A_ij|^p` followed by the 1/p power, and it extends unchanged to
/// the max-abs norm.
pub fn sinkhorn_knopp(
    a: &DenseMatrix,
    p: NormOrder,
    eps: f64,
    max_iter: usize,
) -> Result<(DiagonalScaling, EquilibrationReport)> {
    check_equilibratable(a, p)?;
    if !(eps > 0.0) {
        return Err(Error::InvalidInput("eps must be positive".into()));
    }
    let (m, n) = (a.rows(), a.cols());
    let kappa_before = condition_number(a)?;

    let ones_m = vec![1.0; m];
    let ones_n = vec![1.0; n];
    let mut d1 = vec![1.0; m];
    let mut d2 = vec![1.0; n];
    let mut r1_history = Vec::new();
    let mut r2_history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        // d1_i := || (A diag(d2))_{i:} ||_p ^ -1
        let (row_norms, _) = scaled_row_col_norms(a, p, &ones_m, &d2);
        for (di, nrm) in d1.iter_mut().zip(&row_norms) {
            *di = 1.0 / nrm;
        }
        check_range(&d1, "row")?;
        // d2_j := || (diag(d1) A)_{:j} ||_p ^ -1, with the fresh d1
        let (_, col_norms) = scaled_row_col_norms(a, p, &d1, &ones_n);
        for (dj, nrm) in d2.iter_mut().zip(&col_norms) {
            *dj = 1.0 / nrm;
        }
        check_range(&d2, "column")?;

        let (row_norms, col_norms) = scaled_row_col_norms(a, p, &d1, &d2);
        let (r1, r2) = ratios_or_degenerate(&row_norms, &col_norms)?;
        r1_history.push(r1);
        r2_history.push(r2);
        if r1 - 1.0 <= eps && r2 - 1.0 <= eps {
            converged = true;
            break;
        }
    }

    let scaling = DiagonalScaling::new(d1, d2)?;
    let kappa_after = condition_number(&scaling.apply(a))?;
    Ok((
        scaling,
        EquilibrationReport {
            iterations,
            r1_history,
            r2_history,
            kappa_before,
            kappa_after,
            converged,
        },
    ))
}

/// Ruiz equilibration in the lp norm.
///
/// Each pass multiplies `d1_i` by the inverse square root of the lp
/// norm of row i of the current `B = diag(d1) A diag(d2)` and `d2_j` by
/// `(m/n)^(1/2p)` times the inverse square root of the lp norm of
/// column j of the same `B` (the rectangular correction vanishes for
/// the max-abs norm), then rebuilds `B`.
pub fn ruiz(
    a: &DenseMatrix,
    p: NormOrder,
    eps: f64,
    max_iter: usize,
) -> Result<(DiagonalScaling, EquilibrationReport)> {
    check_equilibratable(a, p)?;
    if !(eps > 0.0) {
        return Err(Error::InvalidInput("eps must be positive".into()));
    }
    let (m, n) = (a.rows(), a.cols());
    let kappa_before = condition_number(a)?;

    let rect_correction = match p.exponent() {
        Some(pf) => (m as f64 / n as f64).powf(1.0 / (2.0 * pf)),
        None => 1.0,
    };

    let mut d1 = vec![1.0; m];
    let mut d2 = vec![1.0; n];
    // norms of the current B = diag(d1) A diag(d2), streamed off A
    let (mut row_norms, mut col_norms) = scaled_row_col_norms(a, p, &d1, &d2);
    let mut r1_history = Vec::new();
    let mut r2_history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        // both updates read the same stale B
        for (di, nrm) in d1.iter_mut().zip(&row_norms) {
            *di /= nrm.sqrt();
        }
        for (dj, nrm) in d2.iter_mut().zip(&col_norms) {
            *dj *= rect_correction / nrm.sqrt();
        }
        check_range(&d1, "row")?;
        check_range(&d2, "column")?;

        (row_norms, col_norms) = scaled_row_col_norms(a, p, &d1, &d2);
        let (r1, r2) = ratios_or_degenerate(&row_norms, &col_norms)?;
        r1_history.push(r1);
        r2_history.push(r2);
        if r1 - 1.0 <= eps && r2 - 1.0 <= eps {
            converged = true;
            break;
        }
    }

    let scaling = DiagonalScaling::new(d1, d2)?;
    let kappa_after = condition_number(&scaling.apply(a))?;
    Ok((
        scaling,
        EquilibrationReport {
            iterations,
            r1_history,
            r2_history,
            kappa_before,
            kappa_after,
            converged,
        },
    ))
}

/// Symmetric Ruiz variant for a symmetric matrix: a single scaling
/// vector `d` is updated by inverse square roots of the row norms of
/// `diag(d) P diag(d)`, so rows and columns stay equilibrated together.
pub fn ruiz_symmetric(
    p_mat: &DenseMatrix,
    p: NormOrder,
    eps: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, EquilibrationReport)> {
    if p_mat.rows() != p_mat.cols() {
        return Err(Error::InvalidInput("symmetric equilibration requires a square matrix".into()));
    }
    check_equilibratable(p_mat, p)?;
    if !(eps > 0.0) {
        return Err(Error::InvalidInput("eps must be positive".into()));
    }
    let n = p_mat.rows();
    let kappa_before = condition_number(p_mat)?;

    let mut d = vec![1.0; n];
    let (mut row_norms, _) = scaled_row_col_norms(p_mat, p, &d, &d);
    let mut r1_history = Vec::new();
    let mut r2_history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        for (di, nrm) in d.iter_mut().zip(&row_norms) {
            *di /= nrm.sqrt();
        }
        check_range(&d, "symmetric")?;
        let (rn, cn) = scaled_row_col_norms(p_mat, p, &d, &d);
        let (r1, r2) = ratios_or_degenerate(&rn, &cn)?;
        row_norms = rn;
        r1_history.push(r1);
        r2_history.push(r2);
        if r1 - 1.0 <= eps && r2 - 1.0 <= eps {
            converged = true;
            break;
        }
    }

    let kappa_after = condition_number(&p_mat.scaled(&d, &d))?;
    Ok((
        d,
        EquilibrationReport {
            iterations,
            r1_history,
            r2_history,
            kappa_before,
            kappa_after,
            converged,
        },
    ))
}

/// Scale-free stationarity residual of the equilibration program.
///
/// With `B = D A E` and a finite norm order this is the maximum
/// relative deviation of the row sums and of the column sums of
/// `|B_ij|^p` from their respective means; it vanishes exactly at an
/// equilibrated fixed point. For the max-abs norm the p-th power sums
/// are replaced by the row/column max-abs norms themselves.
pub fn equilibration_residual(a: &DenseMatrix, s: &DiagonalScaling, p: NormOrder) -> f64 {
    assert_eq!(s.d1.len(), a.rows(), "scaling length mismatch");
    assert_eq!(s.d2.len(), a.cols(), "scaling length mismatch");
    let b = s.apply(a);
    let (m, n) = (b.rows(), b.cols());

    let (row_stats, col_stats): (Vec<f64>, Vec<f64>) = match p.exponent() {
        Some(pf) => {
            let mut rows = vec![0.0; m];
            let mut cols = vec![0.0; n];
            for i in 0..m {
                for j in 0..n {
                    let t = b.get(i, j).abs().powf(pf);
                    rows[i] += t;
                    cols[j] += t;
                }
            }
            (rows, cols)
        }
        None => (
            (0..m).map(|i| row_norm(&b, i, p)).collect(),
            (0..n).map(|j| col_norm(&b, j, p)).collect(),
        ),
    };

    let deviation = |v: &[f64]| -> f64 {
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        if mean == 0.0 {
            return 0.0;
        }
        v.iter().fold(0.0f64, |acc, &x| acc.max((x - mean).abs())) / mean
    };

    deviation(&row_stats).max(deviation(&col_stats))
}

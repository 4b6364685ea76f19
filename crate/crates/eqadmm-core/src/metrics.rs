//! Condition metrics: the condition number kappa, the column-norm
//! metric psi, row/column norm ratios and the spectral norm.

// resolves f64 math in no_std builds; test builds link std and shadow it
#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::svd;

/// Relative threshold below which the smallest singular value is
/// treated as zero: `sigma_min < 1e-12 * sigma_max` means singular.
pub const SINGULARITY_RTOL: f64 = 1e-12;

/// Validated lp-norm order: a finite exponent `p >= 1` or the max-abs
/// norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormOrder(Ord_);

#[derive(Debug, Clone, Copy, PartialEq)]
enum Ord_ {
    Finite(f64),
    Inf,
}

impl NormOrder {
    pub const L1: NormOrder = NormOrder(Ord_::Finite(1.0));
    pub const L2: NormOrder = NormOrder(Ord_::Finite(2.0));
    pub const INF: NormOrder = NormOrder(Ord_::Inf);

    /// Finite order; requires `p >= 1`.
    pub fn finite(p: f64) -> Result<Self> {
        if !p.is_finite() || p < 1.0 {
            return Err(Error::InvalidInput(format!("norm order must satisfy p >= 1, got {p}")));
        }
        Ok(NormOrder(Ord_::Finite(p)))
    }

    /// The finite exponent, or `None` for the max-abs norm.
    pub fn exponent(&self) -> Option<f64> {
        match self.0 {
            Ord_::Finite(p) => Some(p),
            Ord_::Inf => None,
        }
    }

    /// lp norm of a slice.
    pub fn norm(&self, v: impl Iterator<Item = f64>) -> f64 {
        match self.0 {
            Ord_::Finite(p) => {
                if p == 1.0 {
                    v.map(|x| x.abs()).sum()
                } else if p == 2.0 {
                    v.map(|x| x * x).sum::<f64>().sqrt()
                } else {
                    v.map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p)
                }
            }
            Ord_::Inf => v.fold(0.0f64, |m, x| m.max(x.abs())),
        }
    }
}

pub(crate) fn row_norm(a: &DenseMatrix, i: usize, p: NormOrder) -> f64 {
    p.norm(a.row(i).iter().copied())
}

pub(crate) fn col_norm(a: &DenseMatrix, j: usize, p: NormOrder) -> f64 {
    p.norm((0..a.rows()).map(|i| a.get(i, j)))
}

/// Row and column lp norms of `diag(d1) A diag(d2)` in one row-major
/// pass, without forming the scaled matrix.
pub(crate) fn scaled_row_col_norms(
    a: &DenseMatrix,
    p: NormOrder,
    d1: &[f64],
    d2: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let (m, n) = (a.rows(), a.cols());
    let mut rows = alloc::vec![0.0f64; m];
    let mut cols = alloc::vec![0.0f64; n];
    match p.0 {
        Ord_::Inf => {
            for i in 0..m {
                let arow = a.row(i);
                let di = d1[i];
                let mut racc = 0.0f64;
                for j in 0..n {
                    let v = (di * arow[j] * d2[j]).abs();
                    racc = racc.max(v);
                    cols[j] = cols[j].max(v);
                }
                rows[i] = racc;
            }
        }
        Ord_::Finite(pf) => {
            for i in 0..m {
                let arow = a.row(i);
                let di = d1[i];
                let mut racc = 0.0f64;
                if pf == 2.0 {
                    for j in 0..n {
                        let v = di * arow[j] * d2[j];
                        let t = v * v;
                        racc += t;
                        cols[j] += t;
                    }
                } else if pf == 1.0 {
                    for j in 0..n {
                        let t = (di * arow[j] * d2[j]).abs();
                        racc += t;
                        cols[j] += t;
                    }
                } else {
                    for j in 0..n {
                        let t = (di * arow[j] * d2[j]).abs().powf(pf);
                        racc += t;
                        cols[j] += t;
                    }
                }
                rows[i] = racc;
            }
            for v in rows.iter_mut().chain(cols.iter_mut()) {
                *v = if pf == 2.0 { v.sqrt() } else if pf == 1.0 { *v } else { v.powf(1.0 / pf) };
            }
        }
    }
    (rows, cols)
}

/// max/min ratio of a norm vector; `None` if any entry is zero.
pub(crate) fn norm_ratio(norms: &[f64]) -> Option<f64> {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for &v in norms {
        if v == 0.0 {
            return None;
        }
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Some(hi / lo)
}

/// Extreme singular values, kappa, and psi (square invertible only) in
/// one bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionMetrics {
    pub sigma_max: f64,
    pub sigma_min: f64,
    /// `sigma_max / sigma_min`; `f64::INFINITY` when numerically singular.
    pub kappa: f64,
    /// `||A^-1|| * max_j ||A_j||_2`, defined for square invertible `A`.
    pub psi: Option<f64>,
}

impl ConditionMetrics {
    pub fn compute(a: &DenseMatrix) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::InvalidInput("condition metrics of the zero matrix".into()));
        }
        let (sigma_max, sigma_min) = svd::singular_extremes(a);
        let kappa = if sigma_min > SINGULARITY_RTOL * sigma_max {
            sigma_max / sigma_min
        } else {
            f64::INFINITY
        };
        let psi = if a.rows() == a.cols() && kappa.is_finite() {
            let max_col = (0..a.cols())
                .map(|j| col_norm(a, j, NormOrder::L2))
                .fold(0.0f64, f64::max);
            Some(max_col / sigma_min)
        } else {
            None
        };
        Ok(Self {
            sigma_max,
            sigma_min,
            kappa,
            psi,
        })
    }
}

/// Condition number `sigma_max / sigma_min`; returns `f64::INFINITY`
/// when `sigma_min` falls below the machine-scale threshold.
pub fn condition_number(a: &DenseMatrix) -> Result<f64> {
    ConditionMetrics::compute(a).map(|m| m.kappa)
}

/// `psi(A) = ||A^-1|| * max_j ||A_j||_2` for square invertible `A`.
pub fn psi_metric(a: &DenseMatrix) -> Result<f64> {
    if a.rows() != a.cols() {
        return Err(Error::InvalidInput(format!(
            "psi requires a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let metrics = ConditionMetrics::compute(a)?;
    metrics
        .psi
        .ok_or_else(|| Error::InvalidInput("psi requires an invertible matrix".into()))
}

/// Max/min row and column lp-norm ratios `(r1, r2)`; errors on a zero
/// row or column, for which equilibration is undefined.
pub fn row_col_ratios(a: &DenseMatrix, p: NormOrder) -> Result<(f64, f64)> {
    let mut row_min = f64::INFINITY;
    let mut row_max = 0.0f64;
    for i in 0..a.rows() {
        let nrm = row_norm(a, i, p);
        if nrm == 0.0 {
            return Err(Error::DegenerateInput(format!("row {i} is zero")));
        }
        row_min = row_min.min(nrm);
        row_max = row_max.max(nrm);
    }
    let mut col_min = f64::INFINITY;
    let mut col_max = 0.0f64;
    for j in 0..a.cols() {
        let nrm = col_norm(a, j, p);
        if nrm == 0.0 {
            return Err(Error::DegenerateInput(format!("column {j} is zero")));
        }
        col_min = col_min.min(nrm);
        col_max = col_max.max(nrm);
    }
    Ok((row_max / row_min, col_max / col_min))
}

/// Spectral norm `sigma_max` by power iteration on the Gram matrix with
/// a deterministic start vector.
pub fn spectral_norm(a: &DenseMatrix) -> Result<f64> {
    if a.is_zero() {
        return Err(Error::InvalidInput("spectral norm of the zero matrix".into()));
    }
    Ok(svd::power_sigma_max(a))
}

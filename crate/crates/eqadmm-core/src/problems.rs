//! Graph-form problem instances: separable functions with weighted
//! proximal operators in closed form, random generators for lasso and
//! inequality-form LP, and an independent proximal-gradient lasso
//! oracle.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{norm2, DenseMatrix};

/// Feasibility slack used when evaluating indicator functions, to keep
/// objective reporting robust against round-off at the boundary.
const INDICATOR_SLACK: f64 = 1e-9;

/// Separable convex function descriptor, evaluated coordinatewise.
#[derive(Debug, Clone, PartialEq)]
pub enum SeparableFunction {
    /// `(1/2) ||v - b||^2`
    Quadratic { b: Vec<f64> },
    /// `lambda * ||v||_1`
    L1 { lambda: f64 },
    /// `0` if `v <= b` entrywise, `+inf` otherwise
    IndicatorLeq { b: Vec<f64> },
    /// `c^T v`
    Linear { c: Vec<f64> },
    /// identically zero
    Zero,
}

impl SeparableFunction {
    /// Dimension pinned by the parameters, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            SeparableFunction::Quadratic { b } | SeparableFunction::IndicatorLeq { b } => {
                Some(b.len())
            }
            SeparableFunction::Linear { c } => Some(c.len()),
            SeparableFunction::L1 { .. } | SeparableFunction::Zero => None,
        }
    }

    pub fn eval(&self, v: &[f64]) -> f64 {
        match self {
            SeparableFunction::Quadratic { b } => {
                0.5 * v.iter().zip(b).map(|(&x, &bi)| (x - bi) * (x - bi)).sum::<f64>()
            }
            SeparableFunction::L1 { lambda } => lambda * v.iter().map(|x| x.abs()).sum::<f64>(),
            SeparableFunction::IndicatorLeq { b } => {
                let feasible = v
                    .iter()
                    .zip(b)
                    .all(|(&x, &bi)| x <= bi + INDICATOR_SLACK * (1.0 + bi.abs()));
                if feasible {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            SeparableFunction::Linear { c } => v.iter().zip(c).map(|(&x, &ci)| x * ci).sum(),
            SeparableFunction::Zero => 0.0,
        }
    }
}

fn soft_threshold(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

/// Proximal operator of the function composed with a positive diagonal
/// scale: `argmin_u fn(diag(s) u) + (1/2) ||u - v||^2`, coordinatewise.
pub fn scaled_prox(func: &SeparableFunction, scale: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    if scale.len() != v.len() {
        return Err(Error::InvalidInput("scale and point lengths differ".into()));
    }
    if let Some(d) = func.dim() {
        if d != v.len() {
            return Err(Error::InvalidInput(format!(
                "function expects dimension {d}, point has {}",
                v.len()
            )));
        }
    }
    if scale.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
        return Err(Error::InvalidInput("prox scale must be strictly positive".into()));
    }
    let u = match func {
        // argmin (1/2)(s u - b)^2 + (1/2)(u - v)^2
        SeparableFunction::Quadratic { b } => v
            .iter()
            .zip(scale)
            .zip(b)
            .map(|((&vi, &si), &bi)| (vi + si * bi) / (1.0 + si * si))
            .collect(),
        SeparableFunction::L1 { lambda } => v
            .iter()
            .zip(scale)
            .map(|(&vi, &si)| soft_threshold(vi, lambda * si))
            .collect(),
        // s u <= b clips at b / s
        SeparableFunction::IndicatorLeq { b } => v
            .iter()
            .zip(scale)
            .zip(b)
            .map(|((&vi, &si), &bi)| vi.min(bi / si))
            .collect(),
        SeparableFunction::Linear { c } => v
            .iter()
            .zip(scale)
            .zip(c)
            .map(|((&vi, &si), &ci)| vi - si * ci)
            .collect(),
        SeparableFunction::Zero => v.to_vec(),
    };
    Ok(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Lasso,
    Lp,
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemMeta {
    pub kind: ProblemKind,
    pub seed: u64,
    /// Planted point used by the generators (sparse signal for lasso,
    /// strictly feasible point for LP).
    pub ground_truth: Option<Vec<f64>>,
    /// Dual certificate for LP instances: `c = -A^T mu` with `mu > 0`.
    pub dual_certificate: Option<Vec<f64>>,
}

impl ProblemMeta {
    fn custom() -> Self {
        Self {
            kind: ProblemKind::Custom,
            seed: 0,
            ground_truth: None,
            dual_certificate: None,
        }
    }
}

/// `minimize f(y) + g(x) subject to A x = y`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphFormProblem {
    pub a: DenseMatrix,
    /// function of `y` (length m)
    pub f: SeparableFunction,
    /// function of `x` (length n)
    pub g: SeparableFunction,
    pub meta: ProblemMeta,
}

impl GraphFormProblem {
    pub fn new(a: DenseMatrix, f: SeparableFunction, g: SeparableFunction) -> Result<Self> {
        if let Some(d) = f.dim() {
            if d != a.rows() {
                return Err(Error::InvalidInput(format!(
                    "f expects dimension {d}, matrix has {} rows",
                    a.rows()
                )));
            }
        }
        if let Some(d) = g.dim() {
            if d != a.cols() {
                return Err(Error::InvalidInput(format!(
                    "g expects dimension {d}, matrix has {} columns",
                    a.cols()
                )));
            }
        }
        Ok(Self {
            a,
            f,
            g,
            meta: ProblemMeta::custom(),
        })
    }

    /// Regularization weight when `g` is an l1 penalty.
    pub fn lasso_lambda(&self) -> Option<f64> {
        match self.g {
            SeparableFunction::L1 { lambda } => Some(lambda),
            _ => None,
        }
    }
}

fn normal_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Random lasso instance: Gaussian `A`, a planted signal with 10%
/// nonzero entries, `b = A x0 + 0.1 * noise`, and
/// `lambda = 0.1 ||A^T b||_inf`. Deterministic per seed.
pub fn gen_lasso(m: usize, n: usize, seed: u64) -> GraphFormProblem {
    assert!(m >= 1 && n >= 1, "dimensions must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DenseMatrix::new(m, n, normal_vec(&mut rng, m * n)).expect("finite gaussian entries");

    // planted signal: 10% of coordinates carry standard normal values
    let k = (n / 10).max(1);
    let mut indices: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + rng.random_range(0..(n - i));
        indices.swap(i, j);
    }
    let mut x0 = vec![0.0; n];
    for &idx in &indices[..k] {
        x0[idx] = rng.sample(StandardNormal);
    }

    let noise = normal_vec(&mut rng, m);
    let mut b = a.matvec(&x0);
    for (bi, ni) in b.iter_mut().zip(&noise) {
        *bi += 0.1 * ni;
    }

    let atb = a.matvec_transpose(&b);
    let lambda = 0.1 * atb.iter().fold(0.0f64, |mx, &v| mx.max(v.abs()));

    GraphFormProblem {
        a,
        f: SeparableFunction::Quadratic { b },
        g: SeparableFunction::L1 { lambda },
        meta: ProblemMeta {
            kind: ProblemKind::Lasso,
            seed,
            ground_truth: Some(x0),
            dual_certificate: None,
        },
    }
}

/// Random inequality-form LP `min c^T x  s.t. A x <= b`: Gaussian `A`,
/// `b = A x0 + |slack|` for a strictly interior `x0`, and
/// `c = -A^T mu` with positive `mu`, so the instance is feasible and
/// bounded by construction. Deterministic per seed.
pub fn gen_lp(m: usize, n: usize, seed: u64) -> GraphFormProblem {
    assert!(m >= 1 && n >= 1, "dimensions must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DenseMatrix::new(m, n, normal_vec(&mut rng, m * n)).expect("finite gaussian entries");

    let x0 = normal_vec(&mut rng, n);
    let mut b = a.matvec(&x0);
    for bi in b.iter_mut() {
        let slack: f64 = rng.sample(StandardNormal);
        *bi += slack.abs();
    }

    let mu: Vec<f64> = (0..m).map(|_| 0.1 + rng.random::<f64>()).collect();
    let c: Vec<f64> = a.matvec_transpose(&mu).iter().map(|v| -v).collect();

    GraphFormProblem {
        a,
        f: SeparableFunction::IndicatorLeq { b },
        g: SeparableFunction::Linear { c },
        meta: ProblemMeta {
            kind: ProblemKind::Lp,
            seed,
            ground_truth: Some(x0),
            dual_certificate: Some(mu),
        },
    }
}

const ORACLE_MAX_ITER: usize = 1_000_000;

/// Independent lasso reference: plain proximal gradient (ISTA) with
/// backtracking line search, run until the per-coordinate subgradient
/// optimality residual drops to `tol`. Shares no code with the ADMM
/// solvers.
pub fn lasso_oracle(prob: &GraphFormProblem, tol: f64) -> Result<(Vec<f64>, f64)> {
    let lambda = match (&prob.f, &prob.g) {
        (SeparableFunction::Quadratic { .. }, SeparableFunction::L1 { lambda }) => *lambda,
        _ => {
            return Err(Error::InvalidInput(
                "lasso oracle requires quadratic f and l1 g".into(),
            ))
        }
    };
    let b = match &prob.f {
        SeparableFunction::Quadratic { b } => b,
        _ => unreachable!(),
    };
    let a = &prob.a;
    let n = a.cols();

    let half_sq = |x: &[f64]| -> f64 {
        let r: Vec<f64> = a.matvec(x).iter().zip(b).map(|(ax, bi)| ax - bi).collect();
        0.5 * r.iter().map(|v| v * v).sum::<f64>()
    };

    let mut x = vec![0.0; n];
    let mut step = 1.0;
    for iter in 0..ORACLE_MAX_ITER {
        let residual: Vec<f64> = a.matvec(&x).iter().zip(b).map(|(ax, bi)| ax - bi).collect();
        let grad = a.matvec_transpose(&residual);

        // per-coordinate subgradient optimality residual
        let mut worst = 0.0f64;
        for i in 0..n {
            let r = if x[i] > 0.0 {
                (grad[i] + lambda).abs()
            } else if x[i] < 0.0 {
                (grad[i] - lambda).abs()
            } else {
                (grad[i].abs() - lambda).max(0.0)
            };
            worst = worst.max(r);
        }
        if worst <= tol {
            let obj = half_sq(&x) + lambda * x.iter().map(|v| v.abs()).sum::<f64>();
            return Ok((x, obj));
        }

        let fx = 0.5 * residual.iter().map(|v| v * v).sum::<f64>();
        loop {
            let x_new: Vec<f64> = x
                .iter()
                .zip(&grad)
                .map(|(&xi, &gi)| soft_threshold(xi - step * gi, step * lambda))
                .collect();
            let diff: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
            if norm2(&diff) == 0.0 {
                x = x_new;
                break;
            }
            let quad_bound = fx
                + diff.iter().zip(&grad).map(|(d, g)| d * g).sum::<f64>()
                + diff.iter().map(|d| d * d).sum::<f64>() / (2.0 * step);
            if half_sq(&x_new) <= quad_bound + 1e-12 * fx.abs() {
                x = x_new;
                break;
            }
            step *= 0.5;
            if step < 1e-300 {
                return Err(Error::OracleFailure("backtracking step underflow".into()));
            }
        }
        let _ = iter;
    }
    Err(Error::OracleFailure(format!(
        "ISTA did not reach tol {tol:e} within {ORACLE_MAX_ITER} iterations"
    )))
}

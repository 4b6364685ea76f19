//! Graph projection splitting in scaled variables.
//!
//! The graph-form problem `minimize f(y) + g(x) subject to A x = y` is
//! solved as ADMM on the equivalent scaled problem with `M = D A E`,
//! `x~ = E^-1 x`, `y~ = D y`. Each iteration is a prox step on the
//! composed functions, a Euclidean projection onto the graph subspace
//! `{(x~, y~) : M x~ = y~}`, and a dual update. The projection is
//! evaluated through the cached Cholesky factor of `I + M^T M`; for a
//! fixed product `alpha * beta` the matrix `M` never changes, so the
//! step-size ratio `beta / alpha` can be adapted at zero factorization
//! cost.

// resolves f64 math in no_std builds; test builds link std and shadow it
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use crate::cholesky::Cholesky;
use crate::equilibration::{ruiz, DiagonalScaling, DEFAULT_EPS, DEFAULT_MAX_ITER};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::metrics::{spectral_norm, NormOrder};
use crate::problems::{scaled_prox, GraphFormProblem};

/// Scaling plan: an equilibrating pair `(D^, E^)` with `gamma =
/// ||D^ A E^||`, and the two remaining degrees of freedom `alpha`,
/// `beta`. The effective scaling is `D = alpha D^`, `E = beta E^`, so
/// `||D A E|| = alpha * beta * gamma` and `beta / alpha` plays the role
/// of the ADMM step size.
#[derive(Debug, Clone)]
pub struct ScalingPlan {
    pub d_hat: DiagonalScaling,
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl ScalingPlan {
    /// Diagonal of `D = alpha D^`.
    pub fn d_vec(&self) -> Vec<f64> {
        self.d_hat.d1.iter().map(|&v| self.alpha * v).collect()
    }

    /// Diagonal of `E = beta E^`.
    pub fn e_vec(&self) -> Vec<f64> {
        self.d_hat.d2.iter().map(|&v| self.beta * v).collect()
    }

    /// `||D A E|| = alpha * beta * gamma`.
    pub fn scaled_norm(&self) -> f64 {
        self.alpha * self.beta * self.gamma
    }

    /// `beta / alpha`.
    pub fn step_ratio(&self) -> f64 {
        self.beta / self.alpha
    }

    /// Same equilibration, new targets: `||DAE|| = scaled_norm` and
    /// `beta / alpha = step_ratio`.
    pub fn with_targets(&self, scaled_norm: f64, step_ratio: f64) -> ScalingPlan {
        let ab = scaled_norm / self.gamma;
        ScalingPlan {
            d_hat: self.d_hat.clone(),
            gamma: self.gamma,
            alpha: (ab / step_ratio).sqrt(),
            beta: (ab * step_ratio).sqrt(),
        }
    }
}

/// Plan from equilibration: run Ruiz, measure `gamma = ||D^ A E^||`,
/// then split the two degrees of freedom so that `||DAE|| =
/// target_norm` and `beta / alpha = rho0`.
pub fn plan_scaling(a: &DenseMatrix, p: NormOrder, target_norm: f64, rho0: f64) -> Result<ScalingPlan> {
    if !(target_norm > 0.0) || !(rho0 > 0.0) {
        return Err(Error::InvalidInput("target norm and rho0 must be positive".into()));
    }
    let (d_hat, _) = ruiz(a, p, DEFAULT_EPS, DEFAULT_MAX_ITER)?;
    let gamma = spectral_norm(&d_hat.apply(a))?;
    let ab = target_norm / gamma;
    Ok(ScalingPlan {
        d_hat,
        gamma,
        alpha: (ab / rho0).sqrt(),
        beta: (ab * rho0).sqrt(),
    })
}

/// Plan that skips equilibration (`D^ = E^ = I`); used for comparisons
/// and as a fallback for matrices with zero rows or columns, where
/// `gamma` falls back to 1.
pub fn identity_plan(a: &DenseMatrix, target_norm: f64, rho0: f64) -> Result<ScalingPlan> {
    if !(target_norm > 0.0) || !(rho0 > 0.0) {
        return Err(Error::InvalidInput("target norm and rho0 must be positive".into()));
    }
    let gamma = if a.is_zero() { 1.0 } else { spectral_norm(a)? };
    let ab = target_norm / gamma;
    Ok(ScalingPlan {
        d_hat: DiagonalScaling::identity(a.rows(), a.cols()),
        gamma,
        alpha: (ab / rho0).sqrt(),
        beta: (ab * rho0).sqrt(),
    })
}

/// Cached projector onto the graph subspace `{(x~, y~) : M x~ = y~}`.
///
/// The projection is computed through the reduced n x n SPD system:
/// `x' = (I + M^T M)^-1 (x~ + M^T y~)`, `y' = M x'`, which is
/// algebraically identical to the block-matrix form of the projector.
#[derive(Debug, Clone)]
pub struct ProjectionCache {
    m: DenseMatrix,
    chol: Cholesky,
    refactor_count: usize,
}

impl ProjectionCache {
    pub fn new(m: DenseMatrix) -> Self {
        let chol = Self::factor(&m);
        Self {
            m,
            chol,
            refactor_count: 1,
        }
    }

    fn factor(m: &DenseMatrix) -> Cholesky {
        let n = m.cols();
        let mut k = m.gram();
        for i in 0..n {
            k.set(i, i, k.get(i, i) + 1.0);
        }
        // I + M^T M is SPD for any finite M
        Cholesky::factor(&k).expect("I + M^T M is positive definite")
    }

    /// Replaces `M`; counts the factorization.
    pub fn refactor(&mut self, m: DenseMatrix) {
        self.chol = Self::factor(&m);
        self.m = m;
        self.refactor_count += 1;
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.m
    }

    /// Number of factorizations performed over the cache lifetime.
    pub fn refactor_count(&self) -> usize {
        self.refactor_count
    }

    /// Euclidean projection of `(x_t, y_t)` onto the graph subspace.
    pub fn project(&self, x_t: &[f64], y_t: &[f64]) -> (Vec<f64>, Vec<f64>) {
        assert_eq!(x_t.len(), self.m.cols(), "projection x dimension mismatch");
        assert_eq!(y_t.len(), self.m.rows(), "projection y dimension mismatch");
        let mut rhs = self.m.matvec_transpose(y_t);
        for (r, x) in rhs.iter_mut().zip(x_t) {
            *r += x;
        }
        let x_p = self.chol.solve(&rhs);
        let y_p = self.m.matvec(&x_p);
        (x_p, y_p)
    }
}

/// Euclidean projection onto `{(x~, y~) : M x~ = y~}` through the cache.
pub fn graph_project(cache: &ProjectionCache, x_t: &[f64], y_t: &[f64]) -> (Vec<f64>, Vec<f64>) {
    cache.project(x_t, y_t)
}

/// Scaled iterates of a graph projection splitting run: prox outputs
/// `(x_t, y_t)`, projected copies `(x_p, y_p)`, and scaled duals.
#[derive(Debug, Clone)]
pub struct GraphState {
    pub x_t: Vec<f64>,
    pub y_t: Vec<f64>,
    pub x_p: Vec<f64>,
    pub y_p: Vec<f64>,
    pub u_x: Vec<f64>,
    pub u_y: Vec<f64>,
}

impl GraphState {
    fn zeros(m: usize, n: usize) -> Self {
        Self {
            x_t: vec![0.0; n],
            y_t: vec![0.0; m],
            x_p: vec![0.0; n],
            y_p: vec![0.0; m],
            u_x: vec![0.0; n],
            u_y: vec![0.0; m],
        }
    }

    /// Change of scaled coordinates after `(alpha, beta) -> (alpha/c,
    /// beta*c)`: primal blocks shrink by `c`, duals grow by `c`.
    fn rescale(&mut self, c: f64) {
        for v in self
            .x_t
            .iter_mut()
            .chain(&mut self.y_t)
            .chain(&mut self.x_p)
            .chain(&mut self.y_p)
        {
            *v /= c;
        }
        for v in self.u_x.iter_mut().chain(&mut self.u_y) {
            *v *= c;
        }
    }
}

/// Residual-balancing policy for the cost-free `beta / alpha`
/// adaptation.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveConfig {
    pub mu: f64,
    pub tau: f64,
    pub max_adaptations: usize,
}

impl Default for AdaptiveConfig {
    fn default() -> Self {
        Self {
            mu: 10.0,
            tau: 2.0,
            max_adaptations: 50,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub adaptive: Option<AdaptiveConfig>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-4,
            max_iter: 100_000,
            adaptive: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminationStatus {
    Converged,
    MaxIterations,
}

/// Full record of a graph projection splitting run. Residuals are
/// measured in the scaled variables where the algorithm runs and also
/// reported in unscaled units; the graph-constraint dual is reported in
/// `y` units (`dual`), while its scaled counterpart stays available as
/// `final_state.u_y`.
#[derive(Debug, Clone)]
pub struct SolveTrace {
    pub status: TerminationStatus,
    pub iterations: usize,
    pub objective_history: Vec<f64>,
    pub residual_history: Vec<(f64, f64)>,
    pub residual_history_unscaled: Vec<(f64, f64)>,
    /// Unscaled solution `x = E x~`.
    pub x: Vec<f64>,
    /// Unscaled solution `y = D^-1 y~`.
    pub y: Vec<f64>,
    /// Dual estimate for the constraint `A x = y`, an element of
    /// `partial f(y)` at convergence: `-D u_y`.
    pub dual: Vec<f64>,
    pub refactor_count: usize,
    pub adaptations: usize,
    pub final_plan: ScalingPlan,
    /// Scaled iterates at termination.
    pub final_state: GraphState,
}

/// Residual-balancing step: keeps `alpha * beta` (hence `M = DAE` and
/// any cached factorization) fixed and moves the step ratio by `tau`
/// when the residuals are out of balance by more than `mu`.
///
/// At fixed `alpha * beta` the prox penalties are `alpha^2` on the f
/// side and `1 / beta^2` on the g side, both proportional to
/// `alpha / beta`, so a dominant primal residual calls for a larger
/// `alpha / beta` (smaller step ratio `beta / alpha`) and vice versa.
pub fn adapt_step(plan: &ScalingPlan, r_primal: f64, r_dual: f64, mu: f64, tau: f64) -> ScalingPlan {
    let mut out = plan.clone();
    let s = tau.sqrt();
    if r_primal > mu * r_dual {
        out.alpha *= s;
        out.beta /= s;
    } else if r_dual > mu * r_primal {
        out.alpha /= s;
        out.beta *= s;
    }
    out
}

/// Runs graph projection splitting with the given scaling plan until
/// the relative primal and dual residuals in the scaled variables drop
/// below `cfg.tol`, or `cfg.max_iter` is reached (a status, not an
/// error).
pub fn solve_graph_form(
    prob: &GraphFormProblem,
    plan: &ScalingPlan,
    cfg: &SolverConfig,
) -> Result<SolveTrace> {
    let a = &prob.a;
    let (m, n) = (a.rows(), a.cols());
    if plan.d_hat.d1.len() != m || plan.d_hat.d2.len() != n {
        return Err(Error::InvalidInput("scaling plan dimensions do not match problem".into()));
    }
    if !(cfg.tol > 0.0) {
        return Err(Error::InvalidInput("tol must be positive".into()));
    }

    let mut plan_cur = plan.clone();
    let mut d = plan_cur.d_vec();
    let mut e = plan_cur.e_vec();
    let mut inv_d: Vec<f64> = d.iter().map(|v| 1.0 / v).collect();

    let cache = ProjectionCache::new(a.scaled(&d, &e));
    let mut state = GraphState::zeros(m, n);

    let mut objective_history = Vec::new();
    let mut residual_history = Vec::new();
    let mut residual_history_unscaled = Vec::new();
    let mut status = TerminationStatus::MaxIterations;
    let mut iterations = 0;
    let mut adaptations = 0;
    let mut primal_scale_seen = 0.0f64;
    let mut dual_scale_seen = 0.0f64;

    while iterations < cfg.max_iter {
        iterations += 1;

        // (1) prox of the composed functions at z_p - u
        let vx: Vec<f64> = (0..n).map(|i| state.x_p[i] - state.u_x[i]).collect();
        let vy: Vec<f64> = (0..m).map(|i| state.y_p[i] - state.u_y[i]).collect();
        state.x_t = scaled_prox(&prob.g, &e, &vx)?;
        state.y_t = scaled_prox(&prob.f, &inv_d, &vy)?;

        // (2) projection of z_t + u onto the graph subspace
        let px: Vec<f64> = (0..n).map(|i| state.x_t[i] + state.u_x[i]).collect();
        let py: Vec<f64> = (0..m).map(|i| state.y_t[i] + state.u_y[i]).collect();
        let (x_p_new, y_p_new) = cache.project(&px, &py);
        let dual_sq = diff_norm_sq(&x_p_new, &state.x_p) + diff_norm_sq(&y_p_new, &state.y_p);
        let dual_unscaled_sq = diff_norm_sq_weighted(&x_p_new, &state.x_p, &e)
            + diff_norm_sq_weighted(&y_p_new, &state.y_p, &inv_d);
        state.x_p = x_p_new;
        state.y_p = y_p_new;

        // (3) dual ascent on z_t - z_p
        let mut primal_sq = 0.0;
        let mut primal_unscaled_sq = 0.0;
        for i in 0..n {
            let r = state.x_t[i] - state.x_p[i];
            state.u_x[i] += r;
            primal_sq += r * r;
            primal_unscaled_sq += (e[i] * r) * (e[i] * r);
        }
        for i in 0..m {
            let r = state.y_t[i] - state.y_p[i];
            state.u_y[i] += r;
            primal_sq += r * r;
            primal_unscaled_sq += (inv_d[i] * r) * (inv_d[i] * r);
        }
        let r_primal = primal_sq.sqrt();
        let r_dual = dual_sq.sqrt();
        residual_history.push((r_primal, r_dual));
        residual_history_unscaled.push((primal_unscaled_sq.sqrt(), dual_unscaled_sq.sqrt()));

        let x_unscaled: Vec<f64> = (0..n).map(|i| e[i] * state.x_t[i]).collect();
        let y_unscaled: Vec<f64> = (0..m).map(|i| inv_d[i] * state.y_t[i]).collect();
        objective_history.push(prob.f.eval(&y_unscaled) + prob.g.eval(&x_unscaled));

        // relative stopping with a vanishing-solution floor: the pure
        // relative test can never fire when the solution is exactly 0
        let z_t_norm = (norm_sq(&state.x_t) + norm_sq(&state.y_t)).sqrt();
        let z_p_norm = (norm_sq(&state.x_p) + norm_sq(&state.y_p)).sqrt();
        let u_norm = (norm_sq(&state.u_x) + norm_sq(&state.u_y)).sqrt();
        primal_scale_seen = primal_scale_seen.max(z_t_norm).max(z_p_norm);
        dual_scale_seen = dual_scale_seen.max(u_norm);
        let eps_pri = cfg.tol * z_t_norm.max(z_p_norm).max(1e-6 * primal_scale_seen);
        let eps_dual = cfg.tol * u_norm.max(1e-6 * dual_scale_seen);
        if r_primal <= eps_pri && r_dual <= eps_dual {
            status = TerminationStatus::Converged;
            break;
        }

        if let Some(ad) = &cfg.adaptive {
            if adaptations < ad.max_adaptations {
                let new_plan = adapt_step(&plan_cur, r_primal, r_dual, ad.mu, ad.tau);
                if new_plan.beta != plan_cur.beta {
                    // alpha*beta is unchanged, so M and the cached
                    // factorization stay valid; only the coordinates of
                    // the scaled iterates move.
                    let c = new_plan.beta / plan_cur.beta;
                    state.rescale(c);
                    primal_scale_seen /= c;
                    dual_scale_seen *= c;
                    plan_cur = new_plan;
                    d = plan_cur.d_vec();
                    e = plan_cur.e_vec();
                    inv_d = d.iter().map(|v| 1.0 / v).collect();
                    adaptations += 1;
                }
            }
        }
    }

    let x: Vec<f64> = (0..n).map(|i| e[i] * state.x_t[i]).collect();
    let y: Vec<f64> = (0..m).map(|i| inv_d[i] * state.y_t[i]).collect();
    let dual: Vec<f64> = (0..m).map(|i| -d[i] * state.u_y[i]).collect();

    Ok(SolveTrace {
        status,
        iterations,
        objective_history,
        residual_history,
        residual_history_unscaled,
        x,
        y,
        dual,
        refactor_count: cache.refactor_count(),
        adaptations,
        final_plan: plan_cur,
        final_state: state,
    })
}

fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|&x| x * x).sum()
}

fn diff_norm_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum()
}

fn diff_norm_sq_weighted(a: &[f64], b: &[f64], w: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(w)
        .map(|((&x, &y), &wi)| {
            let d = wi * (x - y);
            d * d
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    /// `||DAE|| = alpha * beta * gamma` for the cell.
    pub scaled_norm: f64,
    /// `beta / alpha` for the cell.
    pub step_ratio: f64,
    pub iterations: usize,
    pub status: TerminationStatus,
    pub objective: f64,
}

/// Log-spaced grid over `(||DAE||, beta/alpha)`.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub scaled_norms: Vec<f64>,
    pub step_ratios: Vec<f64>,
}

impl SweepGrid {
    pub fn log_spaced(
        norm_range: (f64, f64),
        norm_steps: usize,
        ratio_range: (f64, f64),
        ratio_steps: usize,
    ) -> Result<Self> {
        Ok(Self {
            scaled_norms: log_space(norm_range.0, norm_range.1, norm_steps)?,
            step_ratios: log_space(ratio_range.0, ratio_range.1, ratio_steps)?,
        })
    }
}

/// Geometric spacing from `lo` to `hi` inclusive; a single step yields
/// `[lo]`.
pub fn log_space(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0) || !(hi > 0.0) || steps == 0 {
        return Err(Error::InvalidInput("log spacing needs positive bounds and steps >= 1".into()));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let ratio = hi / lo;
    Ok((0..steps)
        .map(|k| lo * ratio.powf(k as f64 / (steps - 1) as f64))
        .collect())
}

/// Solves one cell per grid point (row-major over scaled norms, then
/// step ratios), reusing the base plan's equilibration; failures are
/// recorded as `MaxIterations` cells, never errors.
pub fn sweep(
    prob: &GraphFormProblem,
    plan_base: &ScalingPlan,
    grid: &SweepGrid,
    cfg: &SolverConfig,
) -> Result<Vec<SweepCell>> {
    if grid.scaled_norms.is_empty() || grid.step_ratios.is_empty() {
        return Err(Error::InvalidInput("sweep grid must be nonempty".into()));
    }
    let mut cells = Vec::with_capacity(grid.scaled_norms.len() * grid.step_ratios.len());
    for &s in &grid.scaled_norms {
        for &r in &grid.step_ratios {
            let plan = plan_base.with_targets(s, r);
            let trace = solve_graph_form(prob, &plan, cfg)?;
            cells.push(SweepCell {
                scaled_norm: s,
                step_ratio: r,
                iterations: trace.iterations,
                status: trace.status,
                objective: *trace.objective_history.last().unwrap_or(&f64::NAN),
            });
        }
    }
    Ok(cells)
}

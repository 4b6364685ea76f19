//! Instance generation helpers shared by the commands.

use eqadmm_core::matrix::DenseMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn gaussian_dense(m: usize, n: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseMatrix::new(m, n, (0..m * n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
        .expect("finite gaussian entries")
}

/// Scales each column by `10^u`, `u` uniform in `[-decades, decades]`;
/// the scale draw is decoupled from the entry draw by a seed offset.
pub fn scale_columns(a: &DenseMatrix, decades: f64, seed: u64) -> DenseMatrix {
    if decades == 0.0 {
        return a.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC0F_FEE);
    let scales: Vec<f64> = (0..a.cols())
        .map(|_| 10f64.powf(rng.random::<f64>() * 2.0 * decades - decades))
        .collect();
    a.scaled(&vec![1.0; a.rows()], &scales)
}

/// Lasso-class data `(A, b, lambda)` with optionally ill-conditioned
/// columns: Gaussian `A` scaled per column, sparse planted signal,
/// `b = A x0 + 0.1 noise`, `lambda = 0.1 ||A^T b||_inf`.
pub fn lasso_data(m: usize, n: usize, seed: u64, decades: f64) -> (DenseMatrix, Vec<f64>, f64) {
    let base = eqadmm_core::problems::gen_lasso(m, n, seed);
    let a = scale_columns(&base.a, decades, seed);
    let b = match base.f {
        eqadmm_core::problems::SeparableFunction::Quadratic { b } => b,
        _ => unreachable!(),
    };
    let atb = a.matvec_transpose(&b);
    let lambda = 0.1 * atb.iter().fold(0.0f64, |mx, &v| mx.max(v.abs()));
    (a, b, lambda)
}

//! `eqadmm verify`: property-check the column-scaling bounds on random
//! instances. Per trial, a random invertible A gets its column-norm
//! equalizing scaling D^ and the checks
//!   psi(A D^) <= psi(A D) + 1e-9,
//!   kappa(A D^) <= sqrt(n) kappa(A D) + 1e-9      over sampled D,
//! plus, with P = A A^T and D^_j = 1/sqrt(P_jj),
//!   kappa(D^ P D^) <= n kappa(D P D) + 1e-9.
//! Near-singular draws are skipped with a notice. A violation writes
//! the counterexample to disk and exits 1.

use std::path::PathBuf;

use clap::Args;
use eqadmm_core::matrix::DenseMatrix;
use eqadmm_core::metrics::{condition_number, psi_metric};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{io_err, write_text, CliError, CmdResult};
use crate::{mmio, pool};

/// Skip instances whose condition number is within two decades of the
/// singularity threshold; the bounds hold there too but floating-point
/// kappa is no longer trustworthy.
const KAPPA_SKIP: f64 = 1e10;

const SAMPLES_PER_TRIAL: usize = 20;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Random instances to check
    #[arg(long, default_value_t = 100)]
    pub trials: usize,

    /// Matrix dimension or range `LO:HI`
    #[arg(long, default_value = "5:20")]
    pub dim: String,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Directory that receives a counterexample on violation
    #[arg(short = 'o', long = "out", default_value = ".")]
    pub out: PathBuf,
}

enum TrialOutcome {
    Ok,
    Skipped,
    Violation { what: String, a: DenseMatrix, d: Vec<f64> },
}

fn parse_dim_range(s: &str) -> Result<(usize, usize), CliError> {
    let parse = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| CliError::Degenerate(format!("bad dimension `{t}`")))
    };
    let (lo, hi) = match s.split_once(':') {
        Some((lo, hi)) => (parse(lo)?, parse(hi)?),
        None => {
            let n = parse(s)?;
            (n, n)
        }
    };
    if lo < 1 || hi < lo {
        return Err(CliError::Degenerate(format!("bad dimension range `{s}`")));
    }
    Ok((lo, hi))
}

fn run_trial(n_range: (usize, usize), seed: u64) -> TrialOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n_range.0 + (rng.random::<u64>() as usize) % (n_range.1 - n_range.0 + 1);
    let a = DenseMatrix::new(
        n,
        n,
        (0..n * n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect(),
    )
    .expect("finite entries");

    let kappa_a = match condition_number(&a) {
        Ok(k) => k,
        Err(_) => return TrialOutcome::Skipped,
    };
    if !kappa_a.is_finite() || kappa_a >= KAPPA_SKIP {
        return TrialOutcome::Skipped;
    }

    let ones = vec![1.0; n];
    let d_hat: Vec<f64> = (0..n)
        .map(|j| 1.0 / (0..n).map(|i| a.get(i, j) * a.get(i, j)).sum::<f64>().sqrt())
        .collect();
    let a_dhat = a.scaled(&ones, &d_hat);
    let (psi_hat, kappa_hat) = match (psi_metric(&a_dhat), condition_number(&a_dhat)) {
        (Ok(p), Ok(k)) => (p, k),
        _ => return TrialOutcome::Skipped,
    };

    let p_mat = a.matmul(&a.transpose());
    let dp_hat: Vec<f64> = (0..n).map(|j| 1.0 / p_mat.get(j, j).sqrt()).collect();
    let kappa_p_hat = match condition_number(&p_mat.scaled(&dp_hat, &dp_hat)) {
        Ok(k) => k,
        Err(_) => return TrialOutcome::Skipped,
    };

    for _ in 0..SAMPLES_PER_TRIAL {
        let d: Vec<f64> = (0..n)
            .map(|_| 10f64.powf(rng.random::<f64>() * 4.0 - 2.0))
            .collect();
        let ad = a.scaled(&ones, &d);
        let (psi_d, kappa_d) = match (psi_metric(&ad), condition_number(&ad)) {
            (Ok(p), Ok(k)) => (p, k),
            _ => continue,
        };
        if psi_hat > psi_d + 1e-9 {
            return TrialOutcome::Violation {
                what: format!("psi bound: psi(A D^) = {psi_hat} > psi(A D) = {psi_d}"),
                a,
                d,
            };
        }
        if kappa_hat > (n as f64).sqrt() * kappa_d + 1e-9 {
            return TrialOutcome::Violation {
                what: format!(
                    "kappa bound: kappa(A D^) = {kappa_hat} > sqrt(n) kappa(A D) = {}",
                    (n as f64).sqrt() * kappa_d
                ),
                a,
                d,
            };
        }
        let kappa_dpd = match condition_number(&p_mat.scaled(&d, &d)) {
            Ok(k) => k,
            Err(_) => continue,
        };
        if kappa_p_hat > n as f64 * kappa_dpd + 1e-9 {
            return TrialOutcome::Violation {
                what: format!(
                    "spd bound: kappa(D^ P D^) = {kappa_p_hat} > n kappa(D P D) = {}",
                    n as f64 * kappa_dpd
                ),
                a,
                d,
            };
        }
    }
    TrialOutcome::Ok
}

pub fn run(args: &VerifyArgs) -> CmdResult {
    let range = parse_dim_range(&args.dim)?;
    if args.trials == 0 {
        return Err(CliError::Degenerate("--trials must be at least 1".into()));
    }

    let outcomes = pool::run_indexed(args.trials, |t| {
        run_trial(range, args.seed.wrapping_add(t as u64).wrapping_mul(0x9E3779B97F4A7C15) ^ args.seed)
    });

    let mut passed = 0usize;
    let mut skipped = 0usize;
    for outcome in outcomes {
        match outcome {
            TrialOutcome::Ok => passed += 1,
            TrialOutcome::Skipped => skipped += 1,
            TrialOutcome::Violation { what, a, d } => {
                std::fs::create_dir_all(&args.out)
                    .map_err(|e| io_err(anyhow::anyhow!("cannot create {}: {e}", args.out.display())))?;
                mmio::write_matrix(&args.out.join("counterexample_A.mtx"), &a).map_err(io_err)?;
                mmio::write_vector(&args.out.join("counterexample_d.txt"), &d).map_err(io_err)?;
                write_text(&args.out.join("counterexample.txt"), &format!("{what}\n"))?;
                return Err(CliError::Violation(format!(
                    "property violated: {what} (counterexample written to {})",
                    args.out.display()
                )));
            }
        }
    }
    if skipped > 0 {
        println!("verify: skipped {skipped} near-singular draws (kappa >= {KAPPA_SKIP:.0e})");
    }
    println!(
        "verify: scaling bounds hold on {passed} instances x {SAMPLES_PER_TRIAL} scalings (dims {}..={})",
        range.0, range.1
    );
    Ok(())
}

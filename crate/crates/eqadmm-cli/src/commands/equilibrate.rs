//! `eqadmm equilibrate`: scale a matrix with Ruiz or Sinkhorn-Knopp and
//! report the conditioning before and after.
//!
//! Outputs in the target directory: `d1.txt`, `d2.txt` (scaling
//! diagonals) and `report.csv` with the single data row
//! `iterations,converged,r1,r2,kappa_before,kappa_after`.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use eqadmm_core::equilibration::{ruiz, sinkhorn_knopp};
use eqadmm_core::NormOrder;

use super::{core_err, fmt_float, io_err, parse_norm_order, write_text, CliError, CmdResult};
use crate::{gen, mmio};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Ruiz,
    Sinkhorn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Gaussian,
}

#[derive(Debug, Args)]
pub struct EquilibrateArgs {
    /// MatrixMarket input file
    #[arg(long, conflicts_with = "gen")]
    pub input: Option<PathBuf>,

    /// Generate the input instead of reading it
    #[arg(long, value_enum)]
    pub gen: Option<GenKind>,

    /// Rows for --gen
    #[arg(short = 'm', long = "rows", default_value_t = 750)]
    pub m: usize,

    /// Columns for --gen
    #[arg(short = 'n', long = "cols", default_value_t = 250)]
    pub n: usize,

    /// RNG seed for --gen
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Random column scaling in decades for --gen (0 = none)
    #[arg(long, default_value_t = 0.0)]
    pub col_scale: f64,

    /// Norm order: 1, 2, inf, or any float >= 1
    #[arg(short = 'p', long = "norm", default_value = "2", value_parser = parse_norm_order)]
    pub p: NormOrder,

    /// Equilibration tolerance on the ratio excess r - 1
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,

    /// Iteration cap
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,

    #[arg(long, value_enum, default_value_t = Algorithm::Ruiz)]
    pub algorithm: Algorithm,

    /// Output directory for d1.txt, d2.txt, report.csv
    #[arg(short = 'o', long = "out", default_value = ".")]
    pub out: PathBuf,
}

pub fn run(args: &EquilibrateArgs) -> CmdResult {
    let a = match (&args.input, &args.gen) {
        (Some(path), _) => mmio::read_matrix(path).map_err(io_err)?,
        (None, Some(GenKind::Gaussian)) => {
            let base = gen::gaussian_dense(args.m, args.n, args.seed);
            gen::scale_columns(&base, args.col_scale, args.seed)
        }
        (None, None) => {
            return Err(CliError::Io(anyhow::anyhow!(
                "equilibrate needs --input FILE or --gen gaussian"
            )))
        }
    };

    let algo = match args.algorithm {
        Algorithm::Ruiz => ruiz,
        Algorithm::Sinkhorn => sinkhorn_knopp,
    };
    let (scaling, report) = algo(&a, args.p, args.eps, args.max_iter).map_err(core_err)?;

    std::fs::create_dir_all(&args.out)
        .map_err(|e| io_err(anyhow::anyhow!("cannot create {}: {e}", args.out.display())))?;
    mmio::write_vector(&args.out.join("d1.txt"), &scaling.d1).map_err(io_err)?;
    mmio::write_vector(&args.out.join("d2.txt"), &scaling.d2).map_err(io_err)?;

    let r1 = report.r1_history.last().copied().unwrap_or(1.0);
    let r2 = report.r2_history.last().copied().unwrap_or(1.0);
    let csv = format!
        ("iterations,converged,r1,r2,kappa_before,kappa_after\n{},{},{},{},{},{}\n",
        report.iterations,
        report.converged,
        fmt_float(r1),
        fmt_float(r2),
        fmt_float(report.kappa_before),
        fmt_float(report.kappa_after),
    );
    write_text(&args.out.join("report.csv"), &csv)?;

    println!(
        "equilibrate: {}x{} {:?} iterations={} converged={} r1={:.3e} r2={:.3e} kappa {:.4e} -> {:.4e}",
        a.rows(),
        a.cols(),
        args.algorithm,
        report.iterations,
        report.converged,
        r1,
        r2,
        report.kappa_before,
        report.kappa_after
    );
    Ok(())
}

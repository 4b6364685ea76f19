//! `eqadmm solve`: graph projection splitting on a generated or stored
//! problem. Writes `trace.csv` with one row per iteration:
//! `iter,objective,primal_residual,dual_residual,primal_unscaled,dual_unscaled`.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use eqadmm_core::error::Error;
use eqadmm_core::graph::{
    identity_plan, plan_scaling, solve_graph_form, AdaptiveConfig, ScalingPlan, SolverConfig,
    TerminationStatus,
};
use eqadmm_core::problems::{gen_lasso, gen_lp, GraphFormProblem};
use eqadmm_core::NormOrder;

use super::{core_err, fmt_float, io_err, parse_norm_order, write_text, CliError, CmdResult};
use crate::problem_io;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemGen {
    Lasso,
    Lp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    On,
    Off,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Problem directory (A.mtx, b.txt, meta.txt, ...)
    #[arg(long, conflicts_with = "gen")]
    pub input: Option<PathBuf>,

    /// Generate the problem instead of reading it
    #[arg(long, value_enum)]
    pub gen: Option<ProblemGen>,

    #[arg(short = 'm', long = "rows", default_value_t = 750)]
    pub m: usize,

    #[arg(short = 'n', long = "cols", default_value_t = 250)]
    pub n: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Random column scaling in decades for --gen lasso (0 = none)
    #[arg(long, default_value_t = 0.0)]
    pub col_scale: f64,

    /// Norm order used by the equilibration step
    #[arg(short = 'p', long = "norm", default_value = "2", value_parser = parse_norm_order)]
    pub p: NormOrder,

    /// Relative stopping tolerance
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,

    #[arg(long, default_value_t = 100_000)]
    pub max_iter: usize,

    /// Target ||DAE||
    #[arg(long, default_value_t = 1.0)]
    pub target_norm: f64,

    /// Initial step ratio beta/alpha
    #[arg(long, default_value_t = 1.0)]
    pub rho0: f64,

    /// Residual-balancing step adaptation
    #[arg(long, value_enum, default_value_t = Toggle::Off)]
    pub adaptive: Toggle,

    /// Skip equilibration (D^ = E^ = I)
    #[arg(long, default_value_t = false)]
    pub no_equilibration: bool,

    /// Also write the generated problem to this directory
    #[arg(long)]
    pub dump_problem: Option<PathBuf>,

    /// Trace CSV path
    #[arg(short = 'o', long = "out", default_value = "trace.csv")]
    pub out: PathBuf,
}

pub(crate) fn build_plan(
    a: &eqadmm_core::DenseMatrix,
    p: NormOrder,
    target_norm: f64,
    rho0: f64,
    no_equilibration: bool,
) -> Result<ScalingPlan, CliError> {
    if no_equilibration {
        return identity_plan(a, target_norm, rho0).map_err(core_err);
    }
    match plan_scaling(a, p, target_norm, rho0) {
        Ok(plan) => Ok(plan),
        // zero rows or columns: fall back to the identity scaling so
        // structurally trivial problems still solve
        Err(Error::DegenerateInput(msg)) => {
            eprintln!("note: equilibration skipped ({msg}); using identity scaling");
            identity_plan(a, target_norm, rho0).map_err(core_err)
        }
        Err(e) => Err(core_err(e)),
    }
}

pub fn run(args: &SolveArgs) -> CmdResult {
    let prob: GraphFormProblem = match (&args.input, &args.gen) {
        (Some(dir), _) => problem_io::read_problem(dir).map_err(io_err)?,
        (None, Some(ProblemGen::Lasso)) => {
            if args.col_scale != 0.0 {
                let (a, b, lambda) = crate::gen::lasso_data(args.m, args.n, args.seed, args.col_scale);
                let mut p = GraphFormProblem::new(
                    a,
                    eqadmm_core::problems::SeparableFunction::Quadratic { b },
                    eqadmm_core::problems::SeparableFunction::L1 { lambda },
                )
                .map_err(core_err)?;
                p.meta.kind = eqadmm_core::problems::ProblemKind::Lasso;
                p.meta.seed = args.seed;
                p
            } else {
                gen_lasso(args.m, args.n, args.seed)
            }
        }
        (None, Some(ProblemGen::Lp)) => gen_lp(args.m, args.n, args.seed),
        (None, None) => {
            return Err(CliError::Io(anyhow::anyhow!(
                "solve needs --input DIR or --gen {{lasso|lp}}"
            )))
        }
    };
    if let Some(dir) = &args.dump_problem {
        problem_io::write_problem(dir, &prob).map_err(io_err)?;
    }

    let plan = build_plan(&prob.a, args.p, args.target_norm, args.rho0, args.no_equilibration)?;
    let cfg = SolverConfig {
        tol: args.tol,
        max_iter: args.max_iter,
        adaptive: match args.adaptive {
            Toggle::On => Some(AdaptiveConfig::default()),
            Toggle::Off => None,
        },
    };
    let trace = solve_graph_form(&prob, &plan, &cfg).map_err(core_err)?;

    let mut csv = String::from(
        "iter,objective,primal_residual,dual_residual,primal_unscaled,dual_unscaled\n",
    );
    for (k, obj) in trace.objective_history.iter().enumerate() {
        let (rp, rd) = trace.residual_history[k];
        let (rpu, rdu) = trace.residual_history_unscaled[k];
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            k + 1,
            fmt_float(*obj),
            fmt_float(rp),
            fmt_float(rd),
            fmt_float(rpu),
            fmt_float(rdu)
        ));
    }
    write_text(&args.out, &csv)?;

    let status = match trace.status {
        TerminationStatus::Converged => "converged",
        TerminationStatus::MaxIterations => "maxiter",
    };
    println!(
        "solve: status={status} iterations={} objective={} refactorizations={} adaptations={}",
        trace.iterations,
        fmt_float(*trace.objective_history.last().unwrap_or(&f64::NAN)),
        trace.refactor_count,
        trace.adaptations
    );
    Ok(())
}

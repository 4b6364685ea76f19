//! `eqadmm sweep`: iterate the (||DAE||, beta/alpha) grid, averaging
//! iteration counts over `--trials` seeds (failed cells count as
//! `max_iter`). Writes one row per cell:
//! `scaling,step,iterations,status,final_objective,is_min`
//! where `is_min` marks every cell attaining the minimum mean count.

use std::path::PathBuf;

use clap::Args;
use eqadmm_core::graph::{
    solve_graph_form, AdaptiveConfig, SolverConfig, SweepGrid, TerminationStatus,
};
use eqadmm_core::problems::{gen_lasso, gen_lp, GraphFormProblem};
use eqadmm_core::NormOrder;

use super::solve::{build_plan, ProblemGen, Toggle};
use super::{core_err, fmt_float, io_err, parse_grid, parse_norm_order, write_text, CliError, CmdResult};
use crate::{pool, problem_io};

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Problem directory; the sweep then runs single-trial on it
    #[arg(long, conflicts_with = "gen")]
    pub input: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub gen: Option<ProblemGen>,

    #[arg(short = 'm', long = "rows", default_value_t = 750)]
    pub m: usize,

    #[arg(short = 'n', long = "cols", default_value_t = 250)]
    pub n: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(short = 'p', long = "norm", default_value = "2", value_parser = parse_norm_order)]
    pub p: NormOrder,

    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,

    #[arg(long, default_value_t = 100_000)]
    pub max_iter: usize,

    /// Grid `LO:HI:STEPS,LO:HI:STEPS`: scaling ||DAE|| range, then step
    /// beta/alpha range. Defaults to the 9x9 grid spanning two decades
    /// around 1 (scaling) and around gamma (lasso) or 1/gamma (lp).
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<super::GridAxes>,

    /// Seeds averaged per cell (seed, seed+1, ...)
    #[arg(long, default_value_t = 1)]
    pub trials: usize,

    #[arg(long, value_enum, default_value_t = Toggle::Off)]
    pub adaptive: Toggle,

    #[arg(long, default_value_t = false)]
    pub no_equilibration: bool,

    #[arg(short = 'o', long = "out", default_value = "sweep.csv")]
    pub out: PathBuf,
}

struct CellOutcome {
    iterations: usize,
    converged: bool,
    objective: f64,
}

pub fn run(args: &SweepArgs) -> CmdResult {
    if args.trials == 0 {
        return Err(CliError::Degenerate("--trials must be at least 1".into()));
    }
    let make_problem = |trial: usize| -> Result<GraphFormProblem, CliError> {
        match (&args.input, &args.gen) {
            (Some(dir), _) => problem_io::read_problem(dir).map_err(io_err),
            (None, Some(ProblemGen::Lasso)) => Ok(gen_lasso(args.m, args.n, args.seed + trial as u64)),
            (None, Some(ProblemGen::Lp)) => Ok(gen_lp(args.m, args.n, args.seed + trial as u64)),
            (None, None) => Err(CliError::Io(anyhow::anyhow!(
                "sweep needs --input DIR or --gen {{lasso|lp}}"
            ))),
        }
    };

    // plans per trial share the grid, which is fixed from trial 0's
    // equilibration norm
    let prob0 = make_problem(0)?;
    let plan0 = build_plan(&prob0.a, args.p, 1.0, 1.0, args.no_equilibration)?;
    let gamma = plan0.gamma;
    let ((s_lo, s_hi, s_steps), (r_lo, r_hi, r_steps)) = match args.grid {
        Some(axes) => axes,
        None => {
            let ratio_center = match args.gen {
                Some(ProblemGen::Lp) => 1.0 / gamma,
                _ => gamma,
            };
            (
                (0.01, 100.0, 9),
                (ratio_center / 100.0, ratio_center * 100.0, 9),
            )
        }
    };
    let grid = SweepGrid::log_spaced((s_lo, s_hi), s_steps, (r_lo, r_hi), r_steps)
        .map_err(core_err)?;
    let cells_per_trial = grid.scaled_norms.len() * grid.step_ratios.len();

    let cfg = SolverConfig {
        tol: args.tol,
        max_iter: args.max_iter,
        adaptive: match args.adaptive {
            Toggle::On => Some(AdaptiveConfig::default()),
            Toggle::Off => None,
        },
    };

    // trial problems and plans up front, then all (trial, cell) jobs on
    // the pool
    let mut problems = vec![(prob0, plan0)];
    for t in 1..args.trials {
        let prob = make_problem(t)?;
        let plan = build_plan(&prob.a, args.p, 1.0, 1.0, args.no_equilibration)?;
        problems.push((prob, plan));
    }

    let jobs = args.trials * cells_per_trial;
    let outcomes: Vec<Result<CellOutcome, String>> = pool::run_indexed(jobs, |job| {
        let trial = job / cells_per_trial;
        let cell = job % cells_per_trial;
        let (prob, plan) = &problems[trial];
        let s = grid.scaled_norms[cell / grid.step_ratios.len()];
        let r = grid.step_ratios[cell % grid.step_ratios.len()];
        match solve_graph_form(prob, &plan.with_targets(s, r), &cfg) {
            Ok(trace) => Ok(CellOutcome {
                iterations: trace.iterations,
                converged: trace.status == TerminationStatus::Converged,
                objective: *trace.objective_history.last().unwrap_or(&f64::NAN),
            }),
            Err(e) => Err(e.to_string()),
        }
    });

    // aggregate per cell over trials
    let mut mean_iters = vec![0.0f64; cells_per_trial];
    let mut all_converged = vec![true; cells_per_trial];
    let mut mean_obj = vec![0.0f64; cells_per_trial];
    for (job, outcome) in outcomes.iter().enumerate() {
        let cell = job % cells_per_trial;
        match outcome {
            Ok(o) => {
                mean_iters[cell] += o.iterations as f64 / args.trials as f64;
                all_converged[cell] &= o.converged;
                mean_obj[cell] += o.objective / args.trials as f64;
            }
            Err(msg) => return Err(CliError::Degenerate(msg.clone())),
        }
    }
    let min_mean = mean_iters.iter().cloned().fold(f64::INFINITY, f64::min);

    let mut csv = String::from("scaling,step,iterations,status,final_objective,is_min\n");
    for (cell, mean) in mean_iters.iter().enumerate() {
        let s = grid.scaled_norms[cell / grid.step_ratios.len()];
        let r = grid.step_ratios[cell % grid.step_ratios.len()];
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_float(s),
            fmt_float(r),
            fmt_float(*mean),
            if all_converged[cell] { "converged" } else { "maxiter" },
            fmt_float(mean_obj[cell]),
            *mean == min_mean
        ));
    }
    write_text(&args.out, &csv)?;
    println!(
        "sweep: {} cells x {} trials, gamma={:.6e}, min mean iterations {:.1}",
        cells_per_trial, args.trials, gamma, min_mean
    );
    Ok(())
}

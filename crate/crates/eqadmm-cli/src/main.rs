use clap::{Parser, Subcommand};
use eqadmm_cli::commands::{compare, equilibrate, solve, sweep, verify, CmdResult};

const AFTER_HELP: &str = "\
CSV schemas (fixed headers):
  equilibrate report.csv   iterations,converged,r1,r2,kappa_before,kappa_after
  solve trace.csv          iter,objective,primal_residual,dual_residual,primal_unscaled,dual_unscaled
  sweep sweep.csv          scaling,step,iterations,status,final_objective,is_min
  compare comparison.csv   precond,iterations,status,final_objective

Exit codes: 0 success, 1 property violation, 2 I/O error, 3 degenerate input.
Environment: EQADMM_THREADS caps the worker pool for sweep/verify.
All commands are deterministic given --seed.";

#[derive(Parser)]
#[command(
    name = "eqadmm",
    about = "Matrix equilibration and diagonally preconditioned ADMM solvers",
    after_help = AFTER_HELP,
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Equilibrate a matrix (Ruiz or Sinkhorn-Knopp) and report conditioning
    Equilibrate(equilibrate::EquilibrateArgs),
    /// Solve a lasso/LP instance with graph projection splitting
    Solve(solve::SolveArgs),
    /// Sweep the (scaling, step) grid and record iteration counts
    Sweep(sweep::SweepArgs),
    /// Compare consensus ADMM under identity, scalar-optimal, and
    /// gram-inverse-equilibrating preconditioners
    CompareConsensus(compare::CompareArgs),
    /// Property-check the column-scaling condition bounds on random instances
    Verify(verify::VerifyArgs),
}

fn main() {
    let cli = Cli::parse();
    let result: CmdResult = match &cli.command {
        Command::Equilibrate(args) => equilibrate::run(args),
        Command::Solve(args) => solve::run(args),
        Command::Sweep(args) => sweep::run(args),
        Command::CompareConsensus(args) => compare::run(args),
        Command::Verify(args) => verify::run(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

//! IO, file formats, and the command layer for the equilibration and
//! preconditioned-ADMM toolkit. The numerics live in `eqadmm-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod commands;
pub mod gen;
pub mod mmio;
pub mod pool;
pub mod problem_io;

pub use commands::CliError;

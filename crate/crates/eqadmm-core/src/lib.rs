//! Diagonal matrix equilibration and diagonally preconditioned ADMM.
//!
//! The crate provides:
//! - dense condition metrics (kappa, psi, spectral norm),
//! - Sinkhorn-Knopp and Ruiz lp equilibration,
//! - consensus ADMM with a diagonal preconditioner `F`,
//! - graph projection splitting in scaled variables with the
//!   equilibrate / set-norm / adapt-step scaling plan,
//! - problem generators and an independent lasso oracle.
//!
//! Everything here is pure computation over owned buffers; IO, file
//! formats, and the command-line front end live in the companion
//! `eqadmm-cli` crate.

#![no_std]
// negated comparisons like !(x > 0.0) deliberately reject NaN;
// index loops mirror the linear-algebra formulas they implement
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cholesky;
pub mod consensus;
pub mod equilibration;
pub mod error;
pub mod graph;
pub mod matrix;
pub mod metrics;
pub mod problems;

mod svd;

pub use error::{Error, Result};
pub use matrix::DenseMatrix;
pub use metrics::{ConditionMetrics, NormOrder};

//! Command implementations and their exit-code policy:
//! 0 success, 1 property violation, 2 I/O failure, 3 degenerate input.

use std::fmt;
use std::path::Path;

pub mod compare;
pub mod equilibrate;
pub mod solve;
pub mod sweep;
pub mod verify;

#[derive(Debug)]
pub enum CliError {
    /// unreadable input or unwritable output (exit 2)
    Io(anyhow::Error),
    /// degenerate or invalid numeric input (exit 3)
    Degenerate(String),
    /// a verified property failed to hold (exit 1)
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Io(_) => 2,
            CliError::Degenerate(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(e) => write!(f, "{e:#}"),
            CliError::Degenerate(msg) => write!(f, "{msg}"),
            CliError::Violation(msg) => write!(f, "{msg}"),
        }
    }
}

pub type CmdResult = Result<(), CliError>;

pub(crate) fn io_err(e: anyhow::Error) -> CliError {
    CliError::Io(e)
}

pub(crate) fn core_err(e: eqadmm_core::Error) -> CliError {
    CliError::Degenerate(e.to_string())
}

pub(crate) fn write_text(path: &Path, text: &str) -> CmdResult {
    crate::mmio::write_atomic(path, text.as_bytes()).map_err(io_err)
}

/// Norm order flag: `1`, `2`, `inf`, or any float `>= 1`.
pub fn parse_norm_order(s: &str) -> Result<eqadmm_core::NormOrder, String> {
    if s.eq_ignore_ascii_case("inf") {
        return Ok(eqadmm_core::NormOrder::INF);
    }
    let p: f64 = s.parse().map_err(|_| format!("invalid norm order `{s}`"))?;
    eqadmm_core::NormOrder::finite(p).map_err(|e| e.to_string())
}

/// One `(lo, hi, steps)` axis per grid dimension: scaling, then step.
pub type GridAxes = ((f64, f64, usize), (f64, f64, usize));

/// `LO:HI:STEPS,LO:HI:STEPS` grid flag (scaling range, then step range).
pub fn parse_grid(s: &str) -> Result<GridAxes, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("grid must be `LO:HI:STEPS,LO:HI:STEPS`".into());
    }
    let mut axes = Vec::new();
    for part in parts {
        let toks: Vec<&str> = part.split(':').collect();
        if toks.len() != 3 {
            return Err(format!("bad grid axis `{part}`"));
        }
        let lo: f64 = toks[0].parse().map_err(|_| format!("bad grid bound `{}`", toks[0]))?;
        let hi: f64 = toks[1].parse().map_err(|_| format!("bad grid bound `{}`", toks[1]))?;
        let steps: usize = toks[2].parse().map_err(|_| format!("bad grid steps `{}`", toks[2]))?;
        if !(lo > 0.0) || !(hi > 0.0) || steps == 0 {
            return Err(format!("grid axis `{part}` must be positive with steps >= 1"));
        }
        axes.push((lo, hi, steps));
    }
    Ok((axes[0], axes[1]))
}

pub(crate) fn fmt_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6e}")
    } else if v.is_infinite() && v > 0.0 {
        "inf".into()
    } else if v.is_infinite() {
        "-inf".into()
    } else {
        "nan".into()
    }
}

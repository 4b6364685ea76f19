//! Problem directory format: `A.mtx` in MatrixMarket, vectors as
//! plain-text one-value-per-line files, and a flat `meta.txt` with
//! `key=value` lines (kind, seed, dimensions, lambda for lasso).

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use eqadmm_core::problems::{GraphFormProblem, ProblemKind, ProblemMeta, SeparableFunction};

use crate::mmio;

pub fn write_problem(dir: &Path, prob: &GraphFormProblem) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    mmio::write_matrix(&dir.join("A.mtx"), &prob.a)?;

    let mut meta = String::new();
    let kind = match prob.meta.kind {
        ProblemKind::Lasso => "lasso",
        ProblemKind::Lp => "lp",
        ProblemKind::Custom => bail!("only generated lasso/lp problems can be serialized"),
    };
    meta.push_str(&format!("kind={kind}\n"));
    meta.push_str(&format!("seed={}\n", prob.meta.seed));
    meta.push_str(&format!("m={}\n", prob.a.rows()));
    meta.push_str(&format!("n={}\n", prob.a.cols()));

    match (&prob.f, &prob.g) {
        (SeparableFunction::Quadratic { b }, SeparableFunction::L1 { lambda }) => {
            mmio::write_vector(&dir.join("b.txt"), b)?;
            meta.push_str(&format!("lambda={lambda:.16e}\n"));
        }
        (SeparableFunction::IndicatorLeq { b }, SeparableFunction::Linear { c }) => {
            mmio::write_vector(&dir.join("b.txt"), b)?;
            mmio::write_vector(&dir.join("c.txt"), c)?;
        }
        _ => bail!("unsupported problem shape for serialization"),
    }
    mmio::write_atomic(&dir.join("meta.txt"), meta.as_bytes())?;
    Ok(())
}

pub fn read_problem(dir: &Path) -> Result<GraphFormProblem> {
    let meta_text = fs::read_to_string(dir.join("meta.txt"))
        .with_context(|| format!("cannot read {}", dir.join("meta.txt").display()))?;
    let mut kv = BTreeMap::new();
    for line in meta_text.lines() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (k, v) = t.split_once('=').with_context(|| format!("bad meta line `{t}`"))?;
        kv.insert(k.trim().to_string(), v.trim().to_string());
    }
    let kind = kv.get("kind").context("meta.txt missing kind")?.as_str();
    let seed: u64 = kv.get("seed").map(|s| s.parse()).transpose()?.unwrap_or(0);

    let a = mmio::read_matrix(&dir.join("A.mtx"))?;
    let b = mmio::read_vector(&dir.join("b.txt"))?;
    if b.len() != a.rows() {
        bail!("b.txt length {} does not match matrix rows {}", b.len(), a.rows());
    }

    let (f, g, kind) = match kind {
        "lasso" => {
            let lambda: f64 = kv
                .get("lambda")
                .context("lasso meta.txt missing lambda")?
                .parse()
                .context("bad lambda")?;
            (
                SeparableFunction::Quadratic { b },
                SeparableFunction::L1 { lambda },
                ProblemKind::Lasso,
            )
        }
        "lp" => {
            let c = mmio::read_vector(&dir.join("c.txt"))?;
            if c.len() != a.cols() {
                bail!("c.txt length {} does not match matrix columns {}", c.len(), a.cols());
            }
            (
                SeparableFunction::IndicatorLeq { b },
                SeparableFunction::Linear { c },
                ProblemKind::Lp,
            )
        }
        other => bail!("unknown problem kind `{other}`"),
    };

    let mut prob = GraphFormProblem::new(a, f, g).map_err(|e| anyhow::anyhow!("{e}"))?;
    prob.meta = ProblemMeta {
        kind,
        seed,
        ground_truth: None,
        dual_certificate: None,
    };
    Ok(prob)
}

//! MatrixMarket reader/writer for dense exchange, plus plain-text
//! vector files (one value per line).
//!
//! Reading accepts `array` and `coordinate` formats with `real` or
//! `integer` fields and `general` or `symmetric` symmetry; writing
//! emits the dense `array real general` form. Array data is stored
//! column-major per the format definition.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use eqadmm_core::matrix::DenseMatrix;

pub fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read matrix file {}", path.display()))?;
    parse_matrix(&text).with_context(|| format!("cannot parse {}", path.display()))
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines();
    let header = lines.next().context("empty file")?;
    let mut fields = header.split_whitespace();
    let banner = fields.next().unwrap_or_default();
    if !banner.eq_ignore_ascii_case("%%MatrixMarket") {
        bail!("missing %%MatrixMarket banner");
    }
    if fields.next().map(|s| s.to_ascii_lowercase()) != Some("matrix".into()) {
        bail!("only `matrix` objects are supported");
    }
    let format = fields.next().map(|s| s.to_ascii_lowercase()).context("missing format")?;
    let field = fields.next().map(|s| s.to_ascii_lowercase()).context("missing field")?;
    let symmetry = fields
        .next()
        .map(|s| s.to_ascii_lowercase())
        .unwrap_or_else(|| "general".into());

    if field != "real" && field != "integer" {
        bail!("unsupported field `{field}` (real or integer only)");
    }
    if symmetry != "general" && symmetry != "symmetric" {
        bail!("unsupported symmetry `{symmetry}` (general or symmetric only)");
    }

    let mut data_lines = lines.filter(|l| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let size_line = data_lines.next().context("missing size line")?;
    let dims: Vec<usize> = size_line
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .context("bad size line")?;

    match format.as_str() {
        "array" => {
            if dims.len() != 2 {
                bail!("array size line must be `rows cols`");
            }
            let (m, n) = (dims[0], dims[1]);
            let mut values = Vec::with_capacity(m * n);
            for line in data_lines {
                for tok in line.split_whitespace() {
                    values.push(tok.parse::<f64>().with_context(|| format!("bad value `{tok}`"))?);
                }
            }
            let expected = if symmetry == "symmetric" {
                n * (n + 1) / 2
            } else {
                m * n
            };
            if values.len() != expected {
                bail!("expected {expected} array values, found {}", values.len());
            }
            let mut mat = DenseMatrix::zeros(m, n);
            if symmetry == "symmetric" {
                if m != n {
                    bail!("symmetric array matrix must be square");
                }
                // lower triangle, column-major
                let mut it = values.into_iter();
                for j in 0..n {
                    for i in j..m {
                        let v = it.next().unwrap();
                        mat.set(i, j, v);
                        mat.set(j, i, v);
                    }
                }
            } else {
                // column-major dense
                for j in 0..n {
                    for i in 0..m {
                        mat.set(i, j, values[j * m + i]);
                    }
                }
            }
            validate(mat)
        }
        "coordinate" => {
            if dims.len() != 3 {
                bail!("coordinate size line must be `rows cols nnz`");
            }
            let (m, n, nnz) = (dims[0], dims[1], dims[2]);
            let mut mat = DenseMatrix::zeros(m, n);
            let mut count = 0usize;
            for line in data_lines {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 3 {
                    bail!("coordinate entry must be `i j value`, got `{line}`");
                }
                let i: usize = toks[0].parse().context("bad row index")?;
                let j: usize = toks[1].parse().context("bad column index")?;
                let v: f64 = toks[2].parse().with_context(|| format!("bad value `{}`", toks[2]))?;
                if i < 1 || i > m || j < 1 || j > n {
                    bail!("index ({i}, {j}) outside {m}x{n}");
                }
                mat.set(i - 1, j - 1, v);
                if symmetry == "symmetric" && i != j {
                    mat.set(j - 1, i - 1, v);
                }
                count += 1;
            }
            if count != nnz {
                bail!("expected {nnz} entries, found {count}");
            }
            validate(mat)
        }
        other => bail!("unsupported format `{other}` (array or coordinate only)"),
    }
}

fn validate(mat: DenseMatrix) -> Result<DenseMatrix> {
    if mat.data().iter().any(|v| !v.is_finite()) {
        bail!("matrix entries must be finite");
    }
    Ok(mat)
}

pub fn write_matrix(path: &Path, mat: &DenseMatrix) -> Result<()> {
    let mut out = String::new();
    out.push_str("%%MatrixMarket matrix array real general\n");
    out.push_str(&format!("{} {}\n", mat.rows(), mat.cols()));
    for j in 0..mat.cols() {
        for i in 0..mat.rows() {
            out.push_str(&format!("{:.16e}\n", mat.get(i, j)));
        }
    }
    write_atomic(path, out.as_bytes())
}

pub fn read_vector(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read vector file {}", path.display()))?;
    let mut values = Vec::new();
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') || t.starts_with('#') {
            continue;
        }
        values.push(t.parse::<f64>().with_context(|| format!("bad value `{t}`"))?);
    }
    Ok(values)
}

pub fn write_vector(path: &Path, v: &[f64]) -> Result<()> {
    let mut out = String::with_capacity(v.len() * 24);
    for x in v {
        out.push_str(&format!("{x:.16e}\n"));
    }
    write_atomic(path, out.as_bytes())
}

/// Write through a sibling temp file so failed commands leave no
/// partial outputs behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp-write");
    {
        let mut f = fs::File::create(&tmp)
            .with_context(|| format!("cannot create {}", tmp.display()))?;
        f.write_all(bytes)?;
    }
    fs::rename(&tmp, path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

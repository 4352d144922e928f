//! JSON file formats for sets and networks.
//!
//! A set file is an object with `type` (`"hz"`, `"cz"` or `"zono"`),
//! `form` (`"pm1"` or `"01"`) and the row-major matrices `Gc`, `Gb`, `c`,
//! `Ac`, `Ab`, `b`. Absent keys mean empty matrices. The optional
//! `complexity` array `[n_g, n_b, n_c]` pins column counts when a matrix has
//! no rows.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{to_rows, Mat, Vector};
use crate::relu::{NetworkFile, ReluNetwork};
use crate::set::{ConstrainedZonotope, FactorForm, HybridZonotope};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SetKind {
    #[serde(rename = "hz")]
    Hybrid,
    #[serde(rename = "cz")]
    Constrained,
    #[serde(rename = "zono")]
    Zonotope,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetFile {
    #[serde(rename = "type")]
    pub kind: SetKind,
    pub form: FactorForm,
    #[serde(rename = "Gc", default, skip_serializing_if = "Option::is_none")]
    pub gc: Option<Vec<Vec<f64>>>,
    #[serde(rename = "Gb", default, skip_serializing_if = "Option::is_none")]
    pub gb: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<f64>>,
    #[serde(rename = "Ac", default, skip_serializing_if = "Option::is_none")]
    pub ac: Option<Vec<Vec<f64>>>,
    #[serde(rename = "Ab", default, skip_serializing_if = "Option::is_none")]
    pub ab: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complexity: Option<[usize; 3]>,
}

/// Dense matrix from nested rows. `expect_rows` checks the row count and
/// supplies it when `rows` is empty.
pub fn matrix_from_rows(rows: &[Vec<f64>], expect_rows: Option<usize>, name: &str) -> Result<Mat> {
    matrix_with_shape(rows, expect_rows, None, name)
}

fn matrix_with_shape(
    rows: &[Vec<f64>],
    expect_rows: Option<usize>,
    expect_cols: Option<usize>,
    name: &str,
) -> Result<Mat> {
    if let Some(r) = expect_rows {
        if !rows.is_empty() && rows.len() != r {
            return Err(Error::InvalidInput(format!(
                "{name}: expected {r} rows, found {}",
                rows.len()
            )));
        }
    }
    let cols = rows.first().map(Vec::len).or(expect_cols).unwrap_or(0);
    if let Some(c) = expect_cols {
        if !rows.is_empty() && cols != c {
            return Err(Error::InvalidInput(format!(
                "{name}: expected {c} columns, found {cols}"
            )));
        }
    }
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidInput(format!("{name}: ragged rows")));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("{name}: non-finite entry")));
    }
    let n_rows = if rows.is_empty() {
        expect_rows.unwrap_or(0)
    } else {
        rows.len()
    };
    Ok(Mat::from_fn(n_rows, cols, |i, j| {
        if rows.is_empty() {
            0.0
        } else {
            rows[i][j]
        }
    }))
}

fn first_cols(m: &Option<Vec<Vec<f64>>>) -> Option<usize> {
    m.as_ref().and_then(|rows| rows.first()).map(Vec::len)
}

fn nonempty_rows(m: &Option<Vec<Vec<f64>>>) -> Option<usize> {
    m.as_ref().map(Vec::len).filter(|&r| r > 0)
}

impl SetFile {
    pub fn to_hybrid(&self) -> Result<HybridZonotope> {
        let hint = self.complexity;
        let n = self
            .c
            .as_ref()
            .map(Vec::len)
            .or_else(|| nonempty_rows(&self.gc))
            .or_else(|| nonempty_rows(&self.gb))
            .unwrap_or(0);
        let n_g = hint
            .map(|t| t[0])
            .or_else(|| first_cols(&self.gc))
            .or_else(|| first_cols(&self.ac))
            .unwrap_or(0);
        let n_b = hint
            .map(|t| t[1])
            .or_else(|| first_cols(&self.gb))
            .or_else(|| first_cols(&self.ab))
            .unwrap_or(0);
        let n_c = hint
            .map(|t| t[2])
            .or_else(|| self.b.as_ref().map(Vec::len))
            .or_else(|| nonempty_rows(&self.ac))
            .or_else(|| nonempty_rows(&self.ab))
            .unwrap_or(0);
        let empty = Vec::new();
        let gc = matrix_with_shape(self.gc.as_ref().unwrap_or(&empty), Some(n), Some(n_g), "Gc")?;
        let gb = matrix_with_shape(self.gb.as_ref().unwrap_or(&empty), Some(n), Some(n_b), "Gb")?;
        let ac = matrix_with_shape(self.ac.as_ref().unwrap_or(&empty), Some(n_c), Some(n_g), "Ac")?;
        let ab = matrix_with_shape(self.ab.as_ref().unwrap_or(&empty), Some(n_c), Some(n_b), "Ab")?;
        let c = vector_of(self.c.as_ref(), n, "c")?;
        let b = vector_of(self.b.as_ref(), n_c, "b")?;
        match self.kind {
            SetKind::Zonotope if n_b > 0 || n_c > 0 => {
                return Err(Error::InvalidInput(
                    "zonotope file must not contain constraints or binary generators".into(),
                ))
            }
            SetKind::Constrained if n_b > 0 => {
                return Err(Error::InvalidInput(
                    "constrained zonotope file must not contain binary generators".into(),
                ))
            }
            _ => {}
        }
        HybridZonotope::new(gc, gb, c, ac, ab, b, self.form)
    }

    pub fn from_hybrid(h: &HybridZonotope) -> Self {
        let kind = if h.n_b() > 0 {
            SetKind::Hybrid
        } else if h.n_c() > 0 {
            SetKind::Constrained
        } else {
            SetKind::Zonotope
        };
        Self::with_kind(h, kind)
    }

    pub fn with_kind(h: &HybridZonotope, kind: SetKind) -> Self {
        let t = h.complexity();
        SetFile {
            kind,
            form: h.form(),
            gc: Some(to_rows(h.gc())),
            gb: Some(to_rows(h.gb())),
            c: Some(h.c().iter().copied().collect()),
            ac: Some(to_rows(h.ac())),
            ab: Some(to_rows(h.ab())),
            b: Some(h.b().iter().copied().collect()),
            complexity: Some([t.n_g, t.n_b, t.n_c]),
        }
    }
}

fn vector_of(v: Option<&Vec<f64>>, len: usize, name: &str) -> Result<Vector> {
    match v {
        None => Ok(Vector::zeros(len)),
        Some(v) if v.len() != len => Err(Error::InvalidInput(format!(
            "{name}: expected length {len}, found {}",
            v.len()
        ))),
        Some(v) if v.iter().any(|x| !x.is_finite()) => {
            Err(Error::InvalidInput(format!("{name}: non-finite entry")))
        }
        Some(v) => Ok(Vector::from_column_slice(v)),
    }
}

pub fn hybrid_from_json(text: &str) -> Result<HybridZonotope> {
    let file: SetFile = serde_json::from_str(text)?;
    file.to_hybrid()
}

pub fn hybrid_to_json(h: &HybridZonotope) -> String {
    serde_json::to_string_pretty(&SetFile::from_hybrid(h)).expect("finite set serializes")
}

pub fn constrained_to_json(cz: &ConstrainedZonotope) -> String {
    let file = SetFile::with_kind(&cz.to_hybrid(), SetKind::Constrained);
    serde_json::to_string_pretty(&file).expect("finite set serializes")
}

pub fn read_hybrid(path: &Path) -> Result<HybridZonotope> {
    hybrid_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_hybrid(path: &Path, h: &HybridZonotope) -> Result<()> {
    std::fs::write(path, hybrid_to_json(h))?;
    Ok(())
}

pub fn network_from_json(text: &str) -> Result<ReluNetwork> {
    let file: NetworkFile = serde_json::from_str(text)?;
    ReluNetwork::try_from(&file)
}

pub fn network_to_json(net: &ReluNetwork) -> String {
    serde_json::to_string_pretty(&NetworkFile::from(net)).expect("finite network serializes")
}

pub fn read_network(path: &Path) -> Result<ReluNetwork> {
    network_from_json(&std::fs::read_to_string(path)?)
}

//! The bracket file format: a UTF-8 JSON document with 1-based sparse
//! structure constants and an optional structure tensor block.
//!
//! ```json
//! { "dim": 4,
//!   "terms": [ {"i":1,"j":2,"k":3,"c":1.0} ],
//!   "structure": { "kind": "symplectic", "J": [[...], ...] } }
//! ```
//!
//! Unlisted constants are zero; a duplicate (i, j, k) is a load error.

use nalgebra::DMatrix;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::algebra::{Bracket, BracketTerm};
use crate::structures::StructureTensor;
use crate::{Error, Result};

#[derive(Deserialize)]
struct BracketFile {
    dim: usize,
    #[serde(default)]
    terms: Vec<TermRecord>,
    #[serde(default)]
    structure: Option<StructureRecord>,
}

#[derive(Deserialize)]
struct TermRecord {
    i: usize,
    j: usize,
    k: usize,
    c: f64,
}

#[derive(Deserialize)]
struct StructureRecord {
    kind: String,
    #[serde(default, rename = "J")]
    j: Option<Vec<Vec<f64>>>,
    #[serde(default, rename = "J2")]
    j2: Option<Vec<Vec<f64>>>,
    #[serde(default, rename = "J3")]
    j3: Option<Vec<Vec<f64>>>,
}

fn parse_matrix(rows: &[Vec<f64>], n: usize, name: &str) -> Result<DMatrix<f64>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("{name} must be a {n}x{n} row-major matrix")));
    }
    Ok(DMatrix::from_fn(n, n, |r, c| rows[r][c]))
}

/// Parses a bracket document. Returns the bracket and the structure tensor
/// (`StructureTensor::None` when the block is absent).
pub fn parse_bracket(text: &str) -> Result<(Bracket, StructureTensor)> {
    let file: BracketFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.dim == 0 {
        return Err(Error::Parse("dim must be positive".into()));
    }
    let mut terms = Vec::with_capacity(file.terms.len());
    for t in &file.terms {
        if t.i == 0 || t.j == 0 || t.k == 0 {
            return Err(Error::Parse("term indices are 1-based".into()));
        }
        if t.i > file.dim || t.j > file.dim || t.k > file.dim {
            return Err(Error::Parse(format!(
                "term ({}, {}, {}) exceeds dim {}",
                t.i, t.j, t.k, file.dim
            )));
        }
        if t.i >= t.j {
            return Err(Error::Parse(format!(
                "term ({}, {}, {}) must have i < j",
                t.i, t.j, t.k
            )));
        }
        terms.push(BracketTerm { i: t.i - 1, j: t.j - 1, k: t.k - 1, c: t.c });
    }
    let bracket = Bracket::new(file.dim, terms).map_err(|e| Error::Parse(e.to_string()))?;
    let structure = match &file.structure {
        None => StructureTensor::None,
        Some(s) => match s.kind.as_str() {
            "none" => StructureTensor::None,
            "symplectic" => {
                let j = s.j.as_ref().ok_or_else(|| Error::Parse("missing J".into()))?;
                StructureTensor::Symplectic(parse_matrix(j, file.dim, "J")?)
            }
            "complex" => {
                let j = s.j.as_ref().ok_or_else(|| Error::Parse("missing J".into()))?;
                StructureTensor::Complex(parse_matrix(j, file.dim, "J")?)
            }
            "hypercomplex" => {
                let j1 = s.j.as_ref().ok_or_else(|| Error::Parse("missing J".into()))?;
                let j2 = s.j2.as_ref().ok_or_else(|| Error::Parse("missing J2".into()))?;
                let j3 = s.j3.as_ref().ok_or_else(|| Error::Parse("missing J3".into()))?;
                StructureTensor::Hypercomplex([
                    parse_matrix(j1, file.dim, "J")?,
                    parse_matrix(j2, file.dim, "J2")?,
                    parse_matrix(j3, file.dim, "J3")?,
                ])
            }
            other => return Err(Error::Parse(format!("unknown structure kind '{other}'"))),
        },
    };
    Ok((bracket, structure))
}

pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
        .collect()
}

/// Serializable document for a bracket with its structure, 1-based indices.
pub fn bracket_value(b: &Bracket, gamma: &StructureTensor) -> Value {
    let terms: Vec<Value> = b
        .terms()
        .iter()
        .map(|t| json!({"i": t.i + 1, "j": t.j + 1, "k": t.k + 1, "c": t.c}))
        .collect();
    let mut doc = json!({"dim": b.dim(), "terms": terms});
    let structure = match gamma {
        StructureTensor::None => None,
        StructureTensor::Symplectic(j) => {
            Some(json!({"kind": "symplectic", "J": matrix_rows(j)}))
        }
        StructureTensor::Complex(j) => Some(json!({"kind": "complex", "J": matrix_rows(j)})),
        StructureTensor::Hypercomplex([j1, j2, j3]) => Some(json!({
            "kind": "hypercomplex",
            "J": matrix_rows(j1),
            "J2": matrix_rows(j2),
            "J3": matrix_rows(j3),
        })),
    };
    if let Some(s) = structure {
        doc.as_object_mut().expect("doc is an object").insert("structure".into(), s);
    }
    doc
}

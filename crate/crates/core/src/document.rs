//! JSON exchange format for convex sets.
//!
//! ```json
//! {"type": "polytope", "ambient_dim": 2, "points": [[0, 0], [1, 0]]}
//! {"type": "flat", "ambient_dim": 2, "base": [0, 1], "basis": [[1, 0]]}
//! {"type": "subspace", "ambient_dim": 2, "basis": [[2, 0]]}
//! ```
//!
//! Basis rows that are not orthonormal within `tol.orth` are replaced by
//! their Gram-Schmidt orthonormalization (same span, same orientation of
//! the leading rows) and a warning is logged.

use log::warn;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::convex::{ConvexSet, Flat, Polytope, Subspace, Vector};
use crate::error::{HyperError, Result};
use crate::linalg;
use crate::tolerance::ToleranceConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SetDocument {
    Polytope {
        ambient_dim: usize,
        points: Vec<Vec<f64>>,
    },
    Flat {
        ambient_dim: usize,
        base: Vec<f64>,
        #[serde(default)]
        basis: Vec<Vec<f64>>,
    },
    Subspace {
        ambient_dim: usize,
        #[serde(default)]
        basis: Vec<Vec<f64>>,
    },
}

fn schema(msg: impl Into<String>) -> HyperError {
    HyperError::Schema(msg.into())
}

fn row(field: &str, i: Option<usize>, xs: &[f64], n: usize) -> Result<Vector> {
    let name = match i {
        Some(i) => format!("{field}[{i}]"),
        None => field.to_string(),
    };
    if xs.len() != n {
        return Err(schema(format!("{name}: expected {n} coordinates, got {}", xs.len())));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(schema(format!("{name}: non-finite coordinate")));
    }
    Ok(DVector::from_column_slice(xs))
}

fn basis_from_rows(rows: &[Vec<f64>], n: usize, tol: &ToleranceConfig) -> Result<Subspace> {
    if rows.is_empty() {
        return Ok(Subspace::zero(n));
    }
    let vs = rows
        .iter()
        .enumerate()
        .map(|(i, r)| row("basis", Some(i), r, n))
        .collect::<Result<Vec<_>>>()?;
    if vs.len() > n {
        return Err(schema(format!("basis: {} rows exceed ambient_dim {n}", vs.len())));
    }
    let m = linalg::from_columns(n, &vs);
    let residual = linalg::orthonormality_residual(&m);
    if residual <= tol.orth {
        return Subspace::new(m, tol);
    }
    let qr = m.clone().qr();
    let r = qr.r();
    let scale = r.diagonal().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if r.diagonal()
        .iter()
        .any(|d| d.abs() <= tol.rank * scale.max(f64::MIN_POSITIVE))
    {
        return Err(schema("basis: rows are linearly dependent"));
    }
    let mut q: DMatrix<f64> = qr.q();
    for (j, d) in r.diagonal().iter().enumerate() {
        if *d < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    warn!("basis rows not orthonormal (residual {residual:e}); orthonormalized on load");
    Subspace::new(q, tol)
}

impl SetDocument {
    pub fn to_set(&self, tol: &ToleranceConfig) -> Result<ConvexSet> {
        match self {
            SetDocument::Polytope { ambient_dim, points } => {
                if points.is_empty() {
                    return Err(schema("points: empty point list"));
                }
                let pts = points
                    .iter()
                    .enumerate()
                    .map(|(i, p)| row("points", Some(i), p, *ambient_dim))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Polytope::new(pts)?.into())
            }
            SetDocument::Flat {
                ambient_dim,
                base,
                basis,
            } => {
                let base = row("base", None, base, *ambient_dim)?;
                let dir = basis_from_rows(basis, *ambient_dim, tol)?;
                Ok(Flat::new(base, dir)?.into())
            }
            SetDocument::Subspace { ambient_dim, basis } => Ok(basis_from_rows(basis, *ambient_dim, tol)?.into()),
        }
    }

    pub fn from_set(set: &ConvexSet) -> Self {
        let rows =
            |s: &Subspace| -> Vec<Vec<f64>> { s.basis_vectors().iter().map(|v| v.as_slice().to_vec()).collect() };
        match set {
            ConvexSet::Polytope(p) => SetDocument::Polytope {
                ambient_dim: p.ambient_dim(),
                points: p.points().iter().map(|v| v.as_slice().to_vec()).collect(),
            },
            ConvexSet::Flat(f) => SetDocument::Flat {
                ambient_dim: f.ambient_dim(),
                base: f.base().as_slice().to_vec(),
                basis: rows(f.direction()),
            },
            ConvexSet::Subspace(s) => SetDocument::Subspace {
                ambient_dim: s.ambient_dim(),
                basis: rows(s),
            },
        }
    }
}

impl From<&ConvexSet> for SetDocument {
    fn from(s: &ConvexSet) -> Self {
        SetDocument::from_set(s)
    }
}

pub fn parse_document(text: &str) -> Result<SetDocument> {
    serde_json::from_str(text).map_err(|e| schema(e.to_string()))
}

pub fn parse_set(text: &str, tol: &ToleranceConfig) -> Result<ConvexSet> {
    parse_document(text)?.to_set(tol)
}

pub fn serialize(set: &ConvexSet) -> String {
    serde_json::to_string(&SetDocument::from_set(set)).expect("documents always serialize")
}

/// Semantic equality of two sets: same kind, same dimension, and the
/// sets agree within `within` (Hausdorff for polytopes, gap plus base
/// offset for flats).
pub fn same_set(a: &ConvexSet, b: &ConvexSet, within: f64, tol: &ToleranceConfig) -> Result<bool> {
    if a.ambient_dim() != b.ambient_dim() {
        return Ok(false);
    }
    Ok(match (a, b) {
        (ConvexSet::Polytope(p), ConvexSet::Polytope(q)) => crate::hypermetrics::hausdorff(p, q, tol)? <= within,
        (ConvexSet::Polytope(_), _) | (_, ConvexSet::Polytope(_)) => false,
        _ => {
            let f = a.as_flat().expect("flat-like");
            let g = b.as_flat().expect("flat-like");
            crate::grassmann::same_subspace(f.direction(), g.direction(), within)?
                && (f.nearest_to_origin() - g.nearest_to_origin()).norm() <= within
        }
    })
}

//! Body description files: a small JSON schema for polytopes, balls, and
//! ellipsoids, with strict validation on load.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bodies::{ConvexBody, Ellipsoid, Polytope};
use crate::error::{GeomError, Result};

/// On-disk body description.
///
/// ```json
/// {"type": "polytope", "vertices": [[-1,-1],[1,-1],[1,1],[-1,1]]}
/// {"type": "ball", "center": [0,0], "radius": 0.5}
/// {"type": "ellipsoid", "center": [0,0], "shape": [[4,0],[0,1]]}
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    Polytope { vertices: Vec<Vec<f64>> },
    Ball { center: Vec<f64>, radius: f64 },
    Ellipsoid { center: Vec<f64>, shape: Vec<Vec<f64>> },
}

impl BodySpec {
    /// Validates and builds the body. Degenerate (non-full-dimensional)
    /// input, non-positive radii, and non-positive-definite shapes are
    /// rejected.
    pub fn build(&self) -> Result<ConvexBody> {
        match self {
            BodySpec::Polytope { vertices } => {
                if vertices.is_empty() {
                    return Err(GeomError::Invariant("polytope needs vertices".into()));
                }
                let d = vertices[0].len();
                if d == 0 {
                    return Err(GeomError::Invariant("empty vertex coordinates".into()));
                }
                let mut pts = Vec::with_capacity(vertices.len());
                for v in vertices {
                    if v.len() != d {
                        return Err(GeomError::Invariant(
                            "inconsistent vertex dimensions".into(),
                        ));
                    }
                    if v.iter().any(|x| !x.is_finite()) {
                        return Err(GeomError::Invariant("non-finite vertex coordinate".into()));
                    }
                    pts.push(DVector::from_vec(v.clone()));
                }
                Ok(ConvexBody::Polytope(Polytope::from_points(&pts)?))
            }
            BodySpec::Ball { center, radius } => {
                if center.is_empty() || center.iter().any(|x| !x.is_finite()) {
                    return Err(GeomError::Invariant("invalid ball center".into()));
                }
                if !radius.is_finite() {
                    return Err(GeomError::Invariant("non-finite radius".into()));
                }
                ConvexBody::ball(DVector::from_vec(center.clone()), *radius)
            }
            BodySpec::Ellipsoid { center, shape } => {
                let d = center.len();
                if d == 0 || center.iter().any(|x| !x.is_finite()) {
                    return Err(GeomError::Invariant("invalid ellipsoid center".into()));
                }
                if shape.len() != d || shape.iter().any(|row| row.len() != d) {
                    return Err(GeomError::Invariant(
                        "shape form must be a d x d matrix".into(),
                    ));
                }
                if shape.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(GeomError::Invariant("non-finite shape entry".into()));
                }
                let form = DMatrix::from_fn(d, d, |i, j| shape[i][j]);
                Ok(ConvexBody::Ellipsoid(Ellipsoid::new(
                    DVector::from_vec(center.clone()),
                    form,
                )?))
            }
        }
    }
}

/// Parses a body description from JSON text.
pub fn parse_body(json: &str) -> Result<ConvexBody> {
    let spec: BodySpec =
        serde_json::from_str(json).map_err(|e| GeomError::Parse(e.to_string()))?;
    spec.build()
}

/// Parses a body description from raw bytes (the fuzzing entry point).
pub fn parse_body_bytes(bytes: &[u8]) -> Result<ConvexBody> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| GeomError::Parse(format!("invalid UTF-8: {e}")))?;
    parse_body(text)
}

/// Loads a body description from a file.
pub fn load_body(path: &Path) -> Result<ConvexBody> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| GeomError::Parse(format!("{}: {e}", path.display())))?;
    parse_body(&text)
}

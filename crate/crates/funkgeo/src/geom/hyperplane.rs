//! Hyperplanes, dual hyperplanes, and gnomonic projection.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};

/// Default guard for gnomonic projections near the equator.
pub const EQUATOR_GUARD: f64 = 1e-9;

/// An affine hyperplane `{ y : <y, normal> = offset }` with unit normal.
#[derive(Debug, Clone)]
pub struct Hyperplane {
    normal: DVector<f64>,
    offset: f64,
}

impl Hyperplane {
    /// Builds a hyperplane from a (not necessarily unit) normal and offset;
    /// both are rescaled so the stored normal is unit.
    pub fn new(normal: DVector<f64>, offset: f64) -> Result<Self> {
        let n = normal.norm();
        if n <= 0.0 || !n.is_finite() {
            return Err(GeomError::Invariant(
                "hyperplane normal must be nonzero and finite".into(),
            ));
        }
        Ok(Hyperplane {
            normal: normal / n,
            offset: offset / n,
        })
    }

    pub fn dimension(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &DVector<f64> {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Signed distance of `p` from the plane (positive on the normal side).
    pub fn signed_distance(&self, p: &DVector<f64>) -> f64 {
        self.normal.dot(p) - self.offset
    }

    /// Whether `p` lies on the plane within `1e-9 * max(1, |offset|)`.
    pub fn contains(&self, p: &DVector<f64>) -> bool {
        self.signed_distance(p).abs() <= 1e-9 * self.offset.abs().max(1.0)
    }

    /// A deterministic orthonormal basis of the plane's direction space,
    /// returned as the columns of a `d x (d-1)` matrix. Built from the
    /// Householder reflection that maps the normal onto a coordinate axis.
    pub fn basis(&self) -> DMatrix<f64> {
        orthonormal_complement(&self.normal)
    }

    /// A point on the plane (the foot of the perpendicular from the origin).
    pub fn base_point(&self) -> DVector<f64> {
        &self.normal * self.offset
    }

    /// In-plane coordinates of `p` (which need not lie on the plane; the
    /// normal component is dropped).
    pub fn local_coords(&self, basis: &DMatrix<f64>, p: &DVector<f64>) -> DVector<f64> {
        basis.transpose() * p
    }

    /// Lifts in-plane coordinates back to ambient space.
    pub fn lift(&self, basis: &DMatrix<f64>, coords: &DVector<f64>) -> DVector<f64> {
        self.base_point() + basis * coords
    }
}

/// Orthonormal basis of `u^perp` as columns of a `d x (d-1)` matrix.
pub fn orthonormal_complement(u: &DVector<f64>) -> DMatrix<f64> {
    let d = u.len();
    let unit = u / u.norm();
    let sign = if unit[0] >= 0.0 { 1.0 } else { -1.0 };
    let mut w = unit.clone();
    w[0] += sign;
    let scale = 2.0 / w.norm_squared();
    // Columns H e_k, k = 1..d, of the Householder reflection H = I - scale w w^T.
    let mut basis = DMatrix::zeros(d, d - 1);
    for k in 1..d {
        let coef = scale * w[k];
        for i in 0..d {
            let e = if i == k { 1.0 } else { 0.0 };
            basis[(i, k - 1)] = e - coef * w[i];
        }
    }
    basis
}

/// The dual hyperplane `z* = { u : <u, z> = 1 }` of a nonzero vector.
pub fn dual_hyperplane(z: &DVector<f64>) -> Result<Hyperplane> {
    let n = z.norm();
    if n <= 0.0 || !n.is_finite() {
        return Err(GeomError::Invariant("dual of the zero vector".into()));
    }
    Ok(Hyperplane {
        normal: z / n,
        offset: 1.0 / n,
    })
}

/// Central (gnomonic) projection of a unit vector `x` onto the dual plane
/// `u*`: the point `x / <x, u>`, defined on the open hemisphere around `u`.
pub fn gnomonic_project(
    u: &DVector<f64>,
    x: &DVector<f64>,
    guard: f64,
) -> Result<DVector<f64>> {
    let dot = u.dot(x);
    if dot <= guard {
        return Err(GeomError::Numerical(format!(
            "gnomonic projection near the equator: <x,u> = {dot:.3e} <= {guard:.3e}"
        )));
    }
    Ok(x / dot)
}

//! Convex-body representations and their support/polar/cone calculus.

pub mod cone;
pub mod ellipsoid;
pub mod oracle;
pub mod polytope;
pub mod random;

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

pub use cone::{
    spherical_section_membership, tangent_cone, vertex_normal_cone, PointedCone,
};
pub use ellipsoid::Ellipsoid;
pub use oracle::SupportOracle;
pub use polytope::{Halfspace, Polytope};

use crate::error::{GeomError, Result};
use crate::geom::region::EmbeddedRegion;

/// A convex body: polytope, ellipsoid, or support oracle.
#[derive(Debug, Clone)]
pub enum ConvexBody {
    Polytope(Polytope),
    Ellipsoid(Ellipsoid),
    Oracle(SupportOracle),
}

impl ConvexBody {
    /// Euclidean ball of radius `r` about `center`.
    pub fn ball(center: DVector<f64>, r: f64) -> Result<ConvexBody> {
        Ok(ConvexBody::Ellipsoid(Ellipsoid::ball(center, r)?))
    }

    pub fn dimension(&self) -> usize {
        match self {
            ConvexBody::Polytope(p) => p.dimension(),
            ConvexBody::Ellipsoid(e) => e.dimension(),
            ConvexBody::Oracle(o) => o.dimension(),
        }
    }

    /// Support function `h(u) = sup_{x in K} <u, x>`.
    pub fn support_function(&self, u: &DVector<f64>) -> f64 {
        match self {
            ConvexBody::Polytope(p) => p.support_function(u),
            ConvexBody::Ellipsoid(e) => e.support_function(u),
            ConvexBody::Oracle(o) => o.support_function(u),
        }
    }

    /// A boundary point attaining the support function; the polytope case
    /// breaks ties lexicographically.
    pub fn support_point(&self, u: &DVector<f64>) -> DVector<f64> {
        match self {
            ConvexBody::Polytope(p) => p.support_point(u),
            ConvexBody::Ellipsoid(e) => e.support_point(u),
            ConvexBody::Oracle(o) => o.support_point(u),
        }
    }

    /// Stored interior witness.
    pub fn interior_point(&self) -> DVector<f64> {
        match self {
            ConvexBody::Polytope(p) => p.interior_point().clone(),
            ConvexBody::Ellipsoid(e) => e.center().clone(),
            ConvexBody::Oracle(o) => o.interior_point().clone(),
        }
    }

    /// Exit point and parameter of the ray `x + t v` through the boundary.
    pub fn ray_exit(&self, x: &DVector<f64>, v: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
        match self {
            ConvexBody::Polytope(p) => p.ray_exit(x, v),
            ConvexBody::Ellipsoid(e) => e.ray_exit(x, v),
            ConvexBody::Oracle(_) => Err(GeomError::Unsupported(
                "ray exit is not available through a support oracle".into(),
            )),
        }
    }

    /// Gauge relative to a base point `c` interior to the body.
    pub fn gauge_from(&self, c: &DVector<f64>, x: &DVector<f64>) -> Result<f64> {
        match self {
            ConvexBody::Polytope(p) => p.gauge_from(c, x),
            ConvexBody::Ellipsoid(e) => e.gauge_from(c, x),
            ConvexBody::Oracle(_) => Err(GeomError::Unsupported(
                "gauge is not available through a support oracle".into(),
            )),
        }
    }

    /// `1 - gauge(x)` measured from the interior witness.
    pub fn interior_margin(&self, x: &DVector<f64>) -> Result<f64> {
        let c = self.interior_point();
        Ok(1.0 - self.gauge_from(&c, x)?)
    }

    pub fn contains(&self, x: &DVector<f64>) -> Result<bool> {
        match self {
            ConvexBody::Polytope(p) => Ok(p.contains(x)),
            ConvexBody::Ellipsoid(e) => Ok(e.contains(x)),
            ConvexBody::Oracle(_) => Err(GeomError::Unsupported(
                "membership is not decidable through a support oracle".into(),
            )),
        }
    }

    pub fn translate(&self, t: &DVector<f64>) -> ConvexBody {
        match self {
            ConvexBody::Polytope(p) => ConvexBody::Polytope(p.translate(t)),
            ConvexBody::Ellipsoid(e) => ConvexBody::Ellipsoid(e.translate(t)),
            ConvexBody::Oracle(o) => ConvexBody::Oracle(o.translate(t)),
        }
    }

    pub fn scale_about_origin(&self, a: f64) -> ConvexBody {
        match self {
            ConvexBody::Polytope(p) => ConvexBody::Polytope(p.scale_about_origin(a)),
            ConvexBody::Ellipsoid(e) => ConvexBody::Ellipsoid(e.scale_about_origin(a)),
            ConvexBody::Oracle(o) => ConvexBody::Oracle(o.scale_about_origin(a)),
        }
    }

    pub fn as_polytope(&self) -> Option<&Polytope> {
        match self {
            ConvexBody::Polytope(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_ellipsoid(&self) -> Option<&Ellipsoid> {
        match self {
            ConvexBody::Ellipsoid(e) => Some(e),
            _ => None,
        }
    }
}

/// Support function of `K` in direction `u`.
pub fn support_function(k: &ConvexBody, u: &DVector<f64>) -> f64 {
    k.support_function(u)
}

/// Measurable support-point selection `v_K(u)`.
pub fn support_point(k: &ConvexBody, u: &DVector<f64>) -> DVector<f64> {
    k.support_point(u)
}

/// Boundary exit of the ray from an interior point.
pub fn ray_exit(
    k: &ConvexBody,
    x: &DVector<f64>,
    v: &DVector<f64>,
) -> Result<(DVector<f64>, f64)> {
    k.ray_exit(x, v)
}

/// Minkowski gauge of `x` with respect to a body with the origin interior.
pub fn gauge(g: &ConvexBody, x: &DVector<f64>) -> Result<f64> {
    let origin = DVector::zeros(g.dimension());
    g.gauge_from(&origin, x)
}

/// Polar body `K* = { y : <x, y> <= 1 for all x in K }`; the origin must be
/// interior. Polytopes and ellipsoids both have closed forms (the polar of
/// an ellipsoid with the origin inside is again an ellipsoid).
pub fn polar_body(k: &ConvexBody) -> Result<ConvexBody> {
    match k {
        ConvexBody::Polytope(p) => Ok(ConvexBody::Polytope(p.polar()?)),
        ConvexBody::Ellipsoid(e) => Ok(ConvexBody::Ellipsoid(e.polar()?)),
        ConvexBody::Oracle(_) => Err(GeomError::Unsupported(
            "polar of a support oracle is not available".into(),
        )),
    }
}

/// Difference body `K + (-K)`, centrally symmetric about the origin.
///
/// * ellipsoids: `2 E0` for the centered copy `E0`, in closed form;
/// * polygons (d = 2): exact vertex hull of pairwise differences;
/// * higher-dimensional polytopes and oracles: an exact support oracle
///   (`h(u) + h(-u)`), which is all downstream consumers need.
pub fn difference_body(k: &ConvexBody) -> ConvexBody {
    match k {
        ConvexBody::Ellipsoid(e) => {
            let centered = e.translate(&(-e.center()));
            ConvexBody::Ellipsoid(centered.scale_about_origin(2.0))
        }
        ConvexBody::Polytope(p) if p.dimension() <= 2 => {
            let vs = p.vertices();
            let mut diffs = Vec::with_capacity(vs.len() * vs.len());
            for a in vs {
                for b in vs {
                    diffs.push(a - b);
                }
            }
            ConvexBody::Polytope(Polytope::from_points(&diffs).expect("difference body hull"))
        }
        other => {
            let body = other.clone();
            let body2 = other.clone();
            let d = other.dimension();
            ConvexBody::Oracle(SupportOracle::new(
                DVector::zeros(d),
                Arc::new(move |u: &DVector<f64>| {
                    body.support_function(u) + body.support_function(&(-u))
                }),
                Arc::new(move |u: &DVector<f64>| {
                    body2.support_point(u) - body2.support_point(&(-u))
                }),
            ))
        }
    }
}

/// The facet of `K*` dual to the vertex `v` of `K`, embedded in the plane
/// `{ y : <v, y> = 1 }`.
pub fn polar_facet(k: &Polytope, v: &DVector<f64>) -> Result<EmbeddedRegion> {
    let idx = k
        .vertex_index(v)
        .ok_or_else(|| GeomError::Invariant("point is not a vertex of the polytope".into()))?;
    let polar = k.polar()?;
    Ok(polar.facet_region(idx))
}

/// Minkowski sum of two convex CCW polygons by edge merging; returns the
/// result's vertices in CCW order.
pub fn minkowski_sum_2d(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let start = |poly: &[(f64, f64)]| {
        let mut idx = 0;
        for (i, p) in poly.iter().enumerate() {
            let q = poly[idx];
            if p.1 < q.1 - 1e-15 || (p.1 <= q.1 + 1e-15 && p.0 < q.0) {
                idx = i;
            }
        }
        idx
    };
    let (na, nb) = (a.len(), b.len());
    if na == 0 {
        return b.to_vec();
    }
    if nb == 0 {
        return a.to_vec();
    }
    let (mut i, mut j) = (0usize, 0usize);
    let (i0, j0) = (start(a), start(b));
    let mut out = Vec::with_capacity(na + nb);
    let edge = |poly: &[(f64, f64)], s: usize, k: usize| {
        let p = poly[(s + k) % poly.len()];
        let q = poly[(s + k + 1) % poly.len()];
        (q.0 - p.0, q.1 - p.1)
    };
    let angle = |(x, y): (f64, f64)| {
        let t = y.atan2(x);
        if t < -1e-12 {
            t + std::f64::consts::TAU
        } else {
            t
        }
    };
    while i < na || j < nb {
        let p = a[(i0 + i % na) % na];
        let q = b[(j0 + j % nb) % nb];
        out.push((p.0 + q.0, p.1 + q.1));
        if i >= na {
            j += 1;
        } else if j >= nb {
            i += 1;
        } else {
            let ta = angle(edge(a, i0, i));
            let tb = angle(edge(b, j0, j));
            if (ta - tb).abs() < 1e-12 {
                i += 1;
                j += 1;
            } else if ta < tb {
                i += 1;
            } else {
                j += 1;
            }
        }
    }
    out
}

/// Containment margin of `G` inside `K`: the minimum over `G` of
/// `1 - gauge_{K - c}(x - c)` for the interior witness `c` of `K`.
/// Positive values certify `G` strictly inside `K`.
pub fn containment_margin(k: &ConvexBody, g: &ConvexBody) -> Result<f64> {
    let c = k.interior_point();
    match k {
        ConvexBody::Polytope(p) => {
            let mut worst: f64 = 0.0;
            for h in p.halfspaces() {
                let den = h.offset - h.normal.dot(&c);
                if den <= 0.0 {
                    return Err(GeomError::Invariant("interior witness is not interior".into()));
                }
                let num = g.support_function(&h.normal) - h.normal.dot(&c);
                worst = worst.max(num / den);
            }
            Ok(1.0 - worst)
        }
        ConvexBody::Ellipsoid(e) => {
            let max_gauge_sq = match g {
                ConvexBody::Polytope(q) => q
                    .vertices()
                    .iter()
                    .map(|v| {
                        let z = v - &c;
                        z.dot(&(e.form() * &z))
                    })
                    .fold(0.0, f64::max),
                ConvexBody::Ellipsoid(ge) => {
                    max_quadratic_over_ellipsoid(e.form(), &c, ge)?
                }
                ConvexBody::Oracle(_) => {
                    return Err(GeomError::Unsupported(
                        "containment of an oracle body in an ellipsoid is not available".into(),
                    ))
                }
            };
            Ok(1.0 - max_gauge_sq.max(0.0).sqrt())
        }
        ConvexBody::Oracle(_) => Err(GeomError::Unsupported(
            "containment margin for an oracle ambient body is not available".into(),
        )),
    }
}

/// Maximum of `(x - c)^T A (x - c)` over the ellipsoid `g`, via the secular
/// equation of the trust-region-style stationarity conditions.
fn max_quadratic_over_ellipsoid(
    a: &DMatrix<f64>,
    c: &DVector<f64>,
    g: &Ellipsoid,
) -> Result<f64> {
    // x = m + B^{-1/2} z, |z| <= 1:  f(z) = |M z + b|^2,
    // M = A^{1/2} B^{-1/2}, b = A^{1/2} (m - c).
    let eig = a.clone().symmetric_eigen();
    let d = c.len();
    let mut sqrt_a = DMatrix::zeros(d, d);
    for i in 0..d {
        sqrt_a[(i, i)] = eig.eigenvalues[i].max(0.0).sqrt();
    }
    let sqrt_a = &eig.eigenvectors * sqrt_a * eig.eigenvectors.transpose();
    let m = &sqrt_a * g.sqrt_inv_form();
    let b = &sqrt_a * (g.center() - c);

    let s = m.transpose() * &m;
    let se = s.symmetric_eigen();
    let beta = se.eigenvectors.transpose() * (m.transpose() * &b);
    let lmax = se.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    let value_at = |nu: f64| -> (f64, f64) {
        // Returns (|y|^2, f) at the stationary y(nu).
        let mut norm2 = 0.0;
        let mut f = b.dot(&b);
        for i in 0..d {
            let denom = nu - se.eigenvalues[i];
            if denom.abs() < 1e-300 {
                return (f64::INFINITY, 0.0);
            }
            let y = beta[i] / denom;
            norm2 += y * y;
            f += se.eigenvalues[i] * y * y + 2.0 * beta[i] * y;
        }
        (norm2, f)
    };
    if beta.norm() < 1e-14 {
        return Ok(lmax + b.dot(&b));
    }
    let mut lo = lmax + 1e-14 * lmax.max(1.0);
    let mut hi = lmax + beta.norm() + 1.0;
    if value_at(lo).0 < 1.0 {
        // Hard case: the optimizer has a free component along the top
        // eigenvector; fill the remaining norm there.
        let (n2, f) = value_at(lo);
        return Ok(f + lmax * (1.0 - n2));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if value_at(mid).0 > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(value_at(0.5 * (lo + hi)).1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::dvector;

    fn square() -> ConvexBody {
        ConvexBody::Polytope(
            Polytope::from_points(&[
                dvector![-1.0, -1.0],
                dvector![1.0, -1.0],
                dvector![1.0, 1.0],
                dvector![-1.0, 1.0],
            ])
            .unwrap(),
        )
    }

    #[test]
    fn polar_round_trips() {
        let sq = square();
        let p = polar_body(&sq).unwrap();
        let back = polar_body(&p).unwrap();
        let orig = sq.as_polytope().unwrap();
        for v in orig.vertices() {
            assert!(back.as_polytope().unwrap().vertex_index(v).is_some());
        }

        let ball = ConvexBody::ball(DVector::zeros(3), 1.0).unwrap();
        let pb = polar_body(&ball).unwrap();
        assert_relative_eq!(pb.support_function(&dvector![0.0, 0.0, 1.0]), 1.0, epsilon = 1e-12);

        let big = ConvexBody::ball(DVector::zeros(2), 2.0).unwrap();
        let pb = polar_body(&big).unwrap();
        assert_relative_eq!(pb.support_function(&dvector![1.0, 0.0]), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn difference_body_of_triangle_is_hexagon() {
        let t = ConvexBody::Polytope(
            Polytope::from_points(&[dvector![0.0, 0.0], dvector![1.0, 0.0], dvector![0.0, 1.0]])
                .unwrap(),
        );
        let delta = difference_body(&t);
        let p = delta.as_polytope().unwrap();
        assert_eq!(p.vertices().len(), 6);
        for expect in [
            dvector![1.0, 0.0],
            dvector![-1.0, 0.0],
            dvector![0.0, 1.0],
            dvector![0.0, -1.0],
            dvector![1.0, -1.0],
            dvector![-1.0, 1.0],
        ] {
            assert!(p.vertex_index(&expect).is_some(), "missing {expect:?}");
        }
    }

    #[test]
    fn difference_body_symmetric_and_translation_invariant() {
        let sq = square();
        let delta = difference_body(&sq);
        // Symmetric body: difference body is 2K.
        assert_relative_eq!(
            delta.support_function(&dvector![1.0, 0.0]),
            2.0,
            epsilon = 1e-12
        );
        let shifted = sq.translate(&dvector![0.3, -0.7]);
        let delta2 = difference_body(&shifted);
        for k in 0..12 {
            let t = std::f64::consts::TAU * k as f64 / 12.0;
            let u = dvector![t.cos(), t.sin()];
            assert_relative_eq!(
                delta.support_function(&u),
                delta2.support_function(&u),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn difference_body_of_3d_polytope_is_exact_oracle() {
        let mut pts = Vec::new();
        for &x in &[0.0, 1.0] {
            for &y in &[0.0, 1.0] {
                for &z in &[0.0, 1.0] {
                    pts.push(dvector![x, y, z]);
                }
            }
        }
        let cube = ConvexBody::Polytope(Polytope::from_points(&pts).unwrap());
        let delta = difference_body(&cube);
        // Unit cube shifted from the origin: difference body is [-1,1]^3.
        let u = dvector![1.0, 1.0, 1.0].normalize();
        assert_relative_eq!(delta.support_function(&u), 3.0_f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(
            delta.support_point(&u).norm(),
            3.0_f64.sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn minkowski_sum_of_squares() {
        let sq = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];
        let sum = minkowski_sum_2d(&sq, &sq);
        let hull = crate::geom::region::hull2d(&sum);
        assert_eq!(hull.len(), 4);
        assert!(hull.iter().any(|&(x, y)| (x - 2.0).abs() < 1e-12 && (y - 2.0).abs() < 1e-12));
    }

    #[test]
    fn containment_margins() {
        let sq = square();
        let small = ConvexBody::ball(DVector::zeros(2), 0.5).unwrap();
        let margin = containment_margin(&sq, &small).unwrap();
        assert_relative_eq!(margin, 0.5, epsilon = 1e-12);

        let big = ConvexBody::ball(DVector::zeros(2), 1.5).unwrap();
        assert!(containment_margin(&sq, &big).unwrap() < 0.0);

        let ball = ConvexBody::ball(DVector::zeros(2), 1.0).unwrap();
        let inner = ConvexBody::ball(dvector![0.2, 0.0], 0.3).unwrap();
        assert_relative_eq!(containment_margin(&ball, &inner).unwrap(), 0.5, epsilon = 1e-9);

        let poly_in_ball = ConvexBody::Polytope(
            Polytope::from_points(&[
                dvector![0.4, 0.0],
                dvector![-0.4, 0.2],
                dvector![0.0, -0.5],
            ])
            .unwrap(),
        );
        assert_relative_eq!(
            containment_margin(&ball, &poly_in_ball).unwrap(),
            0.5,
            epsilon = 1e-9
        );
    }

    #[test]
    fn gauge_requires_origin_interior() {
        let shifted = square().translate(&dvector![5.0, 0.0]);
        assert!(gauge(&shifted, &dvector![5.0, 0.0]).is_err());
        let sq = square();
        assert_relative_eq!(gauge(&sq, &dvector![0.5, 0.0]).unwrap(), 0.5);
    }

    #[test]
    fn polar_facet_of_square_vertex() {
        let sq = square();
        let region = polar_facet(sq.as_polytope().unwrap(), &dvector![1.0, 1.0]).unwrap();
        let verts = region.vertices().unwrap();
        assert_eq!(verts.len(), 2);
        assert!(verts.iter().any(|v| (v - dvector![1.0, 0.0]).norm() < 1e-9));
        assert!(verts.iter().any(|v| (v - dvector![0.0, 1.0]).norm() < 1e-9));
    }
}

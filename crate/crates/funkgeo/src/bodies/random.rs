//! Random convex bodies for the validation suites.

use nalgebra::{DMatrix, DVector};
use rand::RngExt;
use rand_chacha::ChaCha8Rng;

use super::{ConvexBody, Ellipsoid, Polytope};
use crate::geom::sphere::uniform_on_sphere;

/// Random convex polygon with up to `n` vertices: the hull of points at
/// sorted random angles and radii in `[0.5, 1] * radius`.
pub fn random_polygon(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Polytope {
    loop {
        let mut angles: Vec<f64> = (0..n)
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let pts: Vec<DVector<f64>> = angles
            .iter()
            .map(|&t| {
                let r = radius * rng.random_range(0.5..1.0);
                DVector::from_vec(vec![r * t.cos(), r * t.sin()])
            })
            .collect();
        if let Ok(p) = Polytope::from_points(&pts) {
            if p.vertices().len() >= 3 {
                return p;
            }
        }
    }
}

/// Random full-dimensional polytope: the hull of `n` points drawn from a
/// spherical shell of the given radius.
pub fn random_polytope(rng: &mut ChaCha8Rng, d: usize, n: usize, radius: f64) -> Polytope {
    loop {
        let pts: Vec<DVector<f64>> = (0..n.max(d + 1))
            .map(|_| uniform_on_sphere(rng, d) * (radius * rng.random_range(0.55..1.0)))
            .collect();
        if let Ok(p) = Polytope::from_points(&pts) {
            return p;
        }
    }
}

/// Random ellipsoid: random rotation, semi-axes in `[0.4, 1] * radius`,
/// centered at the origin.
pub fn random_ellipsoid(rng: &mut ChaCha8Rng, d: usize, radius: f64) -> Ellipsoid {
    let raw = DMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0f64));
    let q = raw.qr().q();
    let mut diag = DMatrix::zeros(d, d);
    for i in 0..d {
        let axis = radius * rng.random_range(0.4..1.0);
        diag[(i, i)] = 1.0 / (axis * axis);
    }
    let form = &q * diag * q.transpose();
    Ellipsoid::new(DVector::zeros(d), form).expect("random SPD form")
}

/// Largest ball radius about the interior witness guaranteed inside `K`.
pub fn inradius_about_witness(k: &ConvexBody) -> f64 {
    match k {
        ConvexBody::Polytope(p) => {
            let c = p.interior_point();
            p.halfspaces()
                .iter()
                .map(|h| h.offset - h.normal.dot(c))
                .fold(f64::INFINITY, f64::min)
        }
        ConvexBody::Ellipsoid(e) => {
            let eig = e.form().clone().symmetric_eigen();
            let lmax = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
            1.0 / lmax.sqrt()
        }
        ConvexBody::Oracle(_) => 0.0,
    }
}

/// Which family to draw a random body from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BodyKind {
    Polytope,
    Ellipsoid,
}

/// A random body of unit-order size centered at the origin.
pub fn random_body(rng: &mut ChaCha8Rng, d: usize, kind: BodyKind, radius: f64) -> ConvexBody {
    match kind {
        BodyKind::Polytope => {
            let n = rng.random_range(d + 3..d + 9);
            ConvexBody::Polytope(random_polytope(rng, d, n, radius))
        }
        BodyKind::Ellipsoid => ConvexBody::Ellipsoid(random_ellipsoid(rng, d, radius)),
    }
}

/// A nested pair `G` strictly inside `K` with a comfortable margin: `G` is
/// drawn inside the witness ball of `K`, shrunk and offset randomly.
pub fn random_nested_pair(
    rng: &mut ChaCha8Rng,
    d: usize,
    k_kind: BodyKind,
    g_kind: BodyKind,
) -> (ConvexBody, ConvexBody) {
    loop {
        let k = random_body(rng, d, k_kind, 1.0);
        let c = k.interior_point();
        let inr = inradius_about_witness(&k);
        if inr < 0.05 {
            continue;
        }
        let r = inr * rng.random_range(0.35..0.55);
        let g0 = random_body(rng, d, g_kind, r);
        let mut offset = DVector::zeros(d);
        for i in 0..d {
            offset[i] = rng.random_range(-0.2..0.2) * inr / (d as f64).sqrt();
        }
        let g = g0.translate(&(&c + &offset));
        if let Ok(margin) = super::containment_margin(&k, &g) {
            if margin > 1e-3 {
                return (k, g);
            }
        }
    }
}

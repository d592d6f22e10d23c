//! Convex regions embedded in hyperplanes and their `(d-1)`-measures.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::geom::hyperplane::Hyperplane;
use crate::geom::sphere::ball_volume;

/// The geometry of a region inside its hyperplane.
#[derive(Debug, Clone)]
pub enum RegionShape {
    /// Convex hull of ambient-coordinate vertices lying on the plane.
    Polytopal { vertices: Vec<DVector<f64>> },
    /// Ellipsoid `{ center + basis t : t^T form t <= 1 }` with an in-plane
    /// orthonormal basis and a positive-definite `(d-1) x (d-1)` form.
    Ellipsoidal {
        center: DVector<f64>,
        basis: DMatrix<f64>,
        form: DMatrix<f64>,
    },
}

/// A convex region embedded in an affine hyperplane, carrying its own
/// `(d-1)`-dimensional measure.
#[derive(Debug, Clone)]
pub struct EmbeddedRegion {
    pub plane: Hyperplane,
    pub shape: RegionShape,
}

impl EmbeddedRegion {
    /// A polytopal region; every vertex must satisfy the plane equation.
    pub fn polytopal(plane: Hyperplane, vertices: Vec<DVector<f64>>) -> Result<Self> {
        for v in &vertices {
            if !plane.contains(v) {
                return Err(GeomError::Invariant(format!(
                    "region vertex off its plane by {:.3e}",
                    plane.signed_distance(v)
                )));
            }
        }
        Ok(EmbeddedRegion {
            plane,
            shape: RegionShape::Polytopal { vertices },
        })
    }

    pub fn ellipsoidal(
        plane: Hyperplane,
        center: DVector<f64>,
        basis: DMatrix<f64>,
        form: DMatrix<f64>,
    ) -> Result<Self> {
        if !plane.contains(&center) {
            return Err(GeomError::Invariant("ellipsoidal region center off its plane".into()));
        }
        Ok(EmbeddedRegion {
            plane,
            shape: RegionShape::Ellipsoidal { center, basis, form },
        })
    }

    pub fn vertices(&self) -> Option<&[DVector<f64>]> {
        match &self.shape {
            RegionShape::Polytopal { vertices } => Some(vertices),
            RegionShape::Ellipsoidal { .. } => None,
        }
    }

    /// The `(d-1)`-dimensional measure of the region. Degenerate
    /// (lower-dimensional) regions report 0.
    pub fn measure(&self) -> f64 {
        match &self.shape {
            RegionShape::Polytopal { vertices } => {
                if vertices.is_empty() {
                    return 0.0;
                }
                let basis = self.plane.basis();
                let coords: Vec<DVector<f64>> = vertices
                    .iter()
                    .map(|v| self.plane.local_coords(&basis, v))
                    .collect();
                point_set_measure(&coords)
            }
            RegionShape::Ellipsoidal { form, .. } => {
                let k = form.nrows();
                let det = form.clone().determinant();
                if det <= 0.0 {
                    0.0
                } else {
                    ball_volume(k) / det.sqrt()
                }
            }
        }
    }
}

/// Measure of the region (mirror of [`EmbeddedRegion::measure`]).
pub fn region_measure(region: &EmbeddedRegion) -> f64 {
    region.measure()
}

/// Convex-hull measure of a point set in `R^k` for small `k`; returns 0 for
/// degenerate inputs.
pub fn point_set_measure(coords: &[DVector<f64>]) -> f64 {
    if coords.is_empty() {
        return 0.0;
    }
    let k = coords[0].len();
    match k {
        0 => 0.0,
        1 => {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for c in coords {
                lo = lo.min(c[0]);
                hi = hi.max(c[0]);
            }
            (hi - lo).max(0.0)
        }
        2 => {
            let pts: Vec<(f64, f64)> = coords.iter().map(|c| (c[0], c[1])).collect();
            polygon_area(&hull2d(&pts))
        }
        _ => match crate::bodies::polytope::Polytope::from_points(coords) {
            Ok(p) => p.volume(),
            Err(_) => 0.0,
        },
    }
}

/// Convex hull of planar points in counterclockwise order (monotone chain).
/// Collinear boundary points are dropped.
pub fn hull2d(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-14 && (a.1 - b.1).abs() < 1e-14);
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Shoelace area of a simple polygon given in boundary order.
pub fn polygon_area(poly: &[(f64, f64)]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..poly.len() {
        let (x0, y0) = poly[i];
        let (x1, y1) = poly[(i + 1) % poly.len()];
        acc += x0 * y1 - x1 * y0;
    }
    0.5 * acc.abs()
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff_distance(a: &[DVector<f64>], b: &[DVector<f64>]) -> f64 {
    let one_way = |from: &[DVector<f64>], to: &[DVector<f64>]| {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| (p - q).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::dvector;

    #[test]
    fn segment_length_in_the_plane() {
        let plane = Hyperplane::new(dvector![1.0, 1.0], -1.0).unwrap();
        let region = EmbeddedRegion::polytopal(
            plane,
            vec![dvector![-1.0, 0.0], dvector![0.0, -1.0]],
        )
        .unwrap();
        assert_relative_eq!(region.measure(), 2.0_f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn unit_square_embedded_in_3d() {
        let plane = Hyperplane::new(dvector![0.0, 0.0, 1.0], 1.0).unwrap();
        let region = EmbeddedRegion::polytopal(
            plane,
            vec![
                dvector![0.0, 0.0, 1.0],
                dvector![1.0, 0.0, 1.0],
                dvector![1.0, 1.0, 1.0],
                dvector![0.0, 1.0, 1.0],
            ],
        )
        .unwrap();
        assert_relative_eq!(region.measure(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn triangle_area_in_3d() {
        let plane = Hyperplane::new(dvector![0.0, 0.0, 1.0], 1.0).unwrap();
        let region = EmbeddedRegion::polytopal(
            plane,
            vec![
                dvector![0.0, 0.0, 1.0],
                dvector![1.0, 0.0, 1.0],
                dvector![0.0, 1.0, 1.0],
            ],
        )
        .unwrap();
        assert_relative_eq!(region.measure(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_region_measures_zero() {
        let plane = Hyperplane::new(dvector![0.0, 0.0, 1.0], 0.0).unwrap();
        let region = EmbeddedRegion::polytopal(
            plane,
            vec![
                dvector![0.0, 0.0, 0.0],
                dvector![1.0, 0.0, 0.0],
                dvector![2.0, 0.0, 0.0],
            ],
        )
        .unwrap();
        assert_relative_eq!(region.measure(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn off_plane_vertex_rejected() {
        let plane = Hyperplane::new(dvector![0.0, 1.0], 1.0).unwrap();
        let res = EmbeddedRegion::polytopal(plane, vec![dvector![0.0, 1.5]]);
        assert!(res.is_err());
    }

    #[test]
    fn measure_invariant_under_rigid_motions() {
        use crate::report::substream_rng;
        use rand::RngExt;
        let mut rng = substream_rng(3, 1, 0);
        for _ in 0..20 {
            let verts: Vec<DVector<f64>> = (0..6)
                .map(|_| {
                    let x: f64 = rng.random_range(-1.0..1.0);
                    let y: f64 = rng.random_range(-1.0..1.0);
                    dvector![x, y, 2.0]
                })
                .collect();
            let plane = Hyperplane::new(dvector![0.0, 0.0, 1.0], 2.0).unwrap();
            let region = EmbeddedRegion::polytopal(plane, verts.clone()).unwrap();
            let m0 = region.measure();

            // Random ambient rotation + translation applied to plane and vertices.
            let raw = DMatrix::from_fn(3, 3, |_, _| rng.random_range(-1.0..1.0f64));
            let q = raw.qr().q();
            let shift = dvector![
                rng.random_range(-2.0..2.0f64),
                rng.random_range(-2.0..2.0f64),
                rng.random_range(-2.0..2.0f64)
            ];
            let moved: Vec<DVector<f64>> = verts.iter().map(|v| &q * v + &shift).collect();
            let new_normal = &q * dvector![0.0, 0.0, 1.0];
            let offset = new_normal.dot(&moved[0]);
            let plane2 = Hyperplane::new(new_normal, offset).unwrap();
            let region2 = EmbeddedRegion::polytopal(plane2, moved).unwrap();
            assert_relative_eq!(region2.measure(), m0, max_relative = 1e-9);
        }
    }

    #[test]
    fn ellipsoidal_region_measure() {
        let plane = Hyperplane::new(dvector![0.0, 0.0, 1.0], 1.0).unwrap();
        let basis = plane.basis();
        // Ellipse with semi-axes 2 and 0.5: area pi.
        let form = DMatrix::from_row_slice(2, 2, &[0.25, 0.0, 0.0, 4.0]);
        let region =
            EmbeddedRegion::ellipsoidal(plane, dvector![0.0, 0.0, 1.0], basis, form).unwrap();
        assert_relative_eq!(region.measure(), std::f64::consts::PI, epsilon = 1e-12);
    }

    #[test]
    fn hausdorff_of_shifted_sets() {
        let a = vec![dvector![0.0, 0.0], dvector![1.0, 0.0]];
        let b = vec![dvector![0.0, 0.1], dvector![1.0, 0.0]];
        assert_relative_eq!(hausdorff_distance(&a, &b), 0.1, epsilon = 1e-12);
    }
}

//! Pointed cones with apex at the origin: conical hulls, polar cones, dual
//! cross-sections, and admissible hyperplane sections.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::geom::hyperplane::Hyperplane;
use crate::geom::region::EmbeddedRegion;

use super::polytope::{enumerate_vertices, Polytope};

/// A full-dimensional pointed cone, stored by its generator rays together
/// with a pointedness witness and the extreme rays of the polar cone.
#[derive(Debug, Clone)]
pub struct PointedCone {
    generators: Vec<DVector<f64>>,
    witness: DVector<f64>,
    polar_rays: Vec<DVector<f64>>,
}

impl PointedCone {
    /// Conical hull of the given nonzero generators. Fails when the hull is
    /// not pointed or not full-dimensional.
    pub fn from_generators(generators: &[DVector<f64>]) -> Result<Self> {
        if generators.is_empty() {
            return Err(GeomError::Invariant("cone needs at least one generator".into()));
        }
        let d = generators[0].len();
        let mut dirs: Vec<DVector<f64>> = Vec::new();
        for g in generators {
            let n = g.norm();
            if n < 1e-14 {
                return Err(GeomError::Invariant("zero generator".into()));
            }
            let u = g / n;
            if !dirs.iter().any(|v| (v - &u).norm() < 1e-12) {
                dirs.push(u);
            }
        }
        let cloud = DMatrix::from_columns(&dirs);
        let svals = cloud.svd(false, false).singular_values;
        if svals.len() < d || svals[d - 1] < 1e-10 {
            return Err(GeomError::Invariant("cone is not full-dimensional".into()));
        }
        let witness = pointedness_witness(&dirs).ok_or_else(|| {
            GeomError::Invariant("cone is not pointed (no witness direction)".into())
        })?;

        // Extreme rays of the polar cone = vertices of the dual cross-section
        // at the witness, i.e. { y : <g_i, y> <= 0 } sliced by <w, y> = -1.
        let polar_rays = polar_section_vertices(&dirs, &witness)?
            .into_iter()
            .map(|y| {
                let n = y.norm();
                y / n
            })
            .collect();
        Ok(PointedCone {
            generators: dirs,
            witness,
            polar_rays,
        })
    }

    pub fn dimension(&self) -> usize {
        self.witness.len()
    }

    /// Unit generator directions (deduplicated, possibly non-extreme).
    pub fn generators(&self) -> &[DVector<f64>] {
        &self.generators
    }

    /// Unit direction with `<g, w> > 0` for every generator.
    pub fn witness(&self) -> &DVector<f64> {
        &self.witness
    }

    /// Unit extreme rays of the polar cone `{ y : <x, y> <= 0 for x in C }`.
    pub fn polar_rays(&self) -> &[DVector<f64>] {
        &self.polar_rays
    }

    /// Closed-cone membership: `<s, r> <= 0` against every polar ray.
    pub fn contains(&self, s: &DVector<f64>) -> bool {
        let tol = 1e-9 * s.norm().max(1.0);
        self.polar_rays.iter().all(|r| r.dot(s) <= tol)
    }

    /// Strict interior membership with a relative margin.
    pub fn contains_interior(&self, s: &DVector<f64>, margin: f64) -> bool {
        let scale = s.norm().max(1e-300);
        self.polar_rays.iter().all(|r| r.dot(s) < -margin * scale)
    }

    /// The dual cross-section `F_C(x) = polar(C) ∩ { y : <x, y> = -1 }`,
    /// bounded exactly when `x` is interior.
    pub fn dual_cross_section(&self, x: &DVector<f64>) -> Result<EmbeddedRegion> {
        if !self.contains_interior(x, 1e-9) {
            return Err(GeomError::Invariant(
                "dual cross-section requires an interior direction (slice would be unbounded)"
                    .into(),
            ));
        }
        let plane = Hyperplane::new(x.clone(), -1.0)?;
        let verts = polar_section_vertices(&self.generators, x)?;
        EmbeddedRegion::polytopal(plane, verts)
    }

    /// Whether `H` is admissible for this cone, i.e. `C ∩ H` is bounded:
    /// the normal line must pass through the interior of the polar cone.
    pub fn is_admissible(&self, h: &Hyperplane) -> bool {
        let n = h.normal();
        let all_neg = self.generators.iter().all(|g| g.dot(n) < -1e-9);
        let all_pos = self.generators.iter().all(|g| g.dot(n) > 1e-9);
        all_neg || all_pos
    }

    /// Vertices of the bounded section `C ∩ H` (one per generator ray).
    pub fn section_by_plane(&self, h: &Hyperplane) -> Result<Vec<DVector<f64>>> {
        if !self.is_admissible(h) {
            return Err(GeomError::Invariant(
                "hyperplane is not admissible for the cone (unbounded section)".into(),
            ));
        }
        let n = h.normal();
        let b = h.offset();
        let mut out = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let t = b / g.dot(n);
            if t <= 0.0 {
                return Err(GeomError::Invariant(
                    "hyperplane misses the cone (section on the wrong side)".into(),
                ));
            }
            out.push(g * t);
        }
        Ok(out)
    }

    /// For d = 2: the angular interval `(lo, hi)` spanned by the cone,
    /// with `hi - lo < pi`.
    pub fn angular_interval(&self) -> (f64, f64) {
        assert_eq!(self.dimension(), 2);
        let base = self.witness[1].atan2(self.witness[0]);
        let mut lo = 0.0_f64;
        let mut hi = 0.0_f64;
        for g in &self.generators {
            let a = g[1].atan2(g[0]);
            let mut delta = a - base;
            while delta > std::f64::consts::PI {
                delta -= std::f64::consts::TAU;
            }
            while delta < -std::f64::consts::PI {
                delta += std::f64::consts::TAU;
            }
            lo = lo.min(delta);
            hi = hi.max(delta);
        }
        (base + lo, base + hi)
    }
}

/// Vertices of the slice `{ y : <g_i, y> <= 0 for all i } ∩ { y : <x, y> = -1 }`,
/// enumerated in plane coordinates and lifted back to ambient space.
fn polar_section_vertices(
    dirs: &[DVector<f64>],
    x: &DVector<f64>,
) -> Result<Vec<DVector<f64>>> {
    let plane = Hyperplane::new(x.clone(), -1.0)?;
    let y0 = plane.base_point();
    let basis = plane.basis();
    let k = x.len() - 1;
    let mut rows: Vec<DVector<f64>> = Vec::with_capacity(dirs.len());
    let mut rhs: Vec<f64> = Vec::with_capacity(dirs.len());
    for g in dirs {
        // <g, y0 + B t> <= 0  =>  <B^T g, t> <= -<g, y0>
        rows.push(basis.transpose() * g);
        rhs.push(-g.dot(&y0));
    }
    if k == 0 {
        // Ambient dimension 1: the section is the single point y0.
        return Ok(vec![y0]);
    }
    let verts = enumerate_vertices(&rows, &rhs);
    if verts.is_empty() {
        return Err(GeomError::Numerical(
            "polar cone slice produced no vertices".into(),
        ));
    }
    Ok(verts.into_iter().map(|t| &y0 + &basis * t).collect())
}

/// A unit direction making a strictly positive inner product with every unit
/// generator, when one exists. Starts from the average direction and, if
/// needed, runs a projected subgradient ascent on `min_i <g_i, w>`.
pub(crate) fn pointedness_witness(dirs: &[DVector<f64>]) -> Option<DVector<f64>> {
    let d = dirs[0].len();
    let mut w = DVector::zeros(d);
    for g in dirs {
        w += g;
    }
    if w.norm() > 1e-12 {
        w /= w.norm();
        if min_dot(dirs, &w) > 1e-9 {
            return Some(w);
        }
    } else {
        w = dirs[0].clone();
    }
    let mut best = w.clone();
    let mut best_val = min_dot(dirs, &w);
    for k in 0..2000 {
        let (_, g) = dirs
            .iter()
            .map(|g| (g.dot(&w), g))
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())?;
        let step = 0.5 / ((k + 1) as f64).sqrt();
        w += g * step;
        let n = w.norm();
        if n < 1e-12 {
            w = dirs[0].clone();
        } else {
            w /= n;
        }
        let val = min_dot(dirs, &w);
        if val > best_val {
            best_val = val;
            best = w.clone();
        }
        if best_val > 0.05 {
            break;
        }
    }
    if best_val > 1e-9 {
        Some(best)
    } else {
        None
    }
}

fn min_dot(dirs: &[DVector<f64>], w: &DVector<f64>) -> f64 {
    dirs.iter().map(|g| g.dot(w)).fold(f64::INFINITY, f64::min)
}

/// The normal cone of `K` at one of its vertices: generated by the outer
/// normals of the incident facets.
pub fn vertex_normal_cone(k: &Polytope, v: &DVector<f64>) -> Result<PointedCone> {
    let idx = k
        .vertex_index(v)
        .ok_or_else(|| GeomError::Invariant("point is not a vertex of the polytope".into()))?;
    vertex_normal_cone_by_index(k, idx)
}

pub fn vertex_normal_cone_by_index(k: &Polytope, idx: usize) -> Result<PointedCone> {
    let gens: Vec<DVector<f64>> = k
        .incidence()
        .iter()
        .enumerate()
        .filter(|(_, inc)| inc.contains(&idx))
        .map(|(j, _)| k.halfspaces()[j].normal.clone())
        .collect();
    PointedCone::from_generators(&gens)
}

/// The tangent cone `cone(K - v)` at a vertex, generated by the directions
/// to every other vertex.
pub fn tangent_cone(k: &Polytope, v: &DVector<f64>) -> Result<PointedCone> {
    let idx = k
        .vertex_index(v)
        .ok_or_else(|| GeomError::Invariant("point is not a vertex of the polytope".into()))?;
    tangent_cone_by_index(k, idx)
}

pub fn tangent_cone_by_index(k: &Polytope, idx: usize) -> Result<PointedCone> {
    let v = &k.vertices()[idx];
    let gens: Vec<DVector<f64>> = k
        .vertices()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != idx)
        .map(|(_, w)| w - v)
        .collect();
    PointedCone::from_generators(&gens)
}

/// Membership of a unit direction in the cone (closed convention).
pub fn spherical_section_membership(c: &PointedCone, s: &DVector<f64>) -> bool {
    c.contains(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::dvector;

    fn first_quadrant() -> PointedCone {
        PointedCone::from_generators(&[dvector![1.0, 0.0], dvector![0.0, 1.0]]).unwrap()
    }

    #[test]
    fn quadrant_membership() {
        let c = first_quadrant();
        let s = dvector![std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2];
        assert!(c.contains(&s));
        assert!(!c.contains(&dvector![-1.0, 0.0]));
        // Boundary rays are members (closed cone).
        assert!(c.contains(&dvector![1.0, 0.0]));
        assert!(c.contains(&dvector![0.0, 1.0]));
    }

    #[test]
    fn quadrant_dual_cross_section_is_the_antidiagonal_segment() {
        let c = first_quadrant();
        let region = c.dual_cross_section(&dvector![1.0, 1.0]).unwrap();
        assert_relative_eq!(region.measure(), 2.0_f64.sqrt(), epsilon = 1e-9);
        let verts = region.vertices().unwrap();
        let mut found = [false, false];
        for v in verts {
            if (v - dvector![-1.0, 0.0]).norm() < 1e-9 {
                found[0] = true;
            }
            if (v - dvector![0.0, -1.0]).norm() < 1e-9 {
                found[1] = true;
            }
        }
        assert!(found[0] && found[1]);
    }

    #[test]
    fn dual_cross_section_scaling() {
        // F_C(a x) = F_C(x) / a, so the measure scales by a^{-(d-1)}.
        let c = first_quadrant();
        let m1 = c.dual_cross_section(&dvector![1.0, 1.0]).unwrap().measure();
        let m3 = c.dual_cross_section(&dvector![3.0, 3.0]).unwrap().measure();
        assert_relative_eq!(m3, m1 / 3.0, epsilon = 1e-9);
    }

    #[test]
    fn symmetric_wedge_cross_section() {
        // C = { x >= |y| }: the polar cone is { y_1 <= -|y_2| }; slicing at
        // x = (1, 0) gives the segment {(-1, t) : |t| <= 1} of length 2.
        let c = PointedCone::from_generators(&[dvector![1.0, 1.0], dvector![1.0, -1.0]]).unwrap();
        let region = c.dual_cross_section(&dvector![1.0, 0.0]).unwrap();
        assert_relative_eq!(region.measure(), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn boundary_direction_is_not_interior() {
        let c = first_quadrant();
        assert!(c.dual_cross_section(&dvector![1.0, 0.0]).is_err());
    }

    #[test]
    fn non_pointed_cone_rejected() {
        let res = PointedCone::from_generators(&[
            dvector![1.0, 0.0],
            dvector![-1.0, 0.0],
            dvector![0.0, 1.0],
        ]);
        assert!(res.is_err());
    }

    #[test]
    fn admissible_sections() {
        let c = PointedCone::from_generators(&[dvector![1.0, 1.0], dvector![1.0, -1.0]]).unwrap();
        let h = Hyperplane::new(dvector![1.0, 0.0], 1.0).unwrap();
        assert!(c.is_admissible(&h));
        let verts = c.section_by_plane(&h).unwrap();
        assert_eq!(verts.len(), 2);

        // A plane parallel to a boundary ray is inadmissible.
        let bad = Hyperplane::new(dvector![1.0, -1.0], 1.0).unwrap();
        assert!(!c.is_admissible(&bad));
        assert!(c.section_by_plane(&bad).is_err());
    }

    #[test]
    fn three_dimensional_octant() {
        let c = PointedCone::from_generators(&[
            dvector![1.0, 0.0, 0.0],
            dvector![0.0, 1.0, 0.0],
            dvector![0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(c.polar_rays().len(), 3);
        assert!(c.contains(&dvector![1.0, 2.0, 3.0]));
        assert!(!c.contains(&dvector![1.0, 2.0, -0.1]));
        let region = c.dual_cross_section(&dvector![1.0, 1.0, 1.0]).unwrap();
        // Slice of the negative octant by <(1,1,1), y> = -1: triangle with
        // vertices at the three -e_i, side sqrt(2): area sqrt(3)/2.
        assert_relative_eq!(region.measure(), 3.0_f64.sqrt() / 2.0, epsilon = 1e-9);
    }

    #[test]
    fn angular_interval_of_wedge() {
        let c = PointedCone::from_generators(&[dvector![1.0, 1.0], dvector![1.0, -1.0]]).unwrap();
        let (lo, hi) = c.angular_interval();
        assert_relative_eq!(hi - lo, std::f64::consts::FRAC_PI_2, epsilon = 1e-12);
    }

    #[test]
    fn hexagon_normal_cones_have_width_pi_over_3() {
        // Exterior angles of a regular polygon sum to 2 pi, pi/3 each here.
        let pts: Vec<DVector<f64>> = (0..6)
            .map(|k| {
                let t = std::f64::consts::FRAC_PI_3 * k as f64;
                dvector![t.cos(), t.sin()]
            })
            .collect();
        let hex = crate::bodies::Polytope::from_points(&pts).unwrap();
        let mut total = 0.0;
        for i in 0..hex.vertices().len() {
            let cone = vertex_normal_cone_by_index(&hex, i).unwrap();
            let (lo, hi) = cone.angular_interval();
            assert_relative_eq!(hi - lo, std::f64::consts::FRAC_PI_3, epsilon = 1e-12);
            total += hi - lo;
        }
        assert_relative_eq!(total, std::f64::consts::TAU, epsilon = 1e-12);
    }

    #[test]
    fn normal_and_tangent_cones_of_square() {
        let sq = crate::bodies::polytope::tests::square();
        let v = dvector![1.0, 1.0];
        let nc = vertex_normal_cone(&sq, &v).unwrap();
        assert!(nc.contains(&dvector![1.0, 0.0]));
        assert!(nc.contains(&dvector![0.5, 0.5]));
        assert!(!nc.contains(&dvector![-0.1, 1.0]));

        let tc = tangent_cone(&sq, &v).unwrap();
        assert!(tc.contains(&dvector![-1.0, -0.2]));
        assert!(!tc.contains(&dvector![0.1, 0.0]));
        assert!(vertex_normal_cone(&sq, &dvector![0.5, 0.5]).is_err());
    }
}

//! Convex polytopes carrying both vertex and halfspace representations.
//!
//! Facet enumeration goes through polarity: after centering, the facets of
//! `conv(P)` correspond to the vertices of the polar `{ y : <p_i - c, y> <= 1 }`,
//! which are enumerated by solving the d-subsets of tight constraints. This
//! keeps the whole pipeline free of an external hull or LP dependency and is
//! exact at the small vertex counts this crate targets.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::geom::hyperplane::Hyperplane;
use crate::geom::region::EmbeddedRegion;

/// A halfspace `{ x : <normal, x> <= offset }` with unit normal.
#[derive(Debug, Clone)]
pub struct Halfspace {
    pub normal: DVector<f64>,
    pub offset: f64,
}

/// Full-dimensional convex polytope with synchronized V- and H-representations
/// and facet-vertex incidence.
#[derive(Debug, Clone)]
pub struct Polytope {
    vertices: Vec<DVector<f64>>,
    halfspaces: Vec<Halfspace>,
    /// `incidence[j]` lists the vertices tight at facet `j`.
    incidence: Vec<Vec<usize>>,
    interior: DVector<f64>,
    scale: f64,
}

impl Polytope {
    /// Builds the convex hull of a point set. Non-extreme points are dropped;
    /// degenerate (lower-dimensional) input is rejected.
    pub fn from_points(points: &[DVector<f64>]) -> Result<Self> {
        if points.is_empty() {
            return Err(GeomError::Invariant("empty point set".into()));
        }
        let d = points[0].len();
        if points.iter().any(|p| p.len() != d) {
            return Err(GeomError::Invariant("mixed point dimensions".into()));
        }
        let mut pts: Vec<DVector<f64>> = Vec::new();
        for p in points {
            if !pts.iter().any(|q| (p - q).norm() < 1e-9 * (1.0 + p.norm())) {
                pts.push(p.clone());
            }
        }
        if d == 1 {
            return Self::segment_1d(&pts);
        }
        if pts.len() < d + 1 {
            return Err(GeomError::Invariant(format!(
                "{} distinct points cannot span a {d}-dimensional body",
                pts.len()
            )));
        }

        let centroid = centroid(&pts);
        let scale = pts
            .iter()
            .map(|p| (p - &centroid).norm())
            .fold(0.0, f64::max);
        let centered: Vec<DVector<f64>> = pts.iter().map(|p| p - &centroid).collect();

        // Full-dimensionality via the singular values of the centered cloud.
        let cloud = DMatrix::from_columns(&centered);
        let svals = cloud.svd(false, false).singular_values;
        if svals.len() < d || svals[d - 1] < 1e-9 * scale {
            return Err(GeomError::Invariant(
                "point set is not full-dimensional".into(),
            ));
        }

        // Polar vertex enumeration: facets of K correspond to vertices of
        // { y : <p_i - c, y> <= 1 }.
        let rhs = vec![1.0; centered.len()];
        let polar_vertices = enumerate_vertices(&centered, &rhs);
        if polar_vertices.is_empty() {
            return Err(GeomError::Numerical(
                "facet enumeration produced no facets".into(),
            ));
        }
        let mut halfspaces: Vec<Halfspace> = Vec::with_capacity(polar_vertices.len());
        for q in &polar_vertices {
            let n = q.norm();
            if n < 1e-14 {
                continue;
            }
            halfspaces.push(Halfspace {
                normal: q / n,
                offset: (1.0 + q.dot(&centroid)) / n,
            });
        }

        Self::assemble(pts, halfspaces, centroid, scale)
    }

    /// Builds a polytope from exact dual data (used by `polar`): vertex and
    /// halfspace lists that are already consistent, plus incidence.
    fn from_dual_data(
        vertices: Vec<DVector<f64>>,
        halfspaces: Vec<Halfspace>,
        incidence: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let interior = centroid(&vertices);
        let scale = vertices
            .iter()
            .map(|p| (p - &interior).norm())
            .fold(0.0, f64::max);
        let poly = Polytope {
            vertices,
            halfspaces,
            incidence,
            interior,
            scale,
        };
        poly.check_consistency()?;
        Ok(poly)
    }

    fn segment_1d(pts: &[DVector<f64>]) -> Result<Self> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in pts {
            lo = lo.min(p[0]);
            hi = hi.max(p[0]);
        }
        if hi - lo <= 1e-12 * (1.0 + lo.abs().max(hi.abs())) {
            return Err(GeomError::Invariant("degenerate 1-d segment".into()));
        }
        let vertices = vec![DVector::from_vec(vec![lo]), DVector::from_vec(vec![hi])];
        let halfspaces = vec![
            Halfspace { normal: DVector::from_vec(vec![1.0]), offset: hi },
            Halfspace { normal: DVector::from_vec(vec![-1.0]), offset: -lo },
        ];
        Ok(Polytope {
            vertices,
            halfspaces,
            incidence: vec![vec![1], vec![0]],
            interior: DVector::from_vec(vec![0.5 * (lo + hi)]),
            scale: 0.5 * (hi - lo),
        })
    }

    /// Classifies `pts` against `halfspaces`, keeps the extreme ones, and
    /// rebuilds incidence.
    fn assemble(
        pts: Vec<DVector<f64>>,
        halfspaces: Vec<Halfspace>,
        interior: DVector<f64>,
        scale: f64,
    ) -> Result<Self> {
        let d = interior.len();
        let tol = 1e-9 * scale.max(1.0);
        let mut vertices: Vec<DVector<f64>> = Vec::new();
        for p in &pts {
            let tight: Vec<usize> = halfspaces
                .iter()
                .enumerate()
                .filter(|(_, h)| (h.normal.dot(p) - h.offset).abs() <= tol)
                .map(|(j, _)| j)
                .collect();
            if tight.len() < d {
                continue;
            }
            let normals = DMatrix::from_columns(
                &tight.iter().map(|&j| halfspaces[j].normal.clone()).collect::<Vec<_>>(),
            );
            let svals = normals.svd(false, false).singular_values;
            if svals[d.min(tight.len()) - 1] > 1e-6 {
                vertices.push(p.clone());
            }
        }
        if vertices.len() < d + 1 {
            return Err(GeomError::Numerical(
                "vertex classification failed: fewer than d + 1 extreme points".into(),
            ));
        }
        let incidence = build_incidence(&vertices, &halfspaces, tol);
        let poly = Polytope {
            vertices,
            halfspaces,
            incidence,
            interior,
            scale,
        };
        poly.check_consistency()?;
        Ok(poly)
    }

    /// V/H cross-validation: vertices satisfy all halfspaces, every facet is
    /// tight at >= d vertices.
    fn check_consistency(&self) -> Result<()> {
        let d = self.dimension();
        let tol = 1e-9 * self.scale.max(1.0);
        for v in &self.vertices {
            for h in &self.halfspaces {
                if h.normal.dot(v) > h.offset + tol {
                    return Err(GeomError::Invariant(format!(
                        "vertex violates a facet by {:.3e}",
                        h.normal.dot(v) - h.offset
                    )));
                }
            }
        }
        for (j, inc) in self.incidence.iter().enumerate() {
            if inc.len() < d {
                return Err(GeomError::Invariant(format!(
                    "facet {j} is tight at {} < d vertices",
                    inc.len()
                )));
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.interior.len()
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    /// Vertex centroid; strictly interior for a full-dimensional polytope.
    pub fn interior_point(&self) -> &DVector<f64> {
        &self.interior
    }

    /// Characteristic length used for relative tolerances.
    pub fn body_scale(&self) -> f64 {
        self.scale
    }

    pub fn vertex_index(&self, v: &DVector<f64>) -> Option<usize> {
        self.vertices
            .iter()
            .position(|w| (w - v).norm() <= 1e-9 * self.scale.max(1.0))
    }

    pub fn support_function(&self, u: &DVector<f64>) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// A support point in direction `u`. Among vertices attaining the
    /// maximum (within a relative tolerance) the lexicographically smallest
    /// is returned, giving a Borel-measurable, reproducible selection.
    pub fn support_point(&self, u: &DVector<f64>) -> DVector<f64> {
        let h = self.support_function(u);
        let tol = 1e-9 * (self.scale.max(1.0)) * u.norm().max(1.0);
        let mut best: Option<&DVector<f64>> = None;
        for v in &self.vertices {
            if v.dot(u) >= h - tol {
                best = match best {
                    None => Some(v),
                    Some(b) if lex_less(v, b) => Some(v),
                    keep => keep,
                };
            }
        }
        best.expect("nonempty vertex set").clone()
    }

    /// Gauge of `x` relative to the base point `c` (which must be interior):
    /// the smallest `t` with `x` in `c + t (K - c)`.
    pub fn gauge_from(&self, c: &DVector<f64>, x: &DVector<f64>) -> Result<f64> {
        let mut value: f64 = 0.0;
        for h in &self.halfspaces {
            let denom = h.offset - h.normal.dot(c);
            if denom <= 1e-12 * self.scale.max(1.0) {
                return Err(GeomError::Invariant(
                    "gauge base point is not interior".into(),
                ));
            }
            value = value.max(h.normal.dot(&(x - c)) / denom);
        }
        Ok(value.max(0.0))
    }

    pub fn contains(&self, x: &DVector<f64>) -> bool {
        let tol = 1e-9 * self.scale.max(1.0);
        self.halfspaces
            .iter()
            .all(|h| h.normal.dot(x) <= h.offset + tol)
    }

    /// `1 - gauge(x)` from the interior witness; positive iff `x` is interior.
    pub fn interior_margin(&self, x: &DVector<f64>) -> f64 {
        match self.gauge_from(&self.interior.clone(), x) {
            Ok(g) => 1.0 - g,
            Err(_) => f64::NEG_INFINITY,
        }
    }

    /// Exit point of the ray `x + t v` (`t > 0`) through the boundary.
    pub fn ray_exit(&self, x: &DVector<f64>, v: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
        if v.norm() == 0.0 {
            return Err(GeomError::Invariant("ray direction is zero".into()));
        }
        if self.interior_margin(x) <= 1e-12 {
            return Err(GeomError::Invariant(
                "ray base point must be strictly interior".into(),
            ));
        }
        let mut t = f64::INFINITY;
        for h in &self.halfspaces {
            let along = h.normal.dot(v);
            if along > 0.0 {
                t = t.min((h.offset - h.normal.dot(x)) / along);
            }
        }
        if !t.is_finite() || t <= 0.0 {
            return Err(GeomError::Numerical("ray does not exit the polytope".into()));
        }
        Ok((x + v * t, t))
    }

    /// Polar body `{ y : <x, y> <= 1 for all x in K }`; requires the origin
    /// strictly interior. Vertices and facets swap roles, incidence is
    /// transposed, and `polar(polar(K)) = K` holds exactly.
    pub fn polar(&self) -> Result<Polytope> {
        let tol = 1e-12 * self.scale.max(1.0);
        if self.halfspaces.iter().any(|h| h.offset <= tol) {
            return Err(GeomError::Invariant(
                "polar requires the origin strictly interior".into(),
            ));
        }
        let vertices: Vec<DVector<f64>> = self
            .halfspaces
            .iter()
            .map(|h| &h.normal / h.offset)
            .collect();
        let halfspaces: Vec<Halfspace> = self
            .vertices
            .iter()
            .map(|v| {
                let n = v.norm();
                Halfspace {
                    normal: v / n,
                    offset: 1.0 / n,
                }
            })
            .collect();
        // Facet i of the polar (from vertex i of K) is tight at polar vertex j
        // exactly when vertex i lies on facet j of K.
        let incidence: Vec<Vec<usize>> = (0..self.vertices.len())
            .map(|i| {
                (0..self.halfspaces.len())
                    .filter(|&j| self.incidence[j].contains(&i))
                    .collect()
            })
            .collect();
        Polytope::from_dual_data(vertices, halfspaces, incidence)
    }

    pub fn translate(&self, t: &DVector<f64>) -> Polytope {
        Polytope {
            vertices: self.vertices.iter().map(|v| v + t).collect(),
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| Halfspace {
                    normal: h.normal.clone(),
                    offset: h.offset + h.normal.dot(t),
                })
                .collect(),
            incidence: self.incidence.clone(),
            interior: &self.interior + t,
            scale: self.scale,
        }
    }

    /// Uniform scaling about the origin by `a > 0`.
    pub fn scale_about_origin(&self, a: f64) -> Polytope {
        Polytope {
            vertices: self.vertices.iter().map(|v| v * a).collect(),
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| Halfspace {
                    normal: h.normal.clone(),
                    offset: h.offset * a,
                })
                .collect(),
            incidence: self.incidence.clone(),
            interior: &self.interior * a,
            scale: self.scale * a,
        }
    }

    /// Applies an invertible linear map: vertices map directly; halfspace
    /// normals map by the inverse transpose.
    pub fn linear_image(&self, m: &DMatrix<f64>) -> Result<Polytope> {
        let points: Vec<DVector<f64>> = self.vertices.iter().map(|v| m * v).collect();
        Polytope::from_points(&points)
    }

    /// The hyperplane supporting facet `j`.
    pub fn facet_plane(&self, j: usize) -> Hyperplane {
        Hyperplane::new(self.halfspaces[j].normal.clone(), self.halfspaces[j].offset)
            .expect("unit facet normal")
    }

    /// The facet as a region embedded in its supporting hyperplane.
    pub fn facet_region(&self, j: usize) -> EmbeddedRegion {
        let verts = self.incidence[j]
            .iter()
            .map(|&i| self.vertices[i].clone())
            .collect();
        EmbeddedRegion {
            plane: self.facet_plane(j),
            shape: crate::geom::region::RegionShape::Polytopal { vertices: verts },
        }
    }

    /// `(d-1)`-measure of facet `j`.
    pub fn facet_measure(&self, j: usize) -> f64 {
        self.facet_region(j).measure()
    }

    /// Lebesgue volume via the pyramid decomposition from the interior
    /// witness: `sum_j dist(c, facet_j) * area_j / d`.
    pub fn volume(&self) -> f64 {
        let d = self.dimension();
        if d == 1 {
            return self.vertices.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max)
                - self.vertices.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
        }
        let c = &self.interior;
        let mut acc = 0.0;
        for (j, h) in self.halfspaces.iter().enumerate() {
            acc += (h.offset - h.normal.dot(c)) * self.facet_measure(j);
        }
        acc / d as f64
    }

    /// Total boundary measure (sum of facet measures).
    pub fn surface_measure(&self) -> f64 {
        (0..self.halfspaces.len()).map(|j| self.facet_measure(j)).sum()
    }

    /// Vertices of the section by the linear subspace spanned by the
    /// orthonormal `basis` columns, in subspace coordinates. The subspace
    /// must meet the interior.
    pub fn section_vertices(&self, basis: &DMatrix<f64>) -> Result<Vec<DVector<f64>>> {
        let rows: Vec<DVector<f64>> = self
            .halfspaces
            .iter()
            .map(|h| basis.transpose() * &h.normal)
            .collect();
        let rhs: Vec<f64> = self.halfspaces.iter().map(|h| h.offset).collect();
        let verts = enumerate_vertices(&rows, &rhs);
        if verts.is_empty() {
            return Err(GeomError::Invariant(
                "subspace does not meet the polytope interior".into(),
            ));
        }
        Ok(verts)
    }

    /// Vertex indices ordered counterclockwise about the centroid (d = 2).
    pub fn ordered_vertices_2d(&self) -> Vec<usize> {
        assert_eq!(self.dimension(), 2);
        let c = &self.interior;
        let mut idx: Vec<usize> = (0..self.vertices.len()).collect();
        idx.sort_by(|&a, &b| {
            let pa = &self.vertices[a] - c;
            let pb = &self.vertices[b] - c;
            pa[1].atan2(pa[0]).partial_cmp(&pb[1].atan2(pb[0])).unwrap()
        });
        idx
    }
}

fn lex_less(a: &DVector<f64>, b: &DVector<f64>) -> bool {
    for i in 0..a.len() {
        if a[i] < b[i] - 1e-12 {
            return true;
        }
        if a[i] > b[i] + 1e-12 {
            return false;
        }
    }
    false
}

pub(crate) fn centroid(points: &[DVector<f64>]) -> DVector<f64> {
    let mut c = DVector::zeros(points[0].len());
    for p in points {
        c += p;
    }
    c / points.len() as f64
}

fn build_incidence(
    vertices: &[DVector<f64>],
    halfspaces: &[Halfspace],
    tol: f64,
) -> Vec<Vec<usize>> {
    halfspaces
        .iter()
        .map(|h| {
            vertices
                .iter()
                .enumerate()
                .filter(|(_, v)| (h.normal.dot(v) - h.offset).abs() <= tol)
                .map(|(i, _)| i)
                .collect()
        })
        .collect()
}

/// Enumerates the vertices of `{ y : <rows_i, y> <= rhs_i }` by solving all
/// k-subsets of tight constraints and keeping the feasible, well-conditioned
/// solutions. Intended for the small systems this crate works with.
pub(crate) fn enumerate_vertices(rows: &[DVector<f64>], rhs: &[f64]) -> Vec<DVector<f64>> {
    let m = rows.len();
    if m == 0 {
        return Vec::new();
    }
    let k = rows[0].len();
    if m < k {
        return Vec::new();
    }
    let mut out: Vec<DVector<f64>> = Vec::new();
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        if let Some(y) = solve_subset(rows, rhs, &subset) {
            let feasible = rows.iter().zip(rhs).all(|(r, &b)| {
                r.dot(&y) <= b + 1e-9 * (r.norm() * y.norm()).max(b.abs()).max(1.0)
            });
            if feasible
                && y.norm() < 1e12
                && !out.iter().any(|q| (q - &y).norm() <= 1e-8 * (1.0 + y.norm()))
            {
                out.push(y);
            }
        }
        // Advance the k-subset in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if subset[i] != i + m - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

fn solve_subset(rows: &[DVector<f64>], rhs: &[f64], subset: &[usize]) -> Option<DVector<f64>> {
    let k = subset.len();
    let mut a = DMatrix::zeros(k, k);
    let mut b = DVector::zeros(k);
    let mut row_scale = 1.0_f64;
    for (r, &i) in subset.iter().enumerate() {
        let norm = rows[i].norm();
        if norm < 1e-14 {
            return None;
        }
        row_scale *= norm;
        for c in 0..k {
            a[(r, c)] = rows[i][c];
        }
        b[r] = rhs[i];
    }
    let lu = a.clone().lu();
    let det = lu.determinant();
    if det.abs() < 1e-10 * row_scale {
        return None;
    }
    let y = lu.solve(&b)?;
    // Reject solutions with a large residual (ill-conditioned subsets).
    let resid = (&a * &y - &b).norm();
    if resid > 1e-7 * (1.0 + y.norm() * row_scale.powf(1.0 / k as f64)) {
        return None;
    }
    Some(y)
}

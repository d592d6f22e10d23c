//! Direct (definitional) Holmes-Thompson areas and volumes for the Funk and
//! Hilbert geometries, plus cone volumes. These are the conservative oracle
//! estimators every shadow- or line-based method is validated against.
//!
//! The surface-area density at a boundary point `x` of `G` is the
//! `(d-1)`-measure of the polar Finsler ball projected onto the tangent
//! plane, normalized by `omega_{d-1}`; the volume density is the d-measure
//! of the polar ball normalized by `omega_d`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::bodies::cone::PointedCone;
use crate::bodies::{ConvexBody, Ellipsoid, Polytope};
use crate::error::{GeomError, Result};
use crate::geom::hyperplane::Hyperplane;
use crate::geom::quadrature::{gauss_legendre, integrate_interval, triangle_rule};
use crate::geom::region::{hull2d, point_set_measure, polygon_area};
use crate::geom::sphere::{ball_volume, sphere_measure, uniform_on_sphere};
use crate::metrics::FinslerKind;
use crate::report::{run_monte_carlo, substream_rng, EstimateReport, Mode, QuadratureSpec};

/// Minimum containment margin for `G` strictly inside `K`.
pub const CONTAINMENT_MARGIN: f64 = 1e-6;

/// A boundary integration element: a point of the boundary of `G`, the outer
/// unit normal there, and the local `(d-1)`-measure weight.
#[derive(Debug, Clone)]
pub struct BoundarySample {
    pub point: DVector<f64>,
    pub normal: DVector<f64>,
    pub weight: f64,
}

impl BoundarySample {
    /// The tangent hyperplane at the sample point.
    pub fn tangent_plane(&self) -> Hyperplane {
        Hyperplane::new(self.normal.clone(), self.normal.dot(&self.point))
            .expect("unit normal")
    }
}

/// Discretizes the boundary of `G` into weighted samples. Polytopes get
/// per-facet subgrids with exact weight sums; ellipsoids get a sphere
/// parametrization through the affine square root of the form (deterministic
/// product grid for d <= 3, Monte-Carlo otherwise or when requested).
pub fn boundary_samples(g: &ConvexBody, spec: &QuadratureSpec) -> Result<Vec<BoundarySample>> {
    spec.validate()?;
    match g {
        ConvexBody::Polytope(p) => polytope_boundary_samples(p, spec.budget),
        ConvexBody::Ellipsoid(e) => ellipsoid_boundary_samples(e, spec),
        ConvexBody::Oracle(_) => Err(GeomError::Unsupported(
            "boundary sampling of a support oracle is not available".into(),
        )),
    }
}

fn polytope_boundary_samples(p: &Polytope, budget: usize) -> Result<Vec<BoundarySample>> {
    let d = p.dimension();
    let nf = p.halfspaces().len();
    if budget < nf {
        return Err(GeomError::Invariant(format!(
            "budget {budget} is smaller than the facet count {nf}"
        )));
    }
    let total: f64 = p.surface_measure();
    let mut samples = Vec::with_capacity(budget);
    match d {
        2 => {
            for j in 0..nf {
                let inc = &p.incidence()[j];
                let (a, b) = (&p.vertices()[inc[0]], &p.vertices()[inc[1]]);
                let len = (b - a).norm();
                let n = ((budget as f64 * len / total).round() as usize).max(1);
                let w = len / n as f64;
                for i in 0..n {
                    let t = (i as f64 + 0.5) / n as f64;
                    samples.push(BoundarySample {
                        point: a + (b - a) * t,
                        normal: p.halfspaces()[j].normal.clone(),
                        weight: w,
                    });
                }
            }
        }
        3 => {
            for j in 0..nf {
                let area = p.facet_measure(j);
                let count = ((budget as f64 * area / total).round() as usize).max(1);
                let poly = ordered_facet_vertices(p, j);
                let centroid = crate::bodies::polytope::centroid(&poly);
                let normal = &p.halfspaces()[j].normal;
                let nv = poly.len();
                for t in 0..nv {
                    let (v0, v1) = (&poly[t], &poly[(t + 1) % nv]);
                    let tri_area = triangle_area_3d(&centroid, v0, v1);
                    if tri_area <= 0.0 {
                        continue;
                    }
                    let per_tri = ((count as f64 * tri_area / area).round() as usize).max(1);
                    let m = (per_tri as f64).sqrt().ceil() as usize;
                    push_triangle_grid(&mut samples, &centroid, v0, v1, tri_area, m, normal);
                }
            }
        }
        _ => {
            return Err(GeomError::Unsupported(
                "polytope boundary sampling is implemented for d <= 3".into(),
            ))
        }
    }
    Ok(samples)
}

/// Congruent subdivision of a triangle into `m^2` cells sampled at their
/// centroids; weights sum to the triangle area exactly.
fn push_triangle_grid(
    out: &mut Vec<BoundarySample>,
    v0: &DVector<f64>,
    v1: &DVector<f64>,
    v2: &DVector<f64>,
    area: f64,
    m: usize,
    normal: &DVector<f64>,
) {
    let w = area / (m * m) as f64;
    let e1 = (v1 - v0) / m as f64;
    let e2 = (v2 - v0) / m as f64;
    for i in 0..m {
        for j in 0..m - i {
            let c_up = v0 + &e1 * (i as f64) + &e2 * (j as f64) + (&e1 + &e2) * (1.0 / 3.0);
            out.push(BoundarySample {
                point: c_up,
                normal: normal.clone(),
                weight: w,
            });
            // Inverted cell, present unless on the hypotenuse row.
            if j < m - i - 1 {
                let c_down =
                    v0 + &e1 * (i as f64 + 1.0) + &e2 * (j as f64 + 1.0) - (&e1 + &e2) * (1.0 / 3.0);
                out.push(BoundarySample {
                    point: c_down,
                    normal: normal.clone(),
                    weight: w,
                });
            }
        }
    }
}

fn triangle_area_3d(a: &DVector<f64>, b: &DVector<f64>, c: &DVector<f64>) -> f64 {
    let u = b - a;
    let v = c - a;
    let cx = u[1] * v[2] - u[2] * v[1];
    let cy = u[2] * v[0] - u[0] * v[2];
    let cz = u[0] * v[1] - u[1] * v[0];
    0.5 * (cx * cx + cy * cy + cz * cz).sqrt()
}

/// Facet vertices in boundary order (sorted by angle about the facet
/// centroid within the facet plane).
fn ordered_facet_vertices(p: &Polytope, j: usize) -> Vec<DVector<f64>> {
    let verts: Vec<DVector<f64>> = p.incidence()[j]
        .iter()
        .map(|&i| p.vertices()[i].clone())
        .collect();
    let plane = p.facet_plane(j);
    let basis = plane.basis();
    let c = crate::bodies::polytope::centroid(&verts);
    let mut keyed: Vec<(f64, DVector<f64>)> = verts
        .into_iter()
        .map(|v| {
            let t = basis.transpose() * (&v - &c);
            (t[1].atan2(t[0]), v)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    keyed.into_iter().map(|(_, v)| v).collect()
}

fn ellipsoid_boundary_samples(
    e: &Ellipsoid,
    spec: &QuadratureSpec,
) -> Result<Vec<BoundarySample>> {
    let d = e.dimension();
    let l = e.sqrt_inv_form();
    let det_l = l.determinant();
    let mut samples = Vec::with_capacity(spec.budget);
    let mut push = |omega: DVector<f64>, sigma_weight: f64| {
        // x = c + L w; the surface stretch of the linear map L at the point
        // with unit normal w is det(L) |L^{-T} w|, and L^{-T} = A^{1/2}.
        let x = e.center() + l * &omega;
        let grad = e.form() * (&x - e.center());
        let half = sqrt_form_times(e, &omega);
        let weight = sigma_weight * det_l * half.norm();
        samples.push(BoundarySample {
            point: x,
            normal: grad.normalize(),
            weight,
        });
    };
    match (spec.mode, d) {
        (Mode::Deterministic, 2) => {
            let n = spec.budget.max(8);
            for k in 0..n {
                let t = std::f64::consts::TAU * (k as f64 + 0.5) / n as f64;
                push(
                    DVector::from_vec(vec![t.cos(), t.sin()]),
                    std::f64::consts::TAU / n as f64,
                );
            }
        }
        (Mode::Deterministic, 3) => {
            // Product rule: Gauss-Legendre in z, trapezoid in phi
            // (d sigma = dz d phi on the unit sphere).
            let n_phi = ((spec.budget as f64).sqrt().ceil() as usize).max(16);
            let n_z = (spec.budget / n_phi).max(8);
            let gl = gauss_legendre(n_z);
            for &(z, wz) in &gl {
                let r = (1.0 - z * z).max(0.0).sqrt();
                for kphi in 0..n_phi {
                    let phi = std::f64::consts::TAU * (kphi as f64 + 0.5) / n_phi as f64;
                    push(
                        DVector::from_vec(vec![r * phi.cos(), r * phi.sin(), z]),
                        wz * std::f64::consts::TAU / n_phi as f64,
                    );
                }
            }
        }
        (Mode::Deterministic, _) => {
            return Err(GeomError::Unsupported(
                "deterministic ellipsoid boundary sampling is implemented for d <= 3".into(),
            ))
        }
        (Mode::MonteCarlo, _) => {
            let mut rng = substream_rng(spec.seed, 0xb0d1, 0);
            let w = sphere_measure(d) / spec.budget as f64;
            for _ in 0..spec.budget {
                push(uniform_on_sphere(&mut rng, d), w);
            }
        }
    }
    Ok(samples)
}

/// `A^{1/2} w`, via `form * sqrt_inv_form` (both symmetric).
fn sqrt_form_times(e: &Ellipsoid, w: &DVector<f64>) -> DVector<f64> {
    e.form() * (e.sqrt_inv_form() * w)
}

/// Vertices of the polar Finsler ball `(K - x)*` for a polytopal `K`: one
/// vertex per facet of `K`, at `n_j / (h_j - <n_j, x>)`.
pub fn polar_ball_vertices(k: &Polytope, x: &DVector<f64>) -> Vec<DVector<f64>> {
    k.halfspaces()
        .iter()
        .map(|h| &h.normal / (h.offset - h.normal.dot(x)))
        .collect()
}

/// Surface-area density of the Holmes-Thompson measure at a boundary sample:
/// the `(d-1)`-measure of the polar Finsler ball's shadow on the tangent
/// plane, over `omega_{d-1}`.
pub fn area_density(
    k: &ConvexBody,
    kind: FinslerKind,
    point: &DVector<f64>,
    normal: &DVector<f64>,
) -> Result<f64> {
    let d = k.dimension();
    let basis = crate::geom::hyperplane::orthonormal_complement(normal);
    let measure = match k {
        ConvexBody::Polytope(p) => {
            let polar = polar_ball_vertices(p, point);
            match d {
                2 => {
                    // Width of the polar segment hull along the tangent line.
                    let mut lo = f64::INFINITY;
                    let mut hi = f64::NEG_INFINITY;
                    for y in &polar {
                        let t = (basis.transpose() * y)[0];
                        lo = lo.min(t);
                        hi = hi.max(t);
                    }
                    let width = (hi - lo).max(0.0);
                    match kind {
                        FinslerKind::Funk => width,
                        // Difference body of a segment, halved: same width.
                        FinslerKind::Hilbert => width,
                    }
                }
                3 => {
                    let pts: Vec<(f64, f64)> = polar
                        .iter()
                        .map(|y| {
                            let t = basis.transpose() * y;
                            (t[0], t[1])
                        })
                        .collect();
                    let hull = hull2d(&pts);
                    match kind {
                        FinslerKind::Funk => polygon_area(&hull),
                        FinslerKind::Hilbert => {
                            // Point reflection preserves orientation in the
                            // plane, so the reflected list is already CCW.
                            let reflected: Vec<(f64, f64)> =
                                hull.iter().map(|&(a, b)| (-a, -b)).collect();
                            let delta = crate::bodies::minkowski_sum_2d(&hull, &reflected);
                            polygon_area(&delta) / 4.0
                        }
                    }
                }
                _ => {
                    let coords: Vec<DVector<f64>> =
                        polar.iter().map(|y| basis.transpose() * y).collect();
                    match kind {
                        FinslerKind::Funk => point_set_measure(&coords),
                        FinslerKind::Hilbert => {
                            return Err(GeomError::Unsupported(
                                "Hilbert area density for polytopes is implemented for d <= 3"
                                    .into(),
                            ))
                        }
                    }
                }
            }
        }
        ConvexBody::Ellipsoid(e) => {
            // Section-then-polar route: slice K - x by the tangent direction
            // space, polar within the plane, closed-form ellipsoid measure.
            // For the Hilbert density the polar ball is recentred, which
            // leaves the shadow measure unchanged.
            let recentered = e.translate(&(-point));
            let plane = Hyperplane::new(normal.clone(), 0.0)?;
            let (center, form) = recentered.section_by_plane(&plane).ok_or_else(|| {
                GeomError::Invariant("boundary point is not interior to K".into())
            })?;
            let section = Ellipsoid::new(basis.transpose() * center, form)?;
            let polar = section.polar()?;
            let _ = kind; // Funk and Hilbert densities coincide for ellipsoids.
            polar.volume()
        }
        ConvexBody::Oracle(_) => {
            return Err(GeomError::Unsupported(
                "area density through a support oracle is not available".into(),
            ))
        }
    };
    Ok(measure / ball_volume(d - 1))
}

/// Volume density of the Holmes-Thompson measure at an interior point `x`:
/// the d-measure of the polar Finsler ball over `omega_d`.
pub fn volume_density(k: &ConvexBody, kind: FinslerKind, x: &DVector<f64>) -> Result<f64> {
    let d = k.dimension();
    let measure = match k {
        ConvexBody::Polytope(p) => {
            let polar = polar_ball_vertices(p, x);
            match kind {
                FinslerKind::Funk => polar_volume_from_incidence(p, x, &polar),
                FinslerKind::Hilbert => {
                    difference_body_volume(p, x, &polar)? / 2.0_f64.powi(d as i32)
                }
            }
        }
        ConvexBody::Ellipsoid(e) => {
            // The polar ball of an ellipsoid is an ellipsoid; its recentred
            // copy (Hilbert) has the same volume.
            let recentered = e.translate(&(-x));
            recentered.polar()?.volume()
        }
        ConvexBody::Oracle(_) => {
            return Err(GeomError::Unsupported(
                "volume density through a support oracle is not available".into(),
            ))
        }
    };
    Ok(measure / ball_volume(d))
}

/// Volume of the polar ball `(K - x)*` using the transposed incidence: facet
/// `i` of the polar corresponds to vertex `i` of `K` and is supported at
/// distance `1 / |v_i - x|` from the origin.
fn polar_volume_from_incidence(k: &Polytope, x: &DVector<f64>, polar: &[DVector<f64>]) -> f64 {
    let d = k.dimension();
    if d == 1 {
        let lo = polar.iter().map(|y| y[0]).fold(f64::INFINITY, f64::min);
        let hi = polar.iter().map(|y| y[0]).fold(f64::NEG_INFINITY, f64::max);
        return hi - lo;
    }
    let mut acc = 0.0;
    for (i, v) in k.vertices().iter().enumerate() {
        let dir = v - x;
        let dist = 1.0 / dir.norm();
        acc += dist * polar_facet_measure(k, i, &dir, polar);
    }
    acc / d as f64
}

/// Measure of the polar-ball facet dual to vertex `i` of `K` (supported on
/// the plane `<v_i - x, y> = 1`).
fn polar_facet_measure(
    k: &Polytope,
    i: usize,
    facet_dir: &DVector<f64>,
    polar: &[DVector<f64>],
) -> f64 {
    let plane = Hyperplane::new(facet_dir.clone(), 1.0).expect("facet direction");
    let basis = plane.basis();
    let coords: Vec<DVector<f64>> = k
        .incidence()
        .iter()
        .enumerate()
        .filter(|(_, inc)| inc.contains(&i))
        .map(|(j, _)| basis.transpose() * &polar[j])
        .collect();
    point_set_measure(&coords)
}

/// Volume of the difference body of the polar ball via mixed volumes:
/// `vol(P + (-P)) = sum_k C(d,k) V(P[k], -P[d-k])`, where the mixed terms
/// with a single reflected slot reduce to facet sums (d <= 3).
fn difference_body_volume(
    k: &Polytope,
    x: &DVector<f64>,
    polar: &[DVector<f64>],
) -> Result<f64> {
    let d = k.dimension();
    let vol = polar_volume_from_incidence(k, x, polar);
    let support = |u: &DVector<f64>| -> f64 {
        polar.iter().map(|y| y.dot(u)).fold(f64::NEG_INFINITY, f64::max)
    };
    match d {
        1 => Ok(2.0 * vol),
        2 => {
            // vol(Delta) = 2 V + sum_edges h(-u_e) len(e).
            let mut mixed = 0.0;
            for (i, v) in k.vertices().iter().enumerate() {
                let dir = v - x;
                let u = dir.normalize();
                mixed += support(&(-&u)) * polar_facet_measure(k, i, &dir, polar);
            }
            Ok(2.0 * vol + mixed)
        }
        3 => {
            // vol(Delta) = 2 V + 6 V(P,P,-P), with
            // V(P,P,-P) = (1/3) sum_facets h(-u_F) area(F).
            let mut mixed = 0.0;
            for (i, v) in k.vertices().iter().enumerate() {
                let dir = v - x;
                let u = dir.normalize();
                mixed += support(&(-&u)) * polar_facet_measure(k, i, &dir, polar);
            }
            Ok(2.0 * vol + 2.0 * mixed)
        }
        _ => Err(GeomError::Unsupported(
            "Hilbert volume density is implemented for d <= 3".into(),
        )),
    }
}

fn require_containment(k: &ConvexBody, g: &ConvexBody) -> Result<()> {
    let margin = crate::bodies::containment_margin(k, g)?;
    if margin < CONTAINMENT_MARGIN {
        return Err(GeomError::Containment(format!(
            "G is not strictly inside K (margin {margin:.3e} < {CONTAINMENT_MARGIN:.0e})"
        )));
    }
    Ok(())
}

/// Direct Holmes-Thompson surface area of `G` in the geometry of `K`.
pub fn ht_area_direct(
    k: &ConvexBody,
    g: &ConvexBody,
    kind: FinslerKind,
    spec: &QuadratureSpec,
) -> Result<EstimateReport> {
    spec.validate()?;
    require_containment(k, g)?;
    let samples = boundary_samples(g, spec)?;
    let values: Vec<f64> = samples
        .par_iter()
        .map(|s| -> Result<f64> {
            Ok(s.weight * area_density(k, kind, &s.point, &s.normal)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let value: f64 = values.iter().sum();
    let n = values.len();
    let std_err = if spec.mode == Mode::MonteCarlo {
        let mean = value / n as f64;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
            / (n as f64 - 1.0).max(1.0);
        (var * n as f64).sqrt()
    } else {
        0.0
    };
    Ok(EstimateReport {
        value,
        std_err,
        samples: n as u64,
        seed: (spec.mode == Mode::MonteCarlo).then_some(spec.seed),
    })
}

/// Funk surface area by the boundary-integral definition.
pub fn funk_area_direct(
    k: &ConvexBody,
    g: &ConvexBody,
    spec: &QuadratureSpec,
) -> Result<EstimateReport> {
    ht_area_direct(k, g, FinslerKind::Funk, spec)
}

/// Hilbert surface area by the boundary-integral definition.
pub fn hilbert_area_direct(
    k: &ConvexBody,
    g: &ConvexBody,
    spec: &QuadratureSpec,
) -> Result<EstimateReport> {
    ht_area_direct(k, g, FinslerKind::Hilbert, spec)
}

/// Direct Holmes-Thompson surface area of `G` in the Minkowski geometry
/// with unit ball `K`: the density is translation-invariant, the shadow of
/// the fixed polar body `K*` on each tangent plane.
pub fn minkowski_area_direct(
    k: &ConvexBody,
    g: &ConvexBody,
    spec: &QuadratureSpec,
) -> Result<EstimateReport> {
    spec.validate()?;
    let d = k.dimension();
    let polar = crate::bodies::polar_body(k)?;
    let samples = boundary_samples(g, spec)?;
    let norm = ball_volume(d - 1);
    let values: Vec<f64> = samples
        .par_iter()
        .map(|s| -> Result<f64> {
            let basis = crate::geom::hyperplane::orthonormal_complement(&s.normal);
            let measure = match &polar {
                ConvexBody::Polytope(pp) => {
                    let coords: Vec<DVector<f64>> = pp
                        .vertices()
                        .iter()
                        .map(|y| basis.transpose() * y)
                        .collect();
                    point_set_measure(&coords)
                }
                ConvexBody::Ellipsoid(pe) => {
                    let (_, form) = pe.project_onto(&basis);
                    ball_volume(d - 1) / form.determinant().sqrt()
                }
                ConvexBody::Oracle(_) => {
                    return Err(GeomError::Unsupported(
                        "Minkowski density through a support oracle is not available".into(),
                    ))
                }
            };
            Ok(s.weight * measure / norm)
        })
        .collect::<Result<Vec<f64>>>()?;
    let value: f64 = values.iter().sum();
    let n = values.len();
    let std_err = if spec.mode == Mode::MonteCarlo {
        let mean = value / n as f64;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
            / (n as f64 - 1.0).max(1.0);
        (var * n as f64).sqrt()
    } else {
        0.0
    };
    Ok(EstimateReport {
        value,
        std_err,
        samples: n as u64,
        seed: (spec.mode == Mode::MonteCarlo).then_some(spec.seed),
    })
}

/// Holmes-Thompson volume of `G` in the geometry of `K`.
pub fn ht_volume(
    k: &ConvexBody,
    g: &ConvexBody,
    kind: FinslerKind,
    spec: &QuadratureSpec,
) -> Result<EstimateReport> {
    spec.validate()?;
    let margin = crate::bodies::containment_margin(k, g)?;
    if margin < 0.0 {
        return Err(GeomError::Containment(format!(
            "G is not contained in K (margin {margin:.3e})"
        )));
    }
    let d = k.dimension();
    match (spec.mode, d) {
        (Mode::Deterministic, 1) => {
            let gp = g
                .as_polytope()
                .ok_or_else(|| GeomError::Unsupported("1-d bodies must be segments".into()))?;
            let lo = gp.vertices().iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
            let hi = gp.vertices().iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
            let mut f = |t: f64| {
                volume_density(k, kind, &DVector::from_vec(vec![t])).unwrap_or(0.0)
            };
            let value = integrate_interval(&mut f, lo, hi, spec.budget);
            Ok(EstimateReport::exact(value, spec.budget as u64))
        }
        (Mode::Deterministic, 2) => {
            let cells = volume_cells_2d(g, spec.budget)?;
            let value: f64 = cells
                .par_iter()
                .map(|(p, w)| -> Result<f64> { Ok(w * volume_density(k, kind, p)?) })
                .collect::<Result<Vec<f64>>>()?
                .iter()
                .sum();
            Ok(EstimateReport::exact(value, cells.len() as u64))
        }
        (Mode::Deterministic, _) => Err(GeomError::Unsupported(
            "deterministic volume quadrature is implemented for d <= 2; use Monte-Carlo".into(),
        )),
        (Mode::MonteCarlo, _) => {
            let sampler = InteriorSampler::new(g)?;
            let total = sampler.total_volume();
            let report = run_monte_carlo(spec.budget, spec.seed, 0x701, |rng| {
                let x = sampler.sample(rng);
                volume_density(k, kind, &x).unwrap_or(0.0)
            });
            Ok(EstimateReport {
                value: total * report.value,
                std_err: total * report.std_err,
                samples: report.samples,
                seed: report.seed,
            })
        }
    }
}

/// Funk volume of `G` relative to `K`.
pub fn funk_volume(k: &ConvexBody, g: &ConvexBody, spec: &QuadratureSpec) -> Result<EstimateReport> {
    ht_volume(k, g, FinslerKind::Funk, spec)
}

/// Hilbert volume of `G` relative to `K`.
pub fn hilbert_volume(
    k: &ConvexBody,
    g: &ConvexBody,
    spec: &QuadratureSpec,
) -> Result<EstimateReport> {
    ht_volume(k, g, FinslerKind::Hilbert, spec)
}

/// Deterministic 2-d volume cells: fan triangles with product Gauss rules
/// for polytopes, a polar product grid for ellipsoids.
fn volume_cells_2d(g: &ConvexBody, budget: usize) -> Result<Vec<(DVector<f64>, f64)>> {
    match g {
        ConvexBody::Polytope(p) => {
            let order = p.ordered_vertices_2d();
            let c = p.interior_point().clone();
            let nv = order.len();
            let per_tri = ((budget as f64 / nv as f64).sqrt().ceil() as usize).clamp(4, 48);
            let mut cells = Vec::new();
            for t in 0..nv {
                let v0 = &p.vertices()[order[t]];
                let v1 = &p.vertices()[order[(t + 1) % nv]];
                let area = 0.5 * ((v0[0] - c[0]) * (v1[1] - c[1])
                    - (v0[1] - c[1]) * (v1[0] - c[0]))
                    .abs();
                if area <= 0.0 {
                    continue;
                }
                cells.extend(triangle_rule(&c, v0, v1, area, per_tri));
            }
            Ok(cells)
        }
        ConvexBody::Ellipsoid(e) => {
            let l = e.sqrt_inv_form();
            let det_l = l.determinant();
            let n_rho = ((budget as f64).sqrt().ceil() as usize).clamp(8, 64);
            let n_theta = (budget / n_rho).clamp(16, 512);
            let gl = gauss_legendre(n_rho);
            let mut cells = Vec::new();
            for &(xr, wr) in &gl {
                let rho = 0.5 * (xr + 1.0);
                for kt in 0..n_theta {
                    let th = std::f64::consts::TAU * (kt as f64 + 0.5) / n_theta as f64;
                    let w = DVector::from_vec(vec![rho * th.cos(), rho * th.sin()]);
                    let x = e.center() + l * w;
                    let weight =
                        det_l * rho * (0.5 * wr) * (std::f64::consts::TAU / n_theta as f64);
                    cells.push((x, weight));
                }
            }
            Ok(cells)
        }
        ConvexBody::Oracle(_) => Err(GeomError::Unsupported(
            "volume integration over a support oracle is not available".into(),
        )),
    }
}

/// Uniform interior sampler backed by a simplex decomposition (polytopes) or
/// the affine ball map (ellipsoids).
struct InteriorSampler {
    simplices: Vec<Vec<DVector<f64>>>,
    cumulative: Vec<f64>,
    total: f64,
    ellipsoid: Option<(DVector<f64>, DMatrix<f64>, f64)>,
    dim: usize,
}

impl InteriorSampler {
    fn new(g: &ConvexBody) -> Result<Self> {
        let d = g.dimension();
        match g {
            ConvexBody::Ellipsoid(e) => Ok(InteriorSampler {
                simplices: Vec::new(),
                cumulative: Vec::new(),
                total: e.volume(),
                ellipsoid: Some((e.center().clone(), e.sqrt_inv_form().clone(), e.volume())),
                dim: d,
            }),
            ConvexBody::Polytope(p) => {
                let simplices = triangulate(p)?;
                let mut cumulative = Vec::with_capacity(simplices.len());
                let mut total = 0.0;
                for s in &simplices {
                    total += simplex_volume(s);
                    cumulative.push(total);
                }
                Ok(InteriorSampler {
                    simplices,
                    cumulative,
                    total,
                    ellipsoid: None,
                    dim: d,
                })
            }
            ConvexBody::Oracle(_) => Err(GeomError::Unsupported(
                "interior sampling of a support oracle is not available".into(),
            )),
        }
    }

    fn total_volume(&self) -> f64 {
        self.total
    }

    fn sample(&self, rng: &mut rand_chacha::ChaCha8Rng) -> DVector<f64> {
        use rand::RngExt;
        if let Some((c, l, _)) = &self.ellipsoid {
            let w = uniform_on_sphere(rng, self.dim);
            let r: f64 = rng.random::<f64>().powf(1.0 / self.dim as f64);
            return c + l * (w * r);
        }
        let pick: f64 = rng.random_range(0.0..self.total);
        let idx = self
            .cumulative
            .partition_point(|&c| c < pick)
            .min(self.simplices.len() - 1);
        let simplex = &self.simplices[idx];
        // Uniform barycentric coordinates: normalized exponentials.
        let mut coords: Vec<f64> = (0..simplex.len())
            .map(|_| -(rng.random::<f64>().max(1e-300)).ln())
            .collect();
        let sum: f64 = coords.iter().sum();
        for c in &mut coords {
            *c /= sum;
        }
        let mut x = DVector::zeros(self.dim);
        for (w, v) in coords.iter().zip(simplex) {
            x += v * *w;
        }
        x
    }
}

/// Fan decomposition of a polytope into simplices from its interior witness
/// (d = 2: triangles; d = 3: tetrahedra via facet fans).
fn triangulate(p: &Polytope) -> Result<Vec<Vec<DVector<f64>>>> {
    let d = p.dimension();
    let c = p.interior_point().clone();
    let mut out = Vec::new();
    match d {
        1 => out.push(p.vertices().to_vec()),
        2 => {
            let order = p.ordered_vertices_2d();
            let nv = order.len();
            for t in 0..nv {
                out.push(vec![
                    c.clone(),
                    p.vertices()[order[t]].clone(),
                    p.vertices()[order[(t + 1) % nv]].clone(),
                ]);
            }
        }
        3 => {
            for j in 0..p.halfspaces().len() {
                let poly = ordered_facet_vertices(p, j);
                let fc = crate::bodies::polytope::centroid(&poly);
                let nv = poly.len();
                for t in 0..nv {
                    out.push(vec![
                        c.clone(),
                        fc.clone(),
                        poly[t].clone(),
                        poly[(t + 1) % nv].clone(),
                    ]);
                }
            }
        }
        _ => {
            return Err(GeomError::Unsupported(
                "volume sampling is implemented for d <= 3".into(),
            ))
        }
    }
    Ok(out)
}

fn simplex_volume(verts: &[DVector<f64>]) -> f64 {
    let d = verts[0].len();
    let mut m = DMatrix::zeros(d, d);
    for (col, v) in verts[1..].iter().enumerate() {
        for r in 0..d {
            m[(r, col)] = v[r] - verts[0][r];
        }
    }
    let mut fact = 1.0;
    for k in 2..=d {
        fact *= k as f64;
    }
    m.determinant().abs() / fact
}

/// The dimension-dependent bound `binomial(2d, d) / 2^d` relating Hilbert to
/// Funk measures: `vol_F <= vol_H <= bound(d) vol_F`.
pub fn hilbert_funk_ratio_bound(d: usize) -> f64 {
    let mut binom = 1.0_f64;
    for k in 0..d {
        binom *= (2 * d - k) as f64 / (k + 1) as f64;
    }
    binom / 2.0_f64.powi(d as i32)
}

/// Funk volume of the cone `Gc` relative to the cone `Kc`: the integral of
/// the dual-cross-section measure over the spherical section of `Gc`,
/// normalized by `omega_{d-1}`.
pub fn cone_funk_volume(
    kc: &PointedCone,
    gc: &PointedCone,
    spec: &QuadratureSpec,
) -> Result<EstimateReport> {
    spec.validate()?;
    for g in gc.generators() {
        if !kc.contains_interior(g, 1e-9) {
            return Err(GeomError::Containment(
                "inner cone is not strictly inside the outer cone".into(),
            ));
        }
    }
    let d = kc.dimension();
    let norm = ball_volume(d - 1);
    match (spec.mode, d) {
        (Mode::Deterministic, 2) => {
            let (lo, hi) = gc.angular_interval();
            let mut f = |t: f64| {
                let s = DVector::from_vec(vec![t.cos(), t.sin()]);
                kc.dual_cross_section(&s).map(|r| r.measure()).unwrap_or(0.0)
            };
            let value = integrate_interval(&mut f, lo, hi, spec.budget) / norm;
            Ok(EstimateReport::exact(value, spec.budget as u64))
        }
        (Mode::Deterministic, _) => Err(GeomError::Unsupported(
            "deterministic cone volume is implemented for d = 2; use Monte-Carlo".into(),
        )),
        (Mode::MonteCarlo, _) => {
            // Uniform sampling of the hemisphere around the inner witness,
            // rejecting directions outside the cone.
            let witness = gc.witness().clone();
            let half = sphere_measure(d) / 2.0;
            let report = run_monte_carlo(spec.budget, spec.seed, 0xc0e, |rng| {
                let mut s = uniform_on_sphere(rng, d);
                if s.dot(&witness) < 0.0 {
                    s = -s;
                }
                if !gc.contains(&s) {
                    return 0.0;
                }
                kc.dual_cross_section(&s).map(|r| r.measure()).unwrap_or(0.0)
            });
            Ok(EstimateReport {
                value: half * report.value / norm,
                std_err: half * report.std_err / norm,
                samples: report.samples,
                seed: report.seed,
            })
        }
    }
}

/// The Funk volume of the hyperplane section `Gc ∩ H` inside `Kc ∩ H`,
/// computed intrinsically in the plane's coordinates. By the projective
/// invariance of the construction this does not depend on the admissible
/// hyperplane chosen.
pub fn cone_section_volume(
    kc: &PointedCone,
    gc: &PointedCone,
    plane: &Hyperplane,
    spec: &QuadratureSpec,
) -> Result<EstimateReport> {
    if !kc.is_admissible(plane) {
        return Err(GeomError::Invariant(
            "hyperplane is not admissible for the outer cone".into(),
        ));
    }
    let basis = plane.basis();
    let to_plane = |v: DVector<f64>| basis.transpose() * (v - plane.base_point());
    let k_verts: Vec<DVector<f64>> = kc
        .section_by_plane(plane)?
        .into_iter()
        .map(&to_plane)
        .collect();
    let g_verts: Vec<DVector<f64>> = gc
        .section_by_plane(plane)?
        .into_iter()
        .map(&to_plane)
        .collect();
    let k_section = ConvexBody::Polytope(Polytope::from_points(&k_verts)?);
    let g_section = ConvexBody::Polytope(Polytope::from_points(&g_verts)?);
    ht_volume(&k_section, &g_section, FinslerKind::Funk, spec)
}

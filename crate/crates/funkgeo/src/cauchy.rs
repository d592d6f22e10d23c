//! Shadow-averaged surface areas: central shadows cast from support points,
//! the spherical shadow-averaging formula for Funk area, its vertex
//! decomposition for polytopal ambient bodies, and the Minkowski
//! (parallel-shadow) limit.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::bodies::cone::{vertex_normal_cone_by_index, PointedCone};
use crate::bodies::{ConvexBody, Ellipsoid, Polytope};
use crate::error::{GeomError, Result};
use crate::geom::hyperplane::{orthonormal_complement, Hyperplane};
use crate::geom::quadrature::{integrate_interval, integrate_piecewise};
use crate::geom::region::EmbeddedRegion;
use crate::geom::sphere::{
    ball_volume, cap_area, sample_in_cap, sphere_measure, spherical_polygon_area,
    uniform_on_sphere,
};
use crate::holmes_thompson::CONTAINMENT_MARGIN;
use crate::report::{run_monte_carlo, substream_rng, EstimateReport, Mode, QuadratureSpec};

/// A central-shadow query: the ambient body, the nested body, and the
/// direction whose support point casts the shadow.
#[derive(Debug, Clone)]
pub struct ShadowQuery<'a> {
    pub k: &'a ConvexBody,
    pub g: &'a ConvexBody,
    pub u: DVector<f64>,
}

impl<'a> ShadowQuery<'a> {
    pub fn new(k: &'a ConvexBody, g: &'a ConvexBody, u: DVector<f64>) -> Result<Self> {
        let margin = crate::bodies::containment_margin(k, g)?;
        if margin < CONTAINMENT_MARGIN {
            return Err(GeomError::Containment(format!(
                "shadow query requires G strictly inside K (margin {margin:.3e})"
            )));
        }
        Ok(ShadowQuery { k, g, u })
    }
}

/// Image of a single point under central projection from `base` onto the
/// plane `{ y : <y, u> = -1 }` (after translating `base` to the origin).
pub fn point_shadow(
    base: &DVector<f64>,
    p: &DVector<f64>,
    u: &DVector<f64>,
) -> Result<DVector<f64>> {
    let w = p - base;
    let dot = w.dot(u);
    if dot >= -1e-12 {
        return Err(GeomError::Containment(
            "point is not on the inner side of the support plane".into(),
        ));
    }
    Ok(w * (-1.0 / dot))
}

/// Central shadow of a finite point set seen from `base`, as a region on the
/// plane `{ <y, u> = -1 }`.
pub fn shadow_of_points(
    base: &DVector<f64>,
    points: &[DVector<f64>],
    u: &DVector<f64>,
) -> Result<EmbeddedRegion> {
    let plane = Hyperplane::new(u.clone(), -1.0)?;
    let vertices = points
        .iter()
        .map(|p| point_shadow(base, p, u))
        .collect::<Result<Vec<_>>>()?;
    EmbeddedRegion::polytopal(plane, vertices)
}

/// Central shadow of `g` as seen from `base` (a boundary point of the
/// ambient body), on the plane `{ <y, u> = -1 }`. For a polytopal `g` the
/// region is the hull of the projected vertices; for an ellipsoidal `g` it
/// is an ellipse obtained from the quadratic cone over `g`.
pub fn shadow_from_base(
    g: &ConvexBody,
    base: &DVector<f64>,
    u: &DVector<f64>,
) -> Result<EmbeddedRegion> {
    match g {
        ConvexBody::Polytope(p) => shadow_of_points(base, p.vertices(), u),
        ConvexBody::Ellipsoid(e) => ellipsoid_shadow(e, base, u),
        ConvexBody::Oracle(_) => Err(GeomError::Unsupported(
            "central shadows of support oracles are not available".into(),
        )),
    }
}

/// Ellipsoidal central shadow. With the apex translated to the origin, the
/// cone over `E' = { (y - m)^T A (y - m) <= 1 }` is `{ y : y^T W y >= 0 }`
/// for `W = A m m^T A - (m^T A m - 1) A`; slicing by `{ <y, u> = -1 }` and
/// completing the square yields a closed-form ellipse in any dimension.
fn ellipsoid_shadow(
    e: &Ellipsoid,
    base: &DVector<f64>,
    u: &DVector<f64>,
) -> Result<EmbeddedRegion> {
    let m = e.center() - base;
    let a = e.form();
    // The whole body must be strictly on the inner side: h_{E'}(u) < 0.
    let support = m.dot(u) + u.dot(&(e.inv_form() * u)).max(0.0).sqrt();
    if support >= -1e-12 {
        return Err(GeomError::Containment(
            "ellipsoid is not strictly on the inner side of the support plane".into(),
        ));
    }
    let am = a * &m;
    let mam = m.dot(&am);
    let w = &am * am.transpose() - a * (mam - 1.0);

    let plane = Hyperplane::new(u.clone(), -1.0)?;
    let basis = plane.basis();
    let y0 = plane.base_point();
    let mm = -(basis.transpose() * &w * &basis);
    let beta = basis.transpose() * (&w * &y0);
    let gamma = y0.dot(&(&w * &y0));
    let t0 = mm
        .clone()
        .lu()
        .solve(&beta)
        .ok_or_else(|| GeomError::Numerical("degenerate shadow quadric".into()))?;
    let rho = gamma + beta.dot(&t0);
    if rho <= 0.0 {
        return Err(GeomError::Numerical("empty ellipsoidal shadow".into()));
    }
    let center = &y0 + &basis * &t0;
    EmbeddedRegion::ellipsoidal(plane, center, basis, mm / rho)
}

/// The central shadow `S(G, u)`: the slice, by the plane tangent to the unit
/// sphere at `-u`, of the cone subtended by `G` at the support point of `K`.
pub fn central_shadow(q: &ShadowQuery) -> Result<EmbeddedRegion> {
    let base = q.k.support_point(&q.u);
    shadow_from_base(q.g, &base, &q.u)
}

/// Measure of the central shadow.
pub fn shadow_measure(q: &ShadowQuery) -> Result<f64> {
    Ok(central_shadow(q)?.measure())
}

/// Alternate shadow-measure evaluator through the gnomonic identity: the
/// integral of `|<s,u>|^{-d}` over the spherical section of the cone of
/// `G - v`, Monte-Carlo sampled from a bounding cap of the section.
pub fn shadow_measure_gnomonic(q: &ShadowQuery, n: usize, seed: u64) -> Result<EstimateReport> {
    let d = q.u.len();
    if !(2..=3).contains(&d) {
        return Err(GeomError::Unsupported(
            "gnomonic shadow evaluation is implemented for d = 2, 3".into(),
        ));
    }
    let base = q.k.support_point(&q.u);
    // Bounding cap of the section directions around the witness direction.
    // Polytopes subtend their widest angle at a vertex, which is exact;
    // smooth bodies get support probes with a safety inflation.
    let witness = (q.g.interior_point() - &base).normalize();
    let mut cap_angle: f64 = 0.0;
    match q.g {
        ConvexBody::Polytope(p) => {
            for v in p.vertices() {
                let ang = (v - &base).normalize().dot(&witness).clamp(-1.0, 1.0).acos();
                cap_angle = cap_angle.max(ang);
            }
            cap_angle += 1e-9;
        }
        _ => {
            let probes = 256;
            for i in 0..probes {
                let dir = probe_direction(d, i, probes, &witness);
                let p = q.g.support_point(&dir);
                let ang = (&p - &base).normalize().dot(&witness).clamp(-1.0, 1.0).acos();
                cap_angle = cap_angle.max(ang);
            }
            cap_angle = cap_angle * 1.05 + 1e-3;
        }
    }
    let cap_angle = cap_angle.min(std::f64::consts::FRAC_PI_2 - 1e-6);
    let g = q.g.clone();
    let u = q.u.clone();
    let total = cap_area(d, cap_angle);
    let report = run_monte_carlo(n, seed, 0x5ad0, move |rng| {
        let s = sample_in_cap(rng, &witness, cap_angle);
        if !crate::crofton::ray_hits(&base, &s, &g) {
            return 0.0;
        }
        s.dot(&u).abs().powi(-(d as i32))
    });
    Ok(EstimateReport {
        value: total * report.value,
        std_err: total * report.std_err,
        samples: report.samples,
        seed: report.seed,
    })
}

fn probe_direction(d: usize, i: usize, n: usize, witness: &DVector<f64>) -> DVector<f64> {
    let basis = orthonormal_complement(witness);
    match d {
        2 => {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            witness * t.cos() + basis.column(0) * t.sin()
        }
        _ => {
            // Low-discrepancy-ish spiral over the sphere.
            let z = -1.0 + 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = 2.399963229728653 * i as f64;
            witness * z + basis.column(0) * (r * phi.cos()) + basis.column(1) * (r * phi.sin())
        }
    }
}

/// Sorted angles of the facet normals of a polygon (the support-point
/// discontinuities of the shadow integrand).
fn polygon_normal_angles(p: &Polytope) -> Vec<f64> {
    let mut angles: Vec<f64> = p
        .halfspaces()
        .iter()
        .map(|h| h.normal[1].atan2(h.normal[0]))
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    angles
}

fn unit2(t: f64) -> DVector<f64> {
    DVector::from_vec(vec![t.cos(), t.sin()])
}

/// Integrates `f` over the full circle, splitting at the given breakpoint
/// angles so that no Gauss node lands on a support-point discontinuity.
fn integrate_circle_piecewise(
    f: &mut dyn FnMut(f64) -> f64,
    mut breaks: Vec<f64>,
    budget: usize,
) -> f64 {
    if breaks.is_empty() {
        return integrate_interval(f, 0.0, std::f64::consts::TAU, budget);
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let start = breaks[0];
    let shifted: Vec<f64> = breaks[1..].to_vec();
    integrate_piecewise(f, start, start + std::f64::consts::TAU, &shifted, budget)
}

/// Funk surface area by shadow averaging: the mean central-shadow measure
/// over all directions, normalized by `omega_{d-1}`. Deterministic
/// piecewise quadrature in d = 2, Monte-Carlo otherwise.
pub fn funk_area_cauchy(
    k: &ConvexBody,
    g: &ConvexBody,
    spec: &QuadratureSpec,
) -> Result<EstimateReport> {
    spec.validate()?;
    ShadowQuery::new(k, g, DVector::zeros(k.dimension()))?;
    let d = k.dimension();
    let norm = ball_volume(d - 1);
    match (spec.mode, d) {
        (Mode::Deterministic, 2) => {
            let breaks = match k {
                ConvexBody::Polytope(p) => polygon_normal_angles(p),
                _ => Vec::new(),
            };
            let mut f = |t: f64| {
                let u = unit2(t);
                let base = k.support_point(&u);
                shadow_from_base(g, &base, &u).map(|r| r.measure()).unwrap_or(0.0)
            };
            let value = integrate_circle_piecewise(&mut f, breaks, spec.budget) / norm;
            Ok(EstimateReport::exact(value, spec.budget as u64))
        }
        (Mode::Deterministic, _) => Err(GeomError::Unsupported(
            "deterministic shadow averaging is implemented for d = 2; use Monte-Carlo".into(),
        )),
        (Mode::MonteCarlo, _) => {
            let total = sphere_measure(d);
            let (k, g) = (k.clone(), g.clone());
            let report = run_monte_carlo(spec.budget, spec.seed, 0xca0c, move |rng| {
                let u = uniform_on_sphere(rng, d);
                let base = k.support_point(&u);
                shadow_from_base(&g, &base, &u).map(|r| r.measure()).unwrap_or(0.0)
            });
            Ok(EstimateReport {
                value: total * report.value / norm,
                std_err: total * report.std_err / norm,
                samples: report.samples,
                seed: report.seed,
            })
        }
    }
}

/// Funk area through the double-integral (gnomonic) form: the outer
/// direction is sampled uniformly, the inner integral over the cone section
/// is itself evaluated by the gnomonic weight. Monte-Carlo only.
pub fn funk_area_double_integral(
    k: &ConvexBody,
    g: &ConvexBody,
    spec: &QuadratureSpec,
) -> Result<EstimateReport> {
    spec.validate()?;
    ShadowQuery::new(k, g, DVector::zeros(k.dimension()))?;
    let d = k.dimension();
    let norm = ball_volume(d - 1);
    let total = sphere_measure(d) * sphere_measure(d) / 2.0;
    let (k, g) = (k.clone(), g.clone());
    let report = run_monte_carlo(spec.budget, spec.seed, 0xdb1, move |rng| {
        let u = uniform_on_sphere(rng, d);
        let base = k.support_point(&u);
        let mut s = uniform_on_sphere(rng, d);
        let dot = s.dot(&u);
        if dot > 0.0 {
            s = -s;
        }
        let dot = s.dot(&u);
        if dot.abs() < 1e-9 {
            return 0.0;
        }
        if !crate::crofton::ray_hits(&base, &s, &g) {
            return 0.0;
        }
        dot.abs().powi(-(d as i32))
    });
    Ok(EstimateReport {
        value: total * report.value / norm,
        std_err: total * report.std_err / norm,
        samples: report.samples,
        seed: report.seed,
    })
}

/// Per-vertex contribution of the vertex decomposition.
#[derive(Debug, Clone)]
pub struct VertexContribution {
    pub vertex: DVector<f64>,
    pub normal_cone: PointedCone,
    /// Spherical measure of the normal cone's patch on the unit sphere.
    pub patch_measure: f64,
    pub value: EstimateReport,
}

/// Vertex decomposition of the Funk area for a polytopal ambient body: the
/// sum over vertices of the cone Funk volumes at each vertex, each evaluated
/// by averaging shadows over the vertex's normal-cone patch.
pub fn funk_area_vertex_decomposition(
    k: &Polytope,
    g: &ConvexBody,
    spec: &QuadratureSpec,
) -> Result<(EstimateReport, Vec<VertexContribution>)> {
    spec.validate()?;
    let kb = ConvexBody::Polytope(k.clone());
    ShadowQuery::new(&kb, g, DVector::zeros(k.dimension()))?;
    let d = k.dimension();
    let norm = ball_volume(d - 1);
    let nv = k.vertices().len();

    let contributions: Vec<Result<VertexContribution>> = (0..nv)
        .into_par_iter()
        .map(|i| -> Result<VertexContribution> {
            let vertex = k.vertices()[i].clone();
            let cone = vertex_normal_cone_by_index(k, i)?;
            match (spec.mode, d) {
                (Mode::Deterministic, 2) => {
                    let (lo, hi) = cone.angular_interval();
                    let budget = ((spec.budget as f64) * (hi - lo)
                        / std::f64::consts::TAU)
                        .ceil() as usize;
                    let mut f = |t: f64| {
                        let u = unit2(t);
                        shadow_from_base(g, &vertex, &u).map(|r| r.measure()).unwrap_or(0.0)
                    };
                    let value = integrate_interval(&mut f, lo, hi, budget.max(32)) / norm;
                    Ok(VertexContribution {
                        vertex,
                        normal_cone: cone,
                        patch_measure: hi - lo,
                        value: EstimateReport::exact(value, budget.max(32) as u64),
                    })
                }
                (Mode::Deterministic, _) => Err(GeomError::Unsupported(
                    "deterministic vertex decomposition is implemented for d = 2".into(),
                )),
                (Mode::MonteCarlo, _) => {
                    let (patch, cap_axis, cap_angle) = normal_patch_geometry(&cone, d)?;
                    let frac = patch / sphere_measure(d);
                    let n = ((spec.budget as f64 * frac).ceil() as usize).max(32);
                    let mut rng = substream_rng(spec.seed, 0xde50, i as u64);
                    let mut sum = 0.0;
                    let mut sumsq = 0.0;
                    let mut accepted = 0usize;
                    let mut attempts = 0usize;
                    while accepted < n {
                        attempts += 1;
                        if attempts > 1000 * n {
                            return Err(GeomError::Numerical(
                                "normal-cone rejection sampling failed to accept".into(),
                            ));
                        }
                        let u = sample_in_cap(&mut rng, &cap_axis, cap_angle);
                        if !cone.contains(&u) {
                            continue;
                        }
                        let m = shadow_from_base(g, &vertex, &u)
                            .map(|r| r.measure())
                            .unwrap_or(0.0);
                        sum += m;
                        sumsq += m * m;
                        accepted += 1;
                    }
                    let mean = sum / n as f64;
                    let var =
                        ((sumsq - n as f64 * mean * mean) / (n as f64 - 1.0).max(1.0)).max(0.0);
                    let scale = patch / norm;
                    Ok(VertexContribution {
                        vertex,
                        normal_cone: cone,
                        patch_measure: patch,
                        value: EstimateReport {
                            value: scale * mean,
                            std_err: scale * (var / n as f64).sqrt(),
                            samples: n as u64,
                            seed: Some(spec.seed),
                        },
                    })
                }
            }
        })
        .collect();

    let mut total = 0.0;
    let mut var = 0.0;
    let mut samples = 0u64;
    let mut out = Vec::with_capacity(nv);
    for c in contributions {
        let c = c?;
        total += c.value.value;
        var += c.value.std_err * c.value.std_err;
        samples += c.value.samples;
        out.push(c);
    }
    let report = EstimateReport {
        value: total,
        std_err: var.sqrt(),
        samples,
        seed: (spec.mode == Mode::MonteCarlo).then_some(spec.seed),
    };
    Ok((report, out))
}

/// Spherical patch measure of a normal cone, together with a bounding cap
/// (axis and angular radius) for rejection sampling. Exact via arc length
/// (d = 2) and spherical excess (d = 3); estimated by rejection counts in
/// higher dimension.
fn normal_patch_geometry(cone: &PointedCone, d: usize) -> Result<(f64, DVector<f64>, f64)> {
    let axis = cone.witness().clone();
    let mut cap_angle: f64 = 0.0;
    for g in cone.generators() {
        cap_angle = cap_angle.max(g.dot(&axis).clamp(-1.0, 1.0).acos());
    }
    let cap_angle = (cap_angle + 1e-9).min(std::f64::consts::FRAC_PI_2 - 1e-12);
    let patch = match d {
        2 => {
            let (lo, hi) = cone.angular_interval();
            hi - lo
        }
        3 => {
            let ordered = order_rays_around(cone.generators(), &axis);
            spherical_polygon_area(&ordered)
        }
        _ => {
            // Rejection estimate of the patch measure inside the cap.
            let mut rng = substream_rng(0xca90, 0, 0);
            let trials = 200_000;
            let mut hit = 0usize;
            for _ in 0..trials {
                let s = rejection_cap_sample(&mut rng, &axis, cap_angle, d);
                if cone.contains(&s) {
                    hit += 1;
                }
            }
            cap_area(d, cap_angle) * hit as f64 / trials as f64
        }
    };
    Ok((patch, axis, cap_angle))
}

/// Uniform cap sample in general dimension via full-sphere rejection.
fn rejection_cap_sample(
    rng: &mut rand_chacha::ChaCha8Rng,
    axis: &DVector<f64>,
    cap_angle: f64,
    d: usize,
) -> DVector<f64> {
    let threshold = cap_angle.cos();
    loop {
        let s = uniform_on_sphere(rng, d);
        if s.dot(axis) >= threshold {
            return s;
        }
    }
}

/// Orders unit rays counterclockwise about an interior axis (d = 3).
fn order_rays_around(rays: &[DVector<f64>], axis: &DVector<f64>) -> Vec<DVector<f64>> {
    let basis = orthonormal_complement(axis);
    let mut keyed: Vec<(f64, DVector<f64>)> = rays
        .iter()
        .map(|r| {
            let x = basis.column(0).dot(r);
            let y = basis.column(1).dot(r);
            (y.atan2(x), r.clone())
        })
        .collect();
    keyed.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    keyed.into_iter().map(|(_, r)| r).collect()
}

/// Parallel (Minkowski) shadow: the projection of `g` onto `u^perp` along
/// the support direction `v_K(u)`, scaled by `1 / h_K(u)`. Containment is
/// not required; the ambient body only supplies the direction field.
pub fn minkowski_shadow(
    k: &ConvexBody,
    g: &ConvexBody,
    u: &DVector<f64>,
) -> Result<EmbeddedRegion> {
    let h = k.support_function(u);
    let origin_interior = match k {
        ConvexBody::Oracle(_) => h > 1e-12 && k.support_function(&(-u)) > 1e-12,
        _ => matches!(
            k.interior_margin(&DVector::zeros(k.dimension())),
            Ok(m) if m > 0.0
        ),
    };
    if !origin_interior {
        return Err(GeomError::Invariant(
            "Minkowski shadows require the origin interior to K".into(),
        ));
    }
    let v = k.support_point(u);
    let plane = Hyperplane::new(u.clone(), 0.0)?;
    let basis = plane.basis();
    let project = |p: &DVector<f64>| -> DVector<f64> { (p - &v * (p.dot(u) / h)) / h };
    match g {
        ConvexBody::Polytope(gp) => {
            let verts: Vec<DVector<f64>> = gp.vertices().iter().map(&project).collect();
            EmbeddedRegion::polytopal(plane, verts)
        }
        ConvexBody::Ellipsoid(e) => {
            // Affine image of an ellipsoid: in-plane inverse form
            // B^T L A^{-1} L^T B for the projection map L.
            let d = k.dimension();
            let l = (DMatrix::identity(d, d) - &v * u.transpose() / h) / h;
            let center = project(e.center());
            let inv_inplane = basis.transpose() * &l * e.inv_form() * l.transpose() * &basis;
            let form = inv_inplane
                .clone()
                .lu()
                .try_inverse()
                .ok_or_else(|| GeomError::Numerical("degenerate Minkowski shadow".into()))?;
            EmbeddedRegion::ellipsoidal(plane, center, basis, form)
        }
        ConvexBody::Oracle(_) => Err(GeomError::Unsupported(
            "Minkowski shadows of support oracles are not available".into(),
        )),
    }
}

/// Holmes-Thompson surface area in the Minkowski geometry with unit ball
/// `K`, by averaging parallel shadows.
pub fn minkowski_area(
    k: &ConvexBody,
    g: &ConvexBody,
    spec: &QuadratureSpec,
) -> Result<EstimateReport> {
    spec.validate()?;
    let d = k.dimension();
    let norm = ball_volume(d - 1);
    match (spec.mode, d) {
        (Mode::Deterministic, 2) => {
            let mut breaks = match k {
                ConvexBody::Polytope(p) => polygon_normal_angles(p),
                _ => Vec::new(),
            };
            if let ConvexBody::Polytope(gp) = g {
                // Width kinks occur at the inner body's edge normals.
                for h in gp.halfspaces() {
                    let t = h.normal[1].atan2(h.normal[0]);
                    breaks.push(t);
                    breaks.push(if t > 0.0 {
                        t - std::f64::consts::PI
                    } else {
                        t + std::f64::consts::PI
                    });
                }
            }
            let mut f = |t: f64| {
                let u = unit2(t);
                minkowski_shadow(k, g, &u).map(|r| r.measure()).unwrap_or(0.0)
            };
            let value = integrate_circle_piecewise(&mut f, breaks, spec.budget) / norm;
            Ok(EstimateReport::exact(value, spec.budget as u64))
        }
        (Mode::Deterministic, _) => Err(GeomError::Unsupported(
            "deterministic Minkowski averaging is implemented for d = 2; use Monte-Carlo".into(),
        )),
        (Mode::MonteCarlo, _) => {
            let total = sphere_measure(d);
            let (k, g) = (k.clone(), g.clone());
            let report = run_monte_carlo(spec.budget, spec.seed, 0x314a, move |rng| {
                let u = uniform_on_sphere(rng, d);
                minkowski_shadow(&k, &g, &u).map(|r| r.measure()).unwrap_or(0.0)
            });
            Ok(EstimateReport {
                value: total * report.value / norm,
                std_err: total * report.std_err / norm,
                samples: report.samples,
                seed: report.seed,
            })
        }
    }
}

/// One row of the scaling study: the blow-up factor and the rescaled Funk
/// area of `G` inside `r K`.
#[derive(Debug, Clone)]
pub struct LimitPoint {
    pub r: f64,
    pub value: EstimateReport,
}

/// Study of the Minkowski limit: `r^{d-1} * funk_area(rK, G)` for each
/// scale, together with the limiting Minkowski area.
#[derive(Debug, Clone)]
pub struct MinkowskiLimitStudy {
    pub points: Vec<LimitPoint>,
    pub limit: EstimateReport,
}

/// Evaluates the rescaled Funk areas along `radii` and the Minkowski area
/// they converge to. The smallest radius must already contain `G`.
pub fn minkowski_limit_study(
    k: &ConvexBody,
    g: &ConvexBody,
    radii: &[f64],
    spec: &QuadratureSpec,
) -> Result<MinkowskiLimitStudy> {
    if radii.is_empty() {
        return Err(GeomError::Invariant("empty radius list".into()));
    }
    let d = k.dimension();
    let mut sorted: Vec<f64> = radii.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut points = Vec::with_capacity(sorted.len());
    for &r in &sorted {
        let scaled = k.scale_about_origin(r);
        let report = funk_area_cauchy(&scaled, g, spec)?;
        points.push(LimitPoint {
            r,
            value: EstimateReport {
                value: report.value * r.powi(d as i32 - 1),
                std_err: report.std_err * r.powi(d as i32 - 1),
                samples: report.samples,
                seed: report.seed,
            },
        });
    }
    let limit = minkowski_area(k, g, spec)?;
    Ok(MinkowskiLimitStudy { points, limit })
}

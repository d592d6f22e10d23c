//! Line-measure representation of Funk surface area: oriented lines based at
//! support points, their density, and the Monte-Carlo line-counting
//! estimator.

use nalgebra::DVector;

use crate::bodies::ConvexBody;
use crate::error::{GeomError, Result};
use crate::geom::sphere::{ball_volume, sphere_measure, uniform_on_sphere};
use crate::holmes_thompson::CONTAINMENT_MARGIN;
use crate::report::{run_monte_carlo, EstimateReport};

/// Guard below which `|<s, u>|` is considered numerically perpendicular;
/// such direction pairs are resampled. Lines that actually meet a strictly
/// nested `G` have `|<s, u>|` bounded away from zero, so the guard only
/// discards non-hitting lines.
pub const PERP_GUARD: f64 = 1e-6;

/// An oriented line through the interior of `K`: the ray from the support
/// point `v_K(u)` in a direction `s` pointing to the inner side.
#[derive(Debug, Clone)]
pub struct OrientedLine {
    /// Support direction whose boundary point the ray starts from.
    pub u: DVector<f64>,
    /// Ray direction, with `<s, u> < 0`.
    pub s: DVector<f64>,
    /// `v_K(u)`.
    pub base: DVector<f64>,
}

impl OrientedLine {
    pub fn new(k: &ConvexBody, u: DVector<f64>, s: DVector<f64>) -> Result<Self> {
        if s.dot(&u) >= 0.0 {
            return Err(GeomError::Invariant(
                "oriented line must point to the inner side: <s, u> < 0".into(),
            ));
        }
        let base = k.support_point(&u);
        Ok(OrientedLine { u, s, base })
    }
}

/// Density of the oriented line measure at the direction pair `(u, s)`:
/// `|<s, u>|^{-d} / omega_{d-1}`.
pub fn line_density(u: &DVector<f64>, s: &DVector<f64>) -> Result<f64> {
    let d = u.len();
    let dot = s.dot(u).abs();
    if dot < PERP_GUARD {
        return Err(GeomError::Numerical(
            "line direction is numerically perpendicular to the support direction".into(),
        ));
    }
    Ok(dot.powi(-(d as i32)) / ball_volume(d - 1))
}

/// Whether the ray `{ base + t s : t >= 0 }` meets the body.
pub fn ray_hits(base: &DVector<f64>, dir: &DVector<f64>, g: &ConvexBody) -> bool {
    match g {
        ConvexBody::Polytope(p) => {
            let mut t_lo = 0.0_f64;
            let mut t_hi = f64::INFINITY;
            for h in p.halfspaces() {
                let along = h.normal.dot(dir);
                let room = h.offset - h.normal.dot(base);
                if along.abs() < 1e-15 {
                    if room < 0.0 {
                        return false;
                    }
                } else if along > 0.0 {
                    t_hi = t_hi.min(room / along);
                } else {
                    t_lo = t_lo.max(room / along);
                }
                if t_lo > t_hi {
                    return false;
                }
            }
            true
        }
        ConvexBody::Ellipsoid(e) => {
            let z = base - e.center();
            let a = dir.dot(&(e.form() * dir));
            let b = dir.dot(&(e.form() * &z));
            let g0 = z.dot(&(e.form() * &z)) - 1.0;
            let disc = b * b - a * g0;
            if disc < 0.0 {
                return false;
            }
            // Larger root must be nonnegative for the forward ray to reach.
            -b + disc.sqrt() >= 0.0
        }
        ConvexBody::Oracle(_) => false,
    }
}

/// Whether the oriented line meets `G`.
pub fn ray_intersects(line: &OrientedLine, g: &ConvexBody) -> bool {
    ray_hits(&line.base, &line.s, g)
}

/// Monte-Carlo estimate of the Funk surface area of `G` inside `K` as the
/// line measure of the set of lines meeting `G`: directions `u` uniform on
/// the sphere, `s` uniform on the inner hemisphere, each hit weighted by the
/// importance ratio of the line density to the sampling density.
///
/// `g = None` stands for an empty inner body and estimates 0.
pub fn crofton_estimate(
    k: &ConvexBody,
    g: Option<&ConvexBody>,
    n: usize,
    seed: u64,
) -> Result<EstimateReport> {
    if n == 0 {
        return Err(GeomError::Invariant("line sample count must be >= 1".into()));
    }
    let d = k.dimension();
    if let Some(g) = g {
        let margin = crate::bodies::containment_margin(k, g)?;
        if margin < CONTAINMENT_MARGIN {
            return Err(GeomError::Containment(format!(
                "line estimator requires G strictly inside K (margin {margin:.3e})"
            )));
        }
    }
    // Sampling density over (u, s): uniform x uniform-hemisphere; the
    // importance weight is sigma(S^{d-1}) * (sigma(S^{d-1}) / 2) times the
    // line density.
    let total = sphere_measure(d) * sphere_measure(d) / 2.0;
    let k = k.clone();
    let g = g.cloned();
    let report = run_monte_carlo(n, seed, 0xc50f, move |rng| {
        let u = uniform_on_sphere(rng, d);
        let s = loop {
            let mut s = uniform_on_sphere(rng, d);
            let dot = s.dot(&u);
            if dot > 0.0 {
                s = -s;
            }
            if s.dot(&u).abs() >= PERP_GUARD {
                break s;
            }
        };
        let Some(g) = &g else { return 0.0 };
        let base = k.support_point(&u);
        if !ray_hits(&base, &s, g) {
            return 0.0;
        }
        s.dot(&u).abs().powi(-(d as i32))
    });
    let norm = ball_volume(d - 1);
    Ok(EstimateReport {
        value: total * report.value / norm,
        std_err: total * report.std_err / norm,
        samples: report.samples,
        seed: report.seed,
    })
}

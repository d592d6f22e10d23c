//! Sphere measures, reproducible uniform sampling, spherical caps and
//! polygons, and gnomonic area integration.

use std::sync::atomic::{AtomicBool, Ordering};

use nalgebra::DVector;
use rand::{Rng, RngExt};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{GeomError, Result};
use crate::geom::hyperplane::{orthonormal_complement, EQUATOR_GUARD};
use crate::geom::quadrature::{gauss_legendre, integrate_interval};
use crate::report::{run_monte_carlo, substream_rng, EstimateReport, Mode, QuadratureSpec};

/// Volume of the unit ball in `R^d` (`omega_d`), via the two-step recurrence
/// `omega_d = omega_{d-2} * 2 pi / d`.
pub fn ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => ball_volume(d - 2) * std::f64::consts::TAU / d as f64,
    }
}

/// Surface measure of the unit sphere `S^{d-1}`, i.e. `d * omega_d`.
pub fn sphere_measure(d: usize) -> f64 {
    d as f64 * ball_volume(d)
}

/// One uniform point on `S^{d-1}` (normalized Gaussian vector).
pub fn uniform_on_sphere(rng: &mut impl Rng, d: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(d, |_, _| -> f64 { StandardNormal.sample(rng) });
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

/// Reproducible uniform sampler on `S^{d-1}`: the same seed and dimension
/// always yield the same stream.
#[derive(Debug, Clone, Copy)]
pub struct SphereSampler {
    seed: u64,
    dimension: usize,
}

impl SphereSampler {
    pub fn new(seed: u64, dimension: usize) -> Result<Self> {
        if dimension < 2 {
            return Err(GeomError::Invariant("sampler dimension must be >= 2".into()));
        }
        Ok(SphereSampler { seed, dimension })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// An independent generator for the given substream index.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        substream_rng(self.seed, 0x5fe7e, stream)
    }

    /// `n` i.i.d. uniform unit vectors from substream 0.
    pub fn sample(&self, n: usize) -> Vec<DVector<f64>> {
        let mut rng = self.rng(0);
        (0..n)
            .map(|_| uniform_on_sphere(&mut rng, self.dimension))
            .collect()
    }
}

/// Surface measure of the spherical cap of angular radius `half_angle`:
/// `sigma(S^{d-2}) * integral_0^a sin^{d-2}`.
pub fn cap_area(d: usize, half_angle: f64) -> f64 {
    match d {
        2 => 2.0 * half_angle,
        3 => std::f64::consts::TAU * (1.0 - half_angle.cos()),
        _ => {
            let ring = sphere_measure(d - 1);
            let mut f = |t: f64| t.sin().powi(d as i32 - 2);
            ring * integrate_interval(&mut f, 0.0, half_angle, 256)
        }
    }
}

/// Uniform sample from the spherical cap around `axis` (d = 2 or 3).
pub fn sample_in_cap(rng: &mut impl Rng, axis: &DVector<f64>, half_angle: f64) -> DVector<f64> {
    let d = axis.len();
    match d {
        2 => {
            let base = axis[1].atan2(axis[0]);
            let t: f64 = rng.random_range(-half_angle..=half_angle);
            let phi = base + t;
            DVector::from_vec(vec![phi.cos(), phi.sin()])
        }
        3 => {
            // Cap area element is proportional to dz on [cos a, 1].
            let z: f64 = rng.random_range(half_angle.cos()..=1.0);
            let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let r = (1.0 - z * z).max(0.0_f64).sqrt();
            let basis = orthonormal_complement(axis);
            axis * z + basis.column(0) * (r * phi.cos()) + basis.column(1) * (r * phi.sin())
        }
        _ => panic!("cap sampling implemented for d = 2, 3"),
    }
}

/// Area of a geodesically convex spherical polygon on `S^2` with unit
/// vertices in boundary order, via the angular excess.
pub fn spherical_polygon_area(rays: &[DVector<f64>]) -> f64 {
    let n = rays.len();
    assert!(n >= 3, "spherical polygon needs >= 3 vertices");
    let mut angles = 0.0;
    for i in 0..n {
        let v = &rays[i];
        let prev = &rays[(i + n - 1) % n];
        let next = &rays[(i + 1) % n];
        let tp = (prev - v * v.dot(prev)).normalize();
        let tn = (next - v * v.dot(next)).normalize();
        angles += tp.dot(&tn).clamp(-1.0, 1.0).acos();
    }
    angles - (n as f64 - 2.0) * std::f64::consts::PI
}

/// A region on the sphere, strictly inside an open hemisphere.
pub enum SphericalRegion<'a> {
    /// Spherical cap of the given angular radius around `axis`.
    Cap { axis: DVector<f64>, half_angle: f64 },
    /// Arbitrary measurable region given by a membership test.
    Membership(&'a (dyn Fn(&DVector<f64>) -> bool + Sync)),
}

/// The `(d-1)`-measure of the gnomonic projection of a spherical region onto
/// the dual plane `u*`, computed as the weighted spherical integral of
/// `|<x,u>|^{-d}` over the region.
pub fn gnomonic_area(
    u: &DVector<f64>,
    region: &SphericalRegion,
    spec: &QuadratureSpec,
) -> Result<EstimateReport> {
    spec.validate()?;
    let d = u.len();
    if let SphericalRegion::Cap { axis, half_angle } = region {
        let tilt = u.dot(axis).clamp(-1.0, 1.0).acos();
        if tilt + half_angle >= std::f64::consts::FRAC_PI_2 - 1e-9 {
            return Err(GeomError::Numerical(
                "spherical cap reaches the equator of u: projected area diverges".into(),
            ));
        }
    }
    match (spec.mode, region) {
        (Mode::Deterministic, SphericalRegion::Cap { axis, half_angle }) => match d {
            2 => {
                let base_u = u[1].atan2(u[0]);
                let base_a = axis[1].atan2(axis[0]);
                let mut f = |phi: f64| (phi - base_u).cos().powi(-2);
                let v = integrate_interval(&mut f, base_a - half_angle, base_a + half_angle, spec.budget);
                Ok(EstimateReport::exact(v, spec.budget as u64))
            }
            3 => {
                let basis = orthonormal_complement(axis);
                let n_phi = ((spec.budget as f64).sqrt().ceil() as usize).max(16);
                let n_psi = (spec.budget / n_phi).max(8);
                let gl = gauss_legendre(n_psi);
                let mut total = 0.0;
                for &(xg, wg) in &gl {
                    let psi = 0.5 * (xg + 1.0) * half_angle;
                    let wpsi = 0.5 * half_angle * wg * psi.sin();
                    for k in 0..n_phi {
                        let phi = std::f64::consts::TAU * k as f64 / n_phi as f64;
                        let x = axis * psi.cos()
                            + basis.column(0) * (psi.sin() * phi.cos())
                            + basis.column(1) * (psi.sin() * phi.sin());
                        total += wpsi * (std::f64::consts::TAU / n_phi as f64)
                            * x.dot(u).abs().powi(-(d as i32));
                    }
                }
                Ok(EstimateReport::exact(total, (n_psi * n_phi) as u64))
            }
            _ => Err(GeomError::Unsupported(
                "deterministic gnomonic quadrature is implemented for d <= 3; use Monte-Carlo".into(),
            )),
        },
        (Mode::Deterministic, SphericalRegion::Membership(member)) => {
            if d != 2 {
                return Err(GeomError::Unsupported(
                    "deterministic membership-region quadrature is implemented for d = 2".into(),
                ));
            }
            let mut total = 0.0;
            for (phi, w) in crate::geom::quadrature::circle_quadrature(spec.budget.max(4)) {
                let x = DVector::from_vec(vec![phi.cos(), phi.sin()]);
                if member(&x) {
                    let dot = x.dot(u).abs();
                    if dot <= EQUATOR_GUARD {
                        return Err(GeomError::Numerical(
                            "membership region touches the equator of u".into(),
                        ));
                    }
                    total += w * dot.powi(-2);
                }
            }
            Ok(EstimateReport::exact(total, spec.budget as u64))
        }
        (Mode::MonteCarlo, SphericalRegion::Cap { axis, half_angle }) if d <= 3 => {
            // Sample within the cap itself: no indicator variance.
            let total = cap_area(d, *half_angle);
            let axis = axis.clone();
            let half_angle = *half_angle;
            let report = run_monte_carlo(spec.budget, spec.seed, 0x6e0a, move |rng| {
                let x = sample_in_cap(rng, &axis, half_angle);
                total * x.dot(u).abs().powi(-(d as i32))
            });
            Ok(report)
        }
        (Mode::MonteCarlo, region) => {
            let member = |x: &DVector<f64>| match region {
                SphericalRegion::Cap { axis, half_angle } => x.dot(axis) >= half_angle.cos(),
                SphericalRegion::Membership(f) => f(x),
            };
            let tripped = AtomicBool::new(false);
            let total = sphere_measure(d);
            let report = run_monte_carlo(spec.budget, spec.seed, 0x6e0a, |rng| {
                let x = uniform_on_sphere(rng, d);
                if !member(&x) {
                    return 0.0;
                }
                let dot = x.dot(u).abs();
                if dot <= EQUATOR_GUARD {
                    tripped.store(true, Ordering::Relaxed);
                    return 0.0;
                }
                total * dot.powi(-(d as i32))
            });
            if tripped.load(Ordering::Relaxed) {
                return Err(GeomError::Numerical(
                    "membership region touches the equator of u".into(),
                ));
            }
            Ok(report)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::dvector;

    #[test]
    fn ball_volumes_match_known_values() {
        assert_relative_eq!(ball_volume(1), 2.0);
        assert_relative_eq!(ball_volume(2), std::f64::consts::PI);
        assert_relative_eq!(ball_volume(3), 4.0 * std::f64::consts::PI / 3.0);
        assert_relative_eq!(sphere_measure(2), std::f64::consts::TAU);
        assert_relative_eq!(sphere_measure(3), 4.0 * std::f64::consts::PI);
    }

    #[test]
    fn sphere_samples_are_unit_and_reproducible() {
        let sampler = SphereSampler::new(42, 3).unwrap();
        let a = sampler.sample(100);
        let b = sampler.sample(100);
        for (x, y) in a.iter().zip(&b) {
            assert_relative_eq!(x.norm(), 1.0, epsilon = 1e-12);
            assert_eq!(x, y);
        }
    }

    #[test]
    fn sphere_sample_mean_is_near_zero() {
        // CLT bound: each coordinate mean is within ~3/sqrt(n).
        let n = 1_000_000;
        let sampler = SphereSampler::new(7, 3).unwrap();
        let mut rng = sampler.rng(0);
        let mut mean = DVector::zeros(3);
        for _ in 0..n {
            mean += uniform_on_sphere(&mut rng, 3);
        }
        mean /= n as f64;
        assert!(mean.norm() < 0.005, "mean norm {}", mean.norm());
    }

    #[test]
    fn cap_areas() {
        assert_relative_eq!(cap_area(2, 0.3), 0.6, epsilon = 1e-14);
        assert_relative_eq!(
            cap_area(3, std::f64::consts::FRAC_PI_2),
            std::f64::consts::TAU,
            epsilon = 1e-12
        );
        // d = 4 quadrature agrees with the closed form
        // sigma_cap = sigma(S^2) * int sin^2 = 4 pi (a - sin a cos a) / 2.
        let a: f64 = 0.8;
        assert_relative_eq!(
            cap_area(4, a),
            4.0 * std::f64::consts::PI * (a - a.sin() * a.cos()) / 2.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn cap_samples_stay_in_cap() {
        let mut rng = substream_rng(1, 2, 3);
        let axis = dvector![0.0, 0.6, 0.8];
        for _ in 0..200 {
            let x = sample_in_cap(&mut rng, &axis, 0.4);
            assert_relative_eq!(x.norm(), 1.0, epsilon = 1e-12);
            assert!(x.dot(&axis) >= 0.4_f64.cos() - 1e-12);
        }
    }

    #[test]
    fn octant_has_area_pi_over_2() {
        let octant = [
            dvector![1.0, 0.0, 0.0],
            dvector![0.0, 1.0, 0.0],
            dvector![0.0, 0.0, 1.0],
        ];
        assert_relative_eq!(
            spherical_polygon_area(&octant),
            std::f64::consts::FRAC_PI_2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn gnomonic_cap_matches_tangent_formulas() {
        // d = 2: arc of half-angle pi/4 centered at u projects to length 2 tan(pi/4) = 2.
        let u = dvector![0.0, 1.0];
        let spec = QuadratureSpec::deterministic(512);
        let r = gnomonic_area(
            &u,
            &SphericalRegion::Cap { axis: u.clone(), half_angle: std::f64::consts::FRAC_PI_4 },
            &spec,
        )
        .unwrap();
        assert_relative_eq!(r.value, 2.0, epsilon = 1e-9);

        // Shrinking cap projects to vanishing measure.
        let r0 = gnomonic_area(
            &u,
            &SphericalRegion::Cap { axis: u.clone(), half_angle: 1e-6 },
            &spec,
        )
        .unwrap();
        assert!(r0.value < 1e-5);

        // d = 3: cap of half-angle pi/6 centered at u projects to a disk of
        // radius tan(pi/6), area pi/3.
        let u3 = dvector![0.0, 0.0, 1.0];
        let r3 = gnomonic_area(
            &u3,
            &SphericalRegion::Cap { axis: u3.clone(), half_angle: std::f64::consts::FRAC_PI_6 },
            &QuadratureSpec::deterministic(4096),
        )
        .unwrap();
        assert_relative_eq!(r3.value, std::f64::consts::PI / 3.0, epsilon = 1e-8);
    }

    /// Independent oracle for the projected cap: the slice of the quadratic
    /// cone `{ y : y^T (a a^T - cos^2(t) I) y >= 0 }` by the plane
    /// `{ <y, u> = 1 }`, completed to an in-plane ellipse.
    fn projected_cap_region(
        u: &DVector<f64>,
        axis: &DVector<f64>,
        half_angle: f64,
    ) -> crate::geom::region::EmbeddedRegion {
        use crate::geom::hyperplane::Hyperplane;
        let d = u.len();
        let c = half_angle.cos();
        let w = axis * axis.transpose() - nalgebra::DMatrix::identity(d, d) * (c * c);
        let plane = Hyperplane::new(u.clone(), 1.0).unwrap();
        let basis = plane.basis();
        let y0 = plane.base_point();
        let m = -(basis.transpose() * &w * &basis);
        let beta = basis.transpose() * (&w * &y0);
        let gamma = y0.dot(&(&w * &y0));
        let t0 = m.clone().lu().solve(&beta).unwrap();
        let rho = gamma + beta.dot(&t0);
        let center = &y0 + &basis * &t0;
        crate::geom::region::EmbeddedRegion::ellipsoidal(plane, center, basis, m / rho).unwrap()
    }

    #[test]
    fn gnomonic_consistency_on_random_tilted_caps() {
        use rand::RngExt;
        let mut rng = substream_rng(31, 0, 0);
        for d in [2usize, 3] {
            for _ in 0..10 {
                let u = uniform_on_sphere(&mut rng, d);
                let half_angle = rng.random_range(0.05..0.5);
                // Tilt the axis but keep the cap inside the open hemisphere.
                let tilt: f64 = rng.random_range(0.0..(1.3 - half_angle));
                let axis = sample_in_cap(&mut rng, &u, tilt.max(1e-3));
                let expect = projected_cap_region(&u, &axis, half_angle).measure();

                let det = gnomonic_area(
                    &u,
                    &SphericalRegion::Cap { axis: axis.clone(), half_angle },
                    &QuadratureSpec::deterministic(4096),
                )
                .unwrap();
                assert_relative_eq!(det.value, expect, max_relative = 1e-6);

                let mc = gnomonic_area(
                    &u,
                    &SphericalRegion::Cap { axis, half_angle },
                    &QuadratureSpec::monte_carlo(200_000, 5),
                )
                .unwrap();
                assert!(
                    (mc.value - expect).abs() / expect < 0.005,
                    "d={d}: MC {} vs {}",
                    mc.value,
                    expect
                );
            }
        }
    }

    #[test]
    fn gnomonic_monte_carlo_agrees() {
        let u3 = dvector![0.0, 0.0, 1.0];
        let r = gnomonic_area(
            &u3,
            &SphericalRegion::Cap { axis: u3.clone(), half_angle: std::f64::consts::FRAC_PI_6 },
            &QuadratureSpec::monte_carlo(400_000, 11),
        )
        .unwrap();
        let exact = std::f64::consts::PI / 3.0;
        assert!((r.value - exact).abs() < 4.0 * r.std_err.max(1e-4));
        assert!((r.value - exact).abs() / exact < 0.005);
    }

    #[test]
    fn gnomonic_rejects_equatorial_caps_and_zero_budget() {
        let u = dvector![0.0, 1.0];
        let sideways = dvector![1.0, 0.0];
        let res = gnomonic_area(
            &u,
            &SphericalRegion::Cap { axis: sideways, half_angle: 0.3 },
            &QuadratureSpec::deterministic(64),
        );
        assert!(matches!(res, Err(GeomError::Numerical(_))));

        let res = gnomonic_area(
            &u,
            &SphericalRegion::Cap { axis: u.clone(), half_angle: 0.3 },
            &QuadratureSpec::deterministic(0),
        );
        assert!(matches!(res, Err(GeomError::Invariant(_))));
    }
}

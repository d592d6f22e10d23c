//! Property tests for the geometric invariants: duality, support calculus,
//! metric identities, and estimator monotonicity.

use nalgebra::DVector;
use proptest::prelude::*;

use funkgeo::bodies::{
    containment_margin, difference_body, gauge, polar_body, ConvexBody, Polytope,
};
use funkgeo::crofton::crofton_estimate;
use funkgeo::geom::hyperplane::dual_hyperplane;
use funkgeo::metrics::{funk_distance, funk_norm, hilbert_norm};

fn vec2(x: f64, y: f64) -> DVector<f64> {
    DVector::from_vec(vec![x, y])
}

/// Strategy: a convex polygon as the hull of 4-10 points in a disk of
/// radius ~1, rejecting degenerate clouds.
fn polygon_strategy() -> impl Strategy<Value = Polytope> {
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 4..10).prop_filter_map(
        "full-dimensional hull",
        |pts| {
            let points: Vec<DVector<f64>> = pts.iter().map(|&(x, y)| vec2(x, y)).collect();
            Polytope::from_points(&points).ok()
        },
    )
}

proptest! {
    #[test]
    fn dual_hyperplane_homogeneity(
        x in -5.0..5.0f64,
        y in -5.0..5.0f64,
        z in -5.0..5.0f64,
        alpha in 0.1..10.0f64,
    ) {
        let v = DVector::from_vec(vec![x, y, z]);
        prop_assume!(v.norm() > 1e-6);
        let h1 = dual_hyperplane(&v).unwrap();
        let h2 = dual_hyperplane(&(&v * alpha)).unwrap();
        // offset(alpha z) = offset(z) / alpha, same normal.
        prop_assert!((h2.offset() - h1.offset() / alpha).abs() <= 1e-12 * h1.offset().abs());
        prop_assert!((h2.normal() - h1.normal()).norm() <= 1e-12);
    }

    #[test]
    fn support_point_attains_support_function(k in polygon_strategy(), t in 0.0..std::f64::consts::TAU) {
        let u = vec2(t.cos(), t.sin());
        let h = k.support_function(&u);
        let p = k.support_point(&u);
        prop_assert!((p.dot(&u) - h).abs() <= 1e-12 * (1.0 + h.abs()));
    }

    #[test]
    fn support_function_is_sublinear(
        k in polygon_strategy(),
        a in 0.0..std::f64::consts::TAU,
        b in 0.0..std::f64::consts::TAU,
    ) {
        let u = vec2(a.cos(), a.sin());
        let w = vec2(b.cos(), b.sin());
        let sum = &u + &w;
        let lhs = k.support_function(&sum);
        let rhs = k.support_function(&u) + k.support_function(&w);
        prop_assert!(lhs <= rhs + 1e-12);
    }

    #[test]
    fn bipolar_is_identity_on_polygons(k in polygon_strategy()) {
        // Recenter so the origin is interior.
        let c = k.interior_point().clone();
        let k = k.translate(&(-c));
        let back = k.polar().unwrap().polar().unwrap();
        prop_assert_eq!(back.vertices().len(), k.vertices().len());
        for v in k.vertices() {
            prop_assert!(back.vertex_index(v).is_some());
        }
    }

    #[test]
    fn polarity_reverses_inclusion(k in polygon_strategy(), shrink in 0.2..0.9f64) {
        let c = k.interior_point().clone();
        let outer = ConvexBody::Polytope(k.translate(&(-c)));
        let inner = outer.scale_about_origin(shrink);
        let outer_polar = polar_body(&outer).unwrap();
        let inner_polar = polar_body(&inner).unwrap();
        // inner subset outer implies polar(outer) subset polar(inner).
        for v in outer_polar.as_polytope().unwrap().vertices() {
            prop_assert!(inner_polar.as_polytope().unwrap().contains(v));
        }
    }

    #[test]
    fn gauge_is_positively_homogeneous(
        k in polygon_strategy(),
        t in 0.0..std::f64::consts::TAU,
        alpha in 0.1..5.0f64,
    ) {
        let c = k.interior_point().clone();
        let body = ConvexBody::Polytope(k.translate(&(-c)));
        let x = vec2(t.cos(), t.sin());
        let g1 = gauge(&body, &x).unwrap();
        let g2 = gauge(&body, &(&x * alpha)).unwrap();
        prop_assert!((g2 - alpha * g1).abs() <= 1e-9 * (1.0 + g2.abs()));
    }

    #[test]
    fn difference_body_is_symmetric_and_translation_invariant(
        k in polygon_strategy(),
        dx in -0.5..0.5f64,
        dy in -0.5..0.5f64,
        t in 0.0..std::f64::consts::TAU,
    ) {
        let body = ConvexBody::Polytope(k);
        let delta = difference_body(&body);
        let shifted = difference_body(&body.translate(&vec2(dx, dy)));
        let u = vec2(t.cos(), t.sin());
        // Symmetry: h(u) = h(-u); translation invariance: equal supports.
        let h = delta.support_function(&u);
        prop_assert!((h - delta.support_function(&(-&u))).abs() <= 1e-9 * (1.0 + h.abs()));
        prop_assert!((h - shifted.support_function(&u)).abs() <= 1e-9 * (1.0 + h.abs()));
    }

    #[test]
    fn funk_norms_and_distances_are_consistent(
        x in -0.6..0.6f64,
        y in -0.6..0.6f64,
        vx in -1.0..1.0f64,
        vy in -1.0..1.0f64,
    ) {
        let k = ConvexBody::ball(DVector::zeros(2), 1.0).unwrap();
        let p = vec2(x, y);
        let v = vec2(vx, vy);
        prop_assume!(v.norm() > 1e-3);
        // The Hilbert norm is the symmetrization of the Funk norm.
        let f_plus = funk_norm(&k, &p, &v).unwrap();
        let f_minus = funk_norm(&k, &p, &(-&v)).unwrap();
        let h = hilbert_norm(&k, &p, &v).unwrap();
        prop_assert!((h - 0.5 * (f_plus + f_minus)).abs() <= 1e-12);
        // Positive homogeneity of the Funk norm.
        let f2 = funk_norm(&k, &p, &(&v * 2.0)).unwrap();
        prop_assert!((f2 - 2.0 * f_plus).abs() <= 1e-10 * (1.0 + f2));
    }

    #[test]
    fn funk_distance_is_nonnegative_and_triangular(
        ax in -0.6..0.6f64, ay in -0.6..0.6f64,
        bx in -0.6..0.6f64, by in -0.6..0.6f64,
        cx in -0.6..0.6f64, cy in -0.6..0.6f64,
    ) {
        let k = ConvexBody::ball(DVector::zeros(2), 1.0).unwrap();
        let (a, b, c) = (vec2(ax, ay), vec2(bx, by), vec2(cx, cy));
        let dab = funk_distance(&k, &a, &b).unwrap();
        let dbc = funk_distance(&k, &b, &c).unwrap();
        let dac = funk_distance(&k, &a, &c).unwrap();
        prop_assert!(dab >= 0.0 && dbc >= 0.0 && dac >= 0.0);
        prop_assert!(dac <= dab + dbc + 1e-12);
    }
}

/// Shadow containment monotonicity, on explicit nested polygons (plain
/// seeded loop: the hull-membership check needs constructed pairs).
#[test]
fn shadow_containment_is_monotone() {
    use funkgeo::cauchy::{central_shadow, ShadowQuery};
    use funkgeo::report::substream_rng;
    use rand::RngExt;

    let mut rng = substream_rng(8101, 0, 0);
    let k = ConvexBody::ball(DVector::zeros(2), 1.0).unwrap();
    for _ in 0..25 {
        let raw = funkgeo::bodies::random::random_polygon(&mut rng, 7, 0.45);
        // Recenter so scaling about the origin nests the copies.
        let outer = raw.translate(&(-raw.interior_point().clone()));
        let inner_body = ConvexBody::Polytope(outer.clone()).scale_about_origin(0.6);
        let outer_body = ConvexBody::Polytope(outer);
        let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let u = vec2(t.cos(), t.sin());
        let qi = ShadowQuery::new(&k, &inner_body, u.clone()).unwrap();
        let qo = ShadowQuery::new(&k, &outer_body, u).unwrap();
        let si = central_shadow(&qi).unwrap();
        let so = central_shadow(&qo).unwrap();
        // Vertexwise hull containment in plane coordinates.
        let basis = so.plane.basis();
        let outer_pts: Vec<(f64, f64)> = so
            .vertices()
            .unwrap()
            .iter()
            .map(|v| {
                let c = so.plane.local_coords(&basis, v);
                (c[0], 0.0)
            })
            .collect();
        let (lo, hi) = outer_pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| {
            (l.min(p.0), h.max(p.0))
        });
        for v in si.vertices().unwrap() {
            let c = so.plane.local_coords(&basis, v);
            assert!(c[0] >= lo - 1e-9 && c[0] <= hi + 1e-9);
        }
        assert!(si.measure() <= so.measure() + 1e-12);
    }
}

/// Crofton estimates are pathwise monotone under common random numbers for
/// every seed in a sweep.
#[test]
fn crofton_pathwise_monotonicity() {
    let k = ConvexBody::ball(DVector::zeros(2), 1.0).unwrap();
    for seed in 0..10u64 {
        let small = crofton_estimate(&k, Some(&ConvexBody::ball(DVector::zeros(2), 0.25).unwrap()), 8_000, seed)
            .unwrap();
        let mid = crofton_estimate(&k, Some(&ConvexBody::ball(DVector::zeros(2), 0.45).unwrap()), 8_000, seed)
            .unwrap();
        let large = crofton_estimate(&k, Some(&ConvexBody::ball(DVector::zeros(2), 0.65).unwrap()), 8_000, seed)
            .unwrap();
        assert!(small.value <= mid.value && mid.value <= large.value, "seed {seed}");
    }
}

/// The Hilbert area equals the Funk area in the plane and for ellipsoids.
#[test]
fn exactness_of_hilbert_equals_funk() {
    use funkgeo::holmes_thompson::{funk_area_direct, hilbert_area_direct};
    use funkgeo::report::{substream_rng, QuadratureSpec};

    let mut rng = substream_rng(8102, 0, 0);
    let spec = QuadratureSpec::deterministic(4096);
    // Planar: any K.
    for _ in 0..5 {
        let (k, g) = {
            use funkgeo::bodies::random::{random_nested_pair, BodyKind};
            random_nested_pair(&mut rng, 2, BodyKind::Polytope, BodyKind::Ellipsoid)
        };
        let f = funk_area_direct(&k, &g, &spec).unwrap().value;
        let h = hilbert_area_direct(&k, &g, &spec).unwrap().value;
        assert!((h - f).abs() / f < 1e-5, "planar exactness: {h} vs {f}");
    }
    // Ellipsoidal K in d = 3.
    for _ in 0..3 {
        let (k, g) = {
            use funkgeo::bodies::random::{random_nested_pair, BodyKind};
            random_nested_pair(&mut rng, 3, BodyKind::Ellipsoid, BodyKind::Polytope)
        };
        let spec3 = QuadratureSpec::deterministic(20_000);
        let f = funk_area_direct(&k, &g, &spec3).unwrap().value;
        let h = hilbert_area_direct(&k, &g, &spec3).unwrap().value;
        assert!((h - f).abs() / f < 1e-9, "ellipsoidal exactness: {h} vs {f}");
    }
}

/// Containment margins agree with explicit gauge evaluations on nested
/// random pairs.
#[test]
fn containment_margin_matches_definition() {
    use funkgeo::bodies::random::{random_nested_pair, BodyKind};
    use funkgeo::report::substream_rng;

    let mut rng = substream_rng(8103, 0, 0);
    for d in [2usize, 3] {
        for _ in 0..10 {
            let (k, g) = random_nested_pair(&mut rng, d, BodyKind::Polytope, BodyKind::Polytope);
            let margin = containment_margin(&k, &g).unwrap();
            let c = k.interior_point();
            let worst = g
                .as_polytope()
                .unwrap()
                .vertices()
                .iter()
                .map(|v| k.gauge_from(&c, v).unwrap())
                .fold(0.0, f64::max);
            assert!((margin - (1.0 - worst)).abs() < 1e-9);
        }
    }
}

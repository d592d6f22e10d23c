//! The Funk and Hilbert distances, Finsler norms, and Finsler balls induced
//! by a convex body.

use nalgebra::DVector;

use crate::bodies::{difference_body, polar_body, ConvexBody};
use crate::error::{GeomError, Result};

fn require_interior(k: &ConvexBody, x: &DVector<f64>, who: &str) -> Result<()> {
    if k.interior_margin(x)? <= 1e-12 {
        return Err(GeomError::Invariant(format!(
            "{who} must be strictly interior to the body"
        )));
    }
    Ok(())
}

/// Funk distance: `ln(|x - y'| / |y - y'|)` with `y'` the boundary exit of
/// the ray from `x` through `y`. Asymmetric; zero iff `x = y`.
pub fn funk_distance(k: &ConvexBody, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
    require_interior(k, x, "x")?;
    require_interior(k, y, "y")?;
    let dir = y - x;
    if dir.norm() <= 1e-15 * (1.0 + x.norm()) {
        return Ok(0.0);
    }
    let (_, t) = k.ray_exit(x, &dir)?;
    // |x - y'| = t |y - x|, |y - y'| = (t - 1) |y - x|.
    Ok((t / (t - 1.0)).ln())
}

/// Hilbert distance: the symmetrization `(d_F(x,y) + d_F(y,x)) / 2`.
pub fn hilbert_distance(k: &ConvexBody, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
    Ok(0.5 * (funk_distance(k, x, y)? + funk_distance(k, y, x)?))
}

/// Funk Finsler norm at `x`: `1/t` where `x + t v` exits the boundary.
pub fn funk_norm(k: &ConvexBody, x: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
    require_interior(k, x, "x")?;
    if v.norm() == 0.0 {
        return Ok(0.0);
    }
    let (_, t) = k.ray_exit(x, v)?;
    Ok(1.0 / t)
}

/// Hilbert Finsler norm at `x`: `(1/t+ + 1/t-) / 2`; symmetric in `v`.
pub fn hilbert_norm(k: &ConvexBody, x: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
    require_interior(k, x, "x")?;
    if v.norm() == 0.0 {
        return Ok(0.0);
    }
    let (_, t_plus) = k.ray_exit(x, v)?;
    let (_, t_minus) = k.ray_exit(x, &(-v))?;
    Ok(0.5 * (1.0 / t_plus + 1.0 / t_minus))
}

/// Which Finsler structure a ball belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinslerKind {
    Funk,
    Hilbert,
}

/// The unit ball of the Finsler norm at a base point, recentered at the
/// origin. The Funk ball is `K - x` itself; the Hilbert ball is kept
/// implicit (its gauge is the symmetrized Funk gauge), since downstream
/// consumers only ever need gauges and the polar ball.
#[derive(Debug, Clone)]
pub struct FinslerBall {
    pub kind: FinslerKind,
    pub base_point: DVector<f64>,
    body: ConvexBody,
}

impl FinslerBall {
    pub fn new(k: &ConvexBody, x: &DVector<f64>, kind: FinslerKind) -> Result<Self> {
        require_interior(k, x, "base point")?;
        Ok(FinslerBall {
            kind,
            base_point: x.clone(),
            body: k.translate(&(-x)),
        })
    }

    /// The recentered body `K - x` (the Funk ball itself).
    pub fn recentered_body(&self) -> &ConvexBody {
        &self.body
    }

    /// Gauge of the ball, which equals the corresponding Finsler norm.
    pub fn gauge(&self, v: &DVector<f64>) -> Result<f64> {
        let origin = DVector::zeros(v.len());
        match self.kind {
            FinslerKind::Funk => self.body.gauge_from(&origin, v),
            FinslerKind::Hilbert => {
                let plus = self.body.gauge_from(&origin, v)?;
                let minus = self.body.gauge_from(&origin, &(-v))?;
                Ok(0.5 * (plus + minus))
            }
        }
    }
}

/// Polar of the Finsler ball at `x`. Funk: `polar(K - x)`. Hilbert: by the
/// difference-body identity, `(1/2) (polar(K - x) + (-polar(K - x)))`,
/// avoiding any direct construction of the Hilbert ball.
pub fn polar_finsler_ball(
    k: &ConvexBody,
    x: &DVector<f64>,
    kind: FinslerKind,
) -> Result<ConvexBody> {
    require_interior(k, x, "base point")?;
    let recentered = k.translate(&(-x));
    let polar = polar_body(&recentered)?;
    match kind {
        FinslerKind::Funk => Ok(polar),
        FinslerKind::Hilbert => Ok(difference_body(&polar).scale_about_origin(0.5)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{ConvexBody, Polytope};
    use crate::report::substream_rng;
    use approx::assert_relative_eq;
    use nalgebra::{dvector, DMatrix};
    use rand::RngExt;

    fn unit_disk() -> ConvexBody {
        ConvexBody::ball(DVector::zeros(2), 1.0).unwrap()
    }

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
    fn funk_distance_in_the_disk() {
        let k = unit_disk();
        let o = DVector::zeros(2);
        let y = dvector![0.5, 0.0];
        assert_relative_eq!(funk_distance(&k, &o, &o).unwrap(), 0.0);
        assert_relative_eq!(funk_distance(&k, &o, &y).unwrap(), 2.0_f64.ln(), epsilon = 1e-12);
        // Reverse direction differs (asymmetry witness).
        assert_relative_eq!(funk_distance(&k, &y, &o).unwrap(), 1.5_f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn hilbert_distance_is_artanh_on_the_disk() {
        let k = unit_disk();
        let o = DVector::zeros(2);
        let y = dvector![0.5, 0.0];
        let d = hilbert_distance(&k, &o, &y).unwrap();
        assert_relative_eq!(d, 0.5_f64.atanh(), epsilon = 1e-12);
        assert_relative_eq!(d, hilbert_distance(&k, &y, &o).unwrap(), epsilon = 1e-14);
    }

    #[test]
    fn norms_on_disk_and_square() {
        let k = unit_disk();
        let o = DVector::zeros(2);
        assert_relative_eq!(funk_norm(&k, &o, &dvector![0.0, 3.0]).unwrap(), 3.0, epsilon = 1e-12);
        assert_relative_eq!(funk_norm(&k, &o, &DVector::zeros(2)).unwrap(), 0.0);

        let sq = square();
        let x = dvector![0.5, 0.0];
        assert_relative_eq!(
            funk_norm(&sq, &x, &dvector![1.0, 0.0]).unwrap(),
            2.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            hilbert_norm(&sq, &x, &dvector![1.0, 0.0]).unwrap(),
            4.0 / 3.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            hilbert_norm(&sq, &x, &dvector![-1.0, 0.0]).unwrap(),
            4.0 / 3.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn non_interior_arguments_rejected() {
        let k = unit_disk();
        assert!(funk_distance(&k, &dvector![1.0, 0.0], &DVector::zeros(2)).is_err());
        assert!(funk_norm(&k, &dvector![2.0, 0.0], &dvector![1.0, 0.0]).is_err());
    }

    #[test]
    fn hilbert_is_half_of_funk_plus_reverse() {
        let sq = square();
        let mut rng = substream_rng(21, 0, 0);
        for _ in 0..50 {
            let x = dvector![rng.random_range(-0.9..0.9), rng.random_range(-0.9..0.9)];
            let y = dvector![rng.random_range(-0.9..0.9), rng.random_range(-0.9..0.9)];
            let f = funk_distance(&sq, &x, &y).unwrap();
            let g = funk_distance(&sq, &y, &x).unwrap();
            let h = hilbert_distance(&sq, &x, &y).unwrap();
            assert_relative_eq!(h, 0.5 * (f + g), epsilon = 1e-14);
        }
    }

    #[test]
    fn funk_triangle_inequality_and_affine_invariance() {
        let sq = square();
        let mut rng = substream_rng(22, 0, 0);
        for _ in 0..30 {
            let sample = |rng: &mut rand_chacha::ChaCha8Rng| {
                dvector![rng.random_range(-0.9..0.9), rng.random_range(-0.9..0.9)]
            };
            let (x, y, z) = (sample(&mut rng), sample(&mut rng), sample(&mut rng));
            let dxy = funk_distance(&sq, &x, &y).unwrap();
            let dyz = funk_distance(&sq, &y, &z).unwrap();
            let dxz = funk_distance(&sq, &x, &z).unwrap();
            assert!(dxz <= dxy + dyz + 1e-12);

            // Random invertible affine map applied to (K, x, y).
            let m = loop {
                let m = DMatrix::from_fn(2, 2, |_, _| rng.random_range(-1.5..1.5f64));
                if m.determinant().abs() > 0.3 {
                    break m;
                }
            };
            let b = dvector![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let kp = sq.as_polytope().unwrap();
            let moved =
                ConvexBody::Polytope(kp.linear_image(&m).unwrap().translate(&b));
            let d2 = funk_distance(&moved, &(&m * &x + &b), &(&m * &y + &b)).unwrap();
            assert_relative_eq!(d2, dxy, epsilon = 1e-9, max_relative = 1e-9);
        }
    }

    #[test]
    fn hilbert_projective_invariance() {
        // p(x) = (A x + b) / (<c, x> + delta), with the denominator bounded
        // away from zero on K.
        let sq = square();
        let kp = sq.as_polytope().unwrap();
        let mut rng = substream_rng(23, 0, 0);
        for _ in 0..20 {
            let a = DMatrix::from_fn(2, 2, |i, j| {
                if i == j {
                    1.0 + rng.random_range(-0.2..0.2)
                } else {
                    rng.random_range(-0.2..0.2)
                }
            });
            let b = dvector![rng.random_range(-0.2..0.2), rng.random_range(-0.2..0.2)];
            let c = dvector![rng.random_range(-0.15..0.15), rng.random_range(-0.15..0.15)];
            let delta = 1.0;
            let denom_ok = kp.vertices().iter().all(|v| c.dot(v) + delta > 0.1);
            if !denom_ok {
                continue;
            }
            let proj = |x: &DVector<f64>| (&a * x + &b) / (c.dot(x) + delta);
            let image: Vec<DVector<f64>> = kp.vertices().iter().map(&proj).collect();
            let moved = match Polytope::from_points(&image) {
                Ok(p) => ConvexBody::Polytope(p),
                Err(_) => continue,
            };
            let x = dvector![rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7)];
            let y = dvector![rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7)];
            let d0 = hilbert_distance(&sq, &x, &y).unwrap();
            let d1 = hilbert_distance(&moved, &proj(&x), &proj(&y)).unwrap();
            assert_relative_eq!(d0, d1, epsilon = 1e-7, max_relative = 1e-7);
        }
    }

    #[test]
    fn finsler_ball_gauge_matches_norms() {
        let sq = square();
        let mut rng = substream_rng(24, 0, 0);
        for _ in 0..30 {
            let x = dvector![rng.random_range(-0.8..0.8), rng.random_range(-0.8..0.8)];
            let v = dvector![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let funk_ball = FinslerBall::new(&sq, &x, FinslerKind::Funk).unwrap();
            let hilb_ball = FinslerBall::new(&sq, &x, FinslerKind::Hilbert).unwrap();
            assert_relative_eq!(
                funk_ball.gauge(&v).unwrap(),
                funk_norm(&sq, &x, &v).unwrap(),
                epsilon = 1e-10
            );
            assert_relative_eq!(
                hilb_ball.gauge(&v).unwrap(),
                hilbert_norm(&sq, &x, &v).unwrap(),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn polar_finsler_balls() {
        // Unit disk at the center: both polars are the disk itself.
        let k = unit_disk();
        let o = DVector::zeros(2);
        for kind in [FinslerKind::Funk, FinslerKind::Hilbert] {
            let ball = polar_finsler_ball(&k, &o, kind).unwrap();
            for t in [0.0_f64, 1.0, 2.5] {
                let u = dvector![t.cos(), t.sin()];
                assert_relative_eq!(ball.support_function(&u), 1.0, epsilon = 1e-9);
            }
        }

        // K symmetric about x: the Hilbert polar ball equals the Funk one.
        let sq = square();
        let funk = polar_finsler_ball(&sq, &o, FinslerKind::Funk).unwrap();
        let hilb = polar_finsler_ball(&sq, &o, FinslerKind::Hilbert).unwrap();
        for k in 0..12 {
            let t = std::f64::consts::TAU * k as f64 / 12.0;
            let u = dvector![t.cos(), t.sin()];
            assert_relative_eq!(
                funk.support_function(&u),
                hilb.support_function(&u),
                epsilon = 1e-10
            );
        }

        // Funk polar ball of the square at (0.5, 0): support in +x is 1/0.5.
        let x = dvector![0.5, 0.0];
        let funk = polar_finsler_ball(&sq, &x, FinslerKind::Funk).unwrap();
        assert_relative_eq!(funk.support_function(&dvector![1.0, 0.0]), 2.0, epsilon = 1e-9);
    }
}

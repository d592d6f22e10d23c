//! Ellipsoids `{ x : (x - c)^T A (x - c) <= 1 }` with closed-form support,
//! gauge, polar, section, and projection calculus.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::geom::hyperplane::Hyperplane;
use crate::geom::sphere::ball_volume;

#[derive(Debug, Clone)]
pub struct Ellipsoid {
    center: DVector<f64>,
    form: DMatrix<f64>,
    inv_form: DMatrix<f64>,
    sqrt_inv: DMatrix<f64>,
}

impl Ellipsoid {
    /// Builds the ellipsoid from its center and positive-definite shape form.
    pub fn new(center: DVector<f64>, form: DMatrix<f64>) -> Result<Self> {
        let d = center.len();
        if form.nrows() != d || form.ncols() != d {
            return Err(GeomError::Invariant("shape form has wrong dimensions".into()));
        }
        let sym = (form.clone() + form.transpose()) * 0.5;
        let eig = sym.clone().symmetric_eigen();
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
        if min <= 0.0 || min < 1e-14 * max {
            return Err(GeomError::Invariant(
                "shape form must be positive definite".into(),
            ));
        }
        let recompose = |f: &dyn Fn(f64) -> f64| {
            let mut diag = DMatrix::zeros(d, d);
            for i in 0..d {
                diag[(i, i)] = f(eig.eigenvalues[i]);
            }
            &eig.eigenvectors * diag * eig.eigenvectors.transpose()
        };
        let inv_form = recompose(&|l| 1.0 / l);
        let sqrt_inv = recompose(&|l| 1.0 / l.sqrt());
        Ok(Ellipsoid {
            center,
            form: sym,
            inv_form,
            sqrt_inv,
        })
    }

    /// Euclidean ball of radius `r`.
    pub fn ball(center: DVector<f64>, r: f64) -> Result<Self> {
        if r <= 0.0 || !r.is_finite() {
            return Err(GeomError::Invariant("ball radius must be positive".into()));
        }
        let d = center.len();
        Ellipsoid::new(center, DMatrix::identity(d, d) / (r * r))
    }

    pub fn dimension(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    pub fn form(&self) -> &DMatrix<f64> {
        &self.form
    }

    pub fn inv_form(&self) -> &DMatrix<f64> {
        &self.inv_form
    }

    /// Symmetric square root of the inverse form; maps the unit sphere onto
    /// the centered boundary.
    pub fn sqrt_inv_form(&self) -> &DMatrix<f64> {
        &self.sqrt_inv
    }

    pub fn support_function(&self, u: &DVector<f64>) -> f64 {
        self.center.dot(u) + (u.dot(&(&self.inv_form * u))).max(0.0).sqrt()
    }

    pub fn support_point(&self, u: &DVector<f64>) -> DVector<f64> {
        let w = &self.inv_form * u;
        let s = u.dot(&w).max(1e-300).sqrt();
        &self.center + w / s
    }

    /// Gauge of `x` relative to an interior base point `c0`.
    pub fn gauge_from(&self, c0: &DVector<f64>, x: &DVector<f64>) -> Result<f64> {
        let m = &self.center - c0;
        let mam = m.dot(&(&self.form * &m));
        if mam >= 1.0 - 1e-12 {
            return Err(GeomError::Invariant(
                "gauge base point is not interior to the ellipsoid".into(),
            ));
        }
        let z = x - c0;
        let zaz = z.dot(&(&self.form * &z));
        if zaz <= 0.0 {
            return Ok(0.0);
        }
        let zam = z.dot(&(&self.form * &m));
        let disc = (zam * zam - zaz * (mam - 1.0)).max(0.0);
        let s = (zam + disc.sqrt()) / zaz;
        Ok(1.0 / s)
    }

    pub fn contains(&self, x: &DVector<f64>) -> bool {
        let z = x - &self.center;
        z.dot(&(&self.form * &z)) <= 1.0 + 1e-9
    }

    pub fn interior_margin(&self, x: &DVector<f64>) -> f64 {
        let z = x - &self.center;
        1.0 - z.dot(&(&self.form * &z)).max(0.0).sqrt()
    }

    pub fn ray_exit(&self, x: &DVector<f64>, v: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
        if v.norm() == 0.0 {
            return Err(GeomError::Invariant("ray direction is zero".into()));
        }
        if self.interior_margin(x) <= 1e-12 {
            return Err(GeomError::Invariant(
                "ray base point must be strictly interior".into(),
            ));
        }
        let z = x - &self.center;
        let a = v.dot(&(&self.form * v));
        let b = v.dot(&(&self.form * &z));
        let g = z.dot(&(&self.form * &z)) - 1.0;
        let disc = (b * b - a * g).max(0.0);
        let t = (-b + disc.sqrt()) / a;
        Ok((x + v * t, t))
    }

    /// Polar body. For a center `m` with `m^T A m < 1` the polar is again an
    /// ellipsoid: `{ y : y^T Q y + 2 m^T y <= 1 }` with `Q = A^{-1} - m m^T`,
    /// i.e. center `-Q^{-1} m` and form `Q / (1 + m^T Q^{-1} m)`.
    pub fn polar(&self) -> Result<Ellipsoid> {
        let m = &self.center;
        if m.dot(&(&self.form * m)) >= 1.0 - 1e-12 {
            return Err(GeomError::Invariant(
                "polar requires the origin strictly interior".into(),
            ));
        }
        let q = &self.inv_form - m * m.transpose();
        let q_inv_m = q
            .clone()
            .lu()
            .solve(m)
            .ok_or_else(|| GeomError::Numerical("singular polar form".into()))?;
        let scale = 1.0 + m.dot(&q_inv_m);
        Ellipsoid::new(-q_inv_m, q / scale)
    }

    pub fn volume(&self) -> f64 {
        ball_volume(self.dimension()) / self.form.determinant().sqrt()
    }

    pub fn translate(&self, t: &DVector<f64>) -> Ellipsoid {
        Ellipsoid {
            center: &self.center + t,
            form: self.form.clone(),
            inv_form: self.inv_form.clone(),
            sqrt_inv: self.sqrt_inv.clone(),
        }
    }

    pub fn scale_about_origin(&self, a: f64) -> Ellipsoid {
        Ellipsoid {
            center: &self.center * a,
            form: &self.form / (a * a),
            inv_form: &self.inv_form * (a * a),
            sqrt_inv: &self.sqrt_inv * a,
        }
    }

    /// Image under an invertible linear map `M`: `form -> M^{-T} A M^{-1}`.
    pub fn linear_image(&self, m: &DMatrix<f64>) -> Result<Ellipsoid> {
        let inv = m
            .clone()
            .lu()
            .try_inverse()
            .ok_or_else(|| GeomError::Invariant("singular linear map".into()))?;
        Ellipsoid::new(m * &self.center, inv.transpose() * &self.form * inv)
    }

    /// Section by an affine hyperplane, as an in-plane ellipsoid
    /// `(ambient center, in-plane form)` relative to `plane.basis()`.
    /// Returns `None` when the plane misses the interior.
    pub fn section_by_plane(
        &self,
        plane: &Hyperplane,
    ) -> Option<(DVector<f64>, DMatrix<f64>)> {
        let basis = plane.basis();
        let p0 = plane.base_point();
        let w = &p0 - &self.center;
        let m = basis.transpose() * &self.form * &basis;
        let b = basis.transpose() * (&self.form * &w);
        let gamma = w.dot(&(&self.form * &w)) - 1.0;
        let t0 = m.clone().lu().solve(&(-&b))?;
        let rho = -gamma - b.dot(&t0);
        if rho <= 1e-14 {
            return None;
        }
        let center = &p0 + &basis * &t0;
        Some((center, m / rho))
    }

    /// Orthogonal projection (shadow) onto the column space of `basis`:
    /// center `basis^T c`, inverse form `basis^T A^{-1} basis`.
    pub fn project_onto(&self, basis: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
        let inv = basis.transpose() * &self.inv_form * basis;
        let form = inv
            .clone()
            .lu()
            .try_inverse()
            .expect("projection of a positive-definite form");
        (basis.transpose() * &self.center, form)
    }
}

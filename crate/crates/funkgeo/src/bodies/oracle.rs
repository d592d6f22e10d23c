//! Support-oracle bodies: a convex body known only through its support
//! function and a support-point selector.

use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;

type SupportFn = Arc<dyn Fn(&DVector<f64>) -> f64 + Send + Sync>;
type PointFn = Arc<dyn Fn(&DVector<f64>) -> DVector<f64> + Send + Sync>;

/// A body given by evaluators `h(u)` and `v(u)`, with a stored interior
/// witness. Exact difference bodies of higher-dimensional polytopes are
/// exposed this way.
#[derive(Clone)]
pub struct SupportOracle {
    dim: usize,
    interior: DVector<f64>,
    h: SupportFn,
    point: PointFn,
}

impl fmt::Debug for SupportOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SupportOracle")
            .field("dim", &self.dim)
            .field("interior", &self.interior)
            .finish_non_exhaustive()
    }
}

impl SupportOracle {
    pub fn new(interior: DVector<f64>, h: SupportFn, point: PointFn) -> Self {
        SupportOracle {
            dim: interior.len(),
            interior,
            h,
            point,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn interior_point(&self) -> &DVector<f64> {
        &self.interior
    }

    pub fn support_function(&self, u: &DVector<f64>) -> f64 {
        (self.h)(u)
    }

    pub fn support_point(&self, u: &DVector<f64>) -> DVector<f64> {
        (self.point)(u)
    }

    pub fn translate(&self, t: &DVector<f64>) -> SupportOracle {
        let h = self.h.clone();
        let p = self.point.clone();
        let t1 = t.clone();
        let t2 = t.clone();
        SupportOracle {
            dim: self.dim,
            interior: &self.interior + t,
            h: Arc::new(move |u| h(u) + t1.dot(u)),
            point: Arc::new(move |u| p(u) + &t2),
        }
    }

    pub fn scale_about_origin(&self, a: f64) -> SupportOracle {
        let h = self.h.clone();
        let p = self.point.clone();
        SupportOracle {
            dim: self.dim,
            interior: &self.interior * a,
            h: Arc::new(move |u| a * h(u)),
            point: Arc::new(move |u| p(u) * a),
        }
    }
}

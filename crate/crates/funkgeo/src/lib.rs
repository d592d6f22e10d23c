//! Surface areas and volumes in the Funk and Hilbert geometries of a convex
//! body, under the Holmes-Thompson measure.
//!
//! Given a convex body `K` and a convex body `G` nested in its interior, the
//! crate computes the Holmes-Thompson surface area and volume of `G` in the
//! Funk (and Hilbert) geometry induced by `K`, by four routes that validate
//! one another:
//!
//! * the direct boundary integral of the polar Finsler-ball density
//!   ([`holmes_thompson`]),
//! * averaging of central shadows of `G` cast from support points on the
//!   boundary of `K` ([`cauchy`]),
//! * for polytopal `K`, a decomposition into cone Funk volumes at the
//!   vertices of `K` ([`cauchy::funk_area_vertex_decomposition`]),
//! * Monte-Carlo counting of random lines against a line density
//!   ([`crofton`]).
//!
//! Special cases recover classical formulas: a Euclidean ball `K` gives the
//! Beltrami-Klein model of hyperbolic geometry, and blowing `K` up recovers
//! Minkowski (and ultimately Euclidean) surface area.
//!
//! ```
//! use funkgeo::bodies::ConvexBody;
//! use funkgeo::report::QuadratureSpec;
//! use nalgebra::DVector;
//!
//! // Hyperbolic circumference of a Klein-model circle of radius 1/2.
//! let k = ConvexBody::ball(DVector::zeros(2), 1.0).unwrap();
//! let g = ConvexBody::ball(DVector::zeros(2), 0.5).unwrap();
//! let spec = QuadratureSpec::deterministic(1024);
//! let area = funkgeo::cauchy::funk_area_cauchy(&k, &g, &spec).unwrap();
//! let expect = 2.0 * std::f64::consts::PI * 0.5 / 0.75_f64.sqrt();
//! assert!((area.value - expect).abs() < 1e-9);
//! ```

pub mod bodies;
pub mod cauchy;
pub mod cli;
pub mod crofton;
pub mod error;
pub mod geom;
pub mod holmes_thompson;
pub mod io;
pub mod metrics;
pub mod report;

pub use bodies::ConvexBody;
pub use error::{GeomError, Result};
pub use report::{EstimateReport, QuadratureSpec};

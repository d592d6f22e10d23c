//! Dimension-generic linear-algebra and measure primitives.

pub mod hyperplane;
pub mod quadrature;
pub mod region;
pub mod sphere;

pub use hyperplane::{dual_hyperplane, gnomonic_project, orthonormal_complement, Hyperplane};
pub use quadrature::{circle_quadrature, gauss_legendre};
pub use region::{hausdorff_distance, region_measure, EmbeddedRegion, RegionShape};
pub use sphere::{ball_volume, gnomonic_area, sphere_measure, SphereSampler, SphericalRegion};

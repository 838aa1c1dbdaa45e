//! Intrinsic metrics of the annular ring `r < |z| < 1` and related planar
//! domains: the triangular ratio metric `s`, the `j*` metric and the Möbius
//! metric `delta`, together with brute-force oracles, metric-circle contours
//! and a Möbius-invariant capacity lower bound.

pub mod base_metrics;
pub mod capacity;
pub mod cli;
pub mod contour;
pub mod domain;
pub mod error;
pub mod geometry;
pub mod optimize;
pub mod oracle;
pub mod quartic;
pub mod moebius;
pub mod tri_ratio;
pub mod verify;

pub use base_metrics::{j_metric, j_star, rho_disk, rho_exterior, Branch, MetricResult};
pub use domain::Domain;
pub use error::{MetricError, Result};
pub use geometry::{pt, ExtendedPoint, PlanePoint};

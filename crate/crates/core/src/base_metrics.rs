//! Closed-form metrics: the hyperbolic metric of the disk and its exterior,
//! the distance ratio metric `j` and its bounded variant `j*`.

use std::fmt;

use serde::Serialize;

use crate::domain::Domain;
use crate::error::Result;
use crate::geometry::{ring_inversion, PlanePoint};

/// Pairs closer than this are treated as the same point and get distance 0.
pub const COINCIDENCE_EPS: f64 = 1e-15;

#[inline]
pub(crate) fn coincident(x: PlanePoint, y: PlanePoint) -> bool {
    (x - y).norm() < COINCIDENCE_EPS
}

/// Which case of a piecewise formula produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Coincident,
    ClosedForm,
    /// The segment `[x, y]` meets the closed inner disk, so `s = 1`.
    SegmentHitsInner,
    /// The extremal boundary point lies on the outer circle.
    OuterCircle,
    /// The extremal boundary point lies on the inner circle.
    InnerCircle,
    /// The extremal boundary point is the puncture at the origin.
    Puncture,
    /// Hyperbolic metric of the unit disk dominates.
    DiskPart,
    /// Hyperbolic metric of the disk exterior dominates.
    ExteriorPart,
    /// The mixed supremum with one point on each boundary circle dominates.
    CrossPart,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Coincident => "coincident",
            Branch::ClosedForm => "closed-form",
            Branch::SegmentHitsInner => "segment-hits-inner",
            Branch::OuterCircle => "outer-circle",
            Branch::InnerCircle => "inner-circle",
            Branch::Puncture => "puncture",
            Branch::DiskPart => "disk-part",
            Branch::ExteriorPart => "exterior-part",
            Branch::CrossPart => "cross-part",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A metric value together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricResult {
    pub value: f64,
    pub active_branch: Branch,
    /// Extremal boundary points found along the way (at most two).
    pub witnesses: Vec<PlanePoint>,
}

impl MetricResult {
    pub fn zero() -> Self {
        MetricResult { value: 0.0, active_branch: Branch::Coincident, witnesses: Vec::new() }
    }
}

fn check_unit_disk(x: PlanePoint) -> Result<()> {
    Domain::UnitDisk.check(x)
}

/// Hyperbolic distance in the unit disk, `2 artanh |x - y| / |1 - x conj(y)|`.
///
/// Evaluated as `log1p(2t(1 + t) / (1 - t^2))` with
/// `1 - t^2 = (1 - |x|^2)(1 - |y|^2) / |1 - x conj(y)|^2`, which keeps full
/// accuracy when `t` is close to 1.
pub fn rho_disk(x: PlanePoint, y: PlanePoint) -> Result<f64> {
    check_unit_disk(x)?;
    check_unit_disk(y)?;
    if coincident(x, y) {
        return Ok(0.0);
    }
    let den = (1.0 - x * y.conj()).norm();
    let t = ((x - y).norm() / den).min(1.0);
    let one_minus_t2 = (1.0 - x.norm_sqr()) * (1.0 - y.norm_sqr()) / (den * den);
    Ok((2.0 * t * (1.0 + t) / one_minus_t2).ln_1p())
}

/// `th(rho/2)` for the unit disk, no domain check.
#[inline]
pub(crate) fn th_half_rho_disk(x: PlanePoint, y: PlanePoint) -> f64 {
    ((x - y).norm() / (1.0 - x * y.conj()).norm()).min(1.0)
}

/// Hyperbolic (equivalently Möbius) distance in `|z| > r`, pulled back to the
/// unit disk through `z -> r z / |z|^2`.
pub fn rho_exterior(x: PlanePoint, y: PlanePoint, r: f64) -> Result<f64> {
    let dom = Domain::exterior(r)?;
    dom.check(x)?;
    dom.check(y)?;
    if coincident(x, y) {
        return Ok(0.0);
    }
    rho_disk(ring_inversion(x, r), ring_inversion(y, r))
}

fn min_boundary_distance(d: &Domain, x: PlanePoint, y: PlanePoint) -> Result<f64> {
    Ok(d.boundary_distance(x)?.min(d.boundary_distance(y)?))
}

/// Distance ratio metric `log(1 + |x-y| / min(d(x), d(y)))`.
pub fn j_metric(d: &Domain, x: PlanePoint, y: PlanePoint) -> Result<f64> {
    let m = min_boundary_distance(d, x, y)?;
    if coincident(x, y) {
        return Ok(0.0);
    }
    Ok(((x - y).norm() / m).ln_1p())
}

/// The `j*` metric, `|x-y| / (|x-y| + 2 min(d(x), d(y)))`.
pub fn j_star(d: &Domain, x: PlanePoint, y: PlanePoint) -> Result<f64> {
    let m = min_boundary_distance(d, x, y)?;
    if coincident(x, y) {
        return Ok(0.0);
    }
    let dist = (x - y).norm();
    Ok(dist / (dist + 2.0 * m))
}

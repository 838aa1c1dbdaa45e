//! Planar primitives on the extended complex plane.
//!
//! Points of the plane are plain [`Complex64`] values; the point at infinity
//! only shows up where it genuinely matters (cross-ratios with rays, circle
//! inversions), so it lives in the separate [`ExtendedPoint`] type.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{MetricError, Result};

/// A finite point of the plane.
pub type PlanePoint = Complex64;

/// Convenience constructor for a [`PlanePoint`].
#[inline]
pub fn pt(re: f64, im: f64) -> PlanePoint {
    Complex64::new(re, im)
}

/// A point of the extended plane: either finite or the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedPoint {
    Finite(PlanePoint),
    Infinity,
}

impl ExtendedPoint {
    pub fn finite(self) -> Option<PlanePoint> {
        match self {
            ExtendedPoint::Finite(p) => Some(p),
            ExtendedPoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedPoint::Infinity)
    }
}

impl Serialize for ExtendedPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedPoint::Finite(p) => p.serialize(s),
            ExtendedPoint::Infinity => s.serialize_str("infinity"),
        }
    }
}

impl std::fmt::Display for ExtendedPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtendedPoint::Finite(p) => write!(f, "({}, {})", p.re, p.im),
            ExtendedPoint::Infinity => f.write_str("infinity"),
        }
    }
}

impl From<PlanePoint> for ExtendedPoint {
    fn from(p: PlanePoint) -> Self {
        ExtendedPoint::Finite(p)
    }
}

/// Spherical (chordal) distance on the Riemann sphere.
pub fn chordal(x: ExtendedPoint, y: ExtendedPoint) -> f64 {
    use ExtendedPoint::*;
    match (x, y) {
        (Infinity, Infinity) => 0.0,
        (Finite(p), Infinity) | (Infinity, Finite(p)) => 1.0 / (1.0 + p.norm_sqr()).sqrt(),
        (Finite(p), Finite(q)) => {
            if p == q {
                return 0.0;
            }
            (p - q).norm() / ((1.0 + p.norm_sqr()).sqrt() * (1.0 + q.norm_sqr()).sqrt())
        }
    }
}

/// The absolute cross-ratio `|a,b,c,d| = q(a,c) q(b,d) / (q(a,b) q(c,d))`.
///
/// Finite quadruples use the Euclidean form, which is algebraically equal and
/// loses less precision; as soon as one argument is infinite the chordal form
/// is used.
pub fn cross_ratio(
    a: ExtendedPoint,
    b: ExtendedPoint,
    c: ExtendedPoint,
    d: ExtendedPoint,
) -> Result<f64> {
    if a == b || c == d {
        return Err(MetricError::DegenerateCrossRatio);
    }
    if let (Some(a), Some(b), Some(c), Some(d)) = (a.finite(), b.finite(), c.finite(), d.finite()) {
        return Ok(cross_ratio_finite(a, b, c, d));
    }
    Ok(chordal(a, c) * chordal(b, d) / (chordal(a, b) * chordal(c, d)))
}

/// Euclidean cross-ratio of four finite points. No degeneracy check.
#[inline]
pub fn cross_ratio_finite(a: PlanePoint, b: PlanePoint, c: PlanePoint, d: PlanePoint) -> f64 {
    (a - c).norm() * (b - d).norm() / ((a - b).norm() * (c - d).norm())
}

/// Inversion in the circle `S(center, radius)`.
pub fn invert_in_circle(x: ExtendedPoint, center: PlanePoint, radius: f64) -> ExtendedPoint {
    match x {
        ExtendedPoint::Infinity => ExtendedPoint::Finite(center),
        ExtendedPoint::Finite(p) => {
            let w = p - center;
            let n2 = w.norm_sqr();
            if n2 == 0.0 {
                ExtendedPoint::Infinity
            } else {
                ExtendedPoint::Finite(center + w * (radius * radius / n2))
            }
        }
    }
}

/// Inversion `x -> r x / |x|^2` in the circle `S(0, sqrt(r))`, restricted to
/// finite non-zero points. It swaps the two boundary circles of the ring
/// `r < |z| < 1`.
#[inline]
pub fn ring_inversion(x: PlanePoint, r: f64) -> PlanePoint {
    x * (r / x.norm_sqr())
}

/// Reflection in the line `{x : x . u = t}`.
pub fn reflect_in_line(x: ExtendedPoint, u: PlanePoint, t: f64) -> Result<ExtendedPoint> {
    let n2 = u.norm_sqr();
    if n2 == 0.0 {
        return Err(MetricError::ZeroNormal);
    }
    Ok(match x {
        ExtendedPoint::Infinity => ExtendedPoint::Infinity,
        ExtendedPoint::Finite(p) => {
            let dot = p.re * u.re + p.im * u.im;
            ExtendedPoint::Finite(p - u * (2.0 * (dot - t) / n2))
        }
    })
}

/// Euclidean distance from the origin to the segment `[x, y]`.
pub fn origin_segment_distance(x: PlanePoint, y: PlanePoint) -> f64 {
    point_segment_distance(Complex64::new(0.0, 0.0), x, y)
}

/// Euclidean distance from `p` to the segment `[x, y]`.
pub fn point_segment_distance(p: PlanePoint, x: PlanePoint, y: PlanePoint) -> f64 {
    let d = y - x;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - x).norm();
    }
    let t = (((p - x) * d.conj()).re / len2).clamp(0.0, 1.0);
    (x + d * t - p).norm()
}

/// Whether the segment `[x, y]` meets the closed disk of radius `r` about 0.
pub fn segment_meets_closed_disk(x: PlanePoint, y: PlanePoint, r: f64) -> bool {
    origin_segment_distance(x, y) <= r
}

/// Angle between the rays from the origin through `x` and `y`, in `[0, pi]`.
pub fn angle_at_origin(x: PlanePoint, y: PlanePoint) -> Result<f64> {
    if x == Complex64::new(0.0, 0.0) || y == Complex64::new(0.0, 0.0) {
        return Err(MetricError::OriginArgument);
    }
    // arg(y / x) without the division: atan2 of the cross and dot products.
    let cross = x.re * y.im - x.im * y.re;
    let dot = x.re * y.re + x.im * y.im;
    let mu = cross.atan2(dot).abs();
    Ok(mu.min(PI))
}

//! Triangular ratio metric `s_G(x, y) = |x - y| / inf_{z in dG} (|x - z| + |z - y|)`
//! in the annulus `r < |z| < 1`, the punctured disk and the two disk domains.
//!
//! The infimum over a boundary circle is attained at a reflection point: the
//! radius through it bisects the angle at `z` subtended by `x` and `y`. Those
//! points are roots of a quartic in `z`, solved with [`crate::quartic`].

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::base_metrics::{coincident, Branch, MetricResult};
use crate::domain::Domain;
use crate::error::{MetricError, Result};
use crate::geometry::{segment_meets_closed_disk, PlanePoint};
use crate::optimize::golden_min;
use crate::quartic::{horner, poly_roots};

/// Roots farther than this from the target circle are rejected.
const CIRCLE_FILTER: f64 = 1e-8;
/// Fallback sampling density when no quartic root lands on the circle.
const FALLBACK_SAMPLES: usize = 4096;
/// Angular tolerance for collinearity with the origin.
const COLLINEAR_TOL: f64 = 1e-12;

/// Whether the two points lie inside or outside the reflecting circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Inside,
    Outside,
}

/// Result of minimising `|x - z| + |z - y|` over a circle `|z| = j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuarticSolution {
    /// All roots of the reflection quartic, in the original scale.
    pub roots: Vec<PlanePoint>,
    /// The minimising point, exactly on the circle.
    pub chosen: PlanePoint,
    /// `|x - chosen| + |chosen - y|`
    pub sum: f64,
    /// True when no root passed the circle filter and dense sampling was used.
    pub used_fallback: bool,
}

/// Ascending coefficients of the reflection quartic
/// `conj(x)conj(y) z^4 - j^2 (conj x + conj y) z^3 + j^4 (x + y) z - j^4 x y`.
pub fn reflection_quartic(x: PlanePoint, y: PlanePoint, j: f64) -> [Complex64; 5] {
    let j2 = j * j;
    let j4 = j2 * j2;
    [
        -x * y * j4,
        (x + y) * j4,
        Complex64::new(0.0, 0.0),
        -(x.conj() + y.conj()) * j2,
        x.conj() * y.conj(),
    ]
}

/// The point of the circle `|z| = j` minimising `|x - z| + |z - y|`.
///
/// Solves the quartic on the unit-circle rescaled problem, keeps the roots
/// within `1e-8` of the circle, projects them onto it and picks the smallest
/// sum. The radial projections of `x` and `y` are always compared as well.
pub fn optimal_reflection_point(x: PlanePoint, y: PlanePoint, j: f64, side: Side) -> Result<QuarticSolution> {
    if coincident(x, y) {
        return Err(MetricError::CoincidentPoints);
    }
    let admissible = match side {
        Side::Inside => x.norm() < j && y.norm() < j,
        Side::Outside => x.norm() > j && y.norm() > j && !segment_meets_closed_disk(x, y, j),
    };
    if !admissible || j <= 0.0 {
        return Err(MetricError::NoAdmissibleRoot { radius: j });
    }

    let (xs, ys) = (x / j, y / j);
    let unit_roots = poly_roots(&reflection_quartic(xs, ys, 1.0));
    let sum = |w: Complex64| (xs - w).norm() + (w - ys).norm();

    let mut best: Option<(Complex64, f64)> = None;
    let mut consider = |w: Complex64| {
        let s = sum(w);
        if best.is_none_or(|(_, b)| s < b) {
            best = Some((w, s));
        }
    };
    let mut on_circle = 0;
    for &w in &unit_roots {
        let m = w.norm();
        if (m - 1.0).abs() <= CIRCLE_FILTER && m > 0.0 {
            on_circle += 1;
            consider(w / m);
        }
    }
    let used_fallback = on_circle == 0;
    if used_fallback {
        let (t, _) = sampled_circle_min(|t| sum(Complex64::from_polar(1.0, t)), FALLBACK_SAMPLES);
        consider(Complex64::from_polar(1.0, t));
    }
    for p in [xs, ys] {
        if p.norm() > 0.0 {
            consider(p / p.norm());
        }
    }

    let (w, _) = best.ok_or(MetricError::NoAdmissibleRoot { radius: j })?;
    let chosen = w * j;
    Ok(QuarticSolution {
        roots: unit_roots.into_iter().map(|w| w * j).collect(),
        chosen,
        sum: (x - chosen).norm() + (chosen - y).norm(),
        used_fallback,
    })
}

/// Minimum of a periodic function of the angle: uniform scan then
/// golden-section refinement around the best sample.
pub(crate) fn sampled_circle_min<F: FnMut(f64) -> f64>(mut f: F, samples: usize) -> (f64, f64) {
    let step = TAU / samples as f64;
    let mut best = (0.0, f64::INFINITY);
    for i in 0..samples {
        let t = step * i as f64;
        let v = f(t);
        if v < best.1 {
            best = (t, v);
        }
    }
    let refined = golden_min(&mut f, best.0 - step, best.0 + step, 1e-14, 200);
    if refined.1 < best.1 {
        refined
    } else {
        best
    }
}

/// Rotation (and optional conjugation) taking `x` to the positive real axis
/// and `y` to the closed upper half plane. Values are invariant under it.
#[derive(Clone, Copy)]
struct Frame {
    rot: Complex64,
    flip: bool,
}

impl Frame {
    fn new(x: PlanePoint, y: PlanePoint) -> Self {
        let m = x.norm();
        let rot = if m > 0.0 { x.conj() / m } else { Complex64::new(1.0, 0.0) };
        let flip = (y * rot).im < 0.0;
        Frame { rot, flip }
    }

    fn to_local(self, p: PlanePoint) -> PlanePoint {
        let q = p * self.rot;
        if self.flip {
            q.conj()
        } else {
            q
        }
    }

    fn to_global(self, p: PlanePoint) -> PlanePoint {
        let q = if self.flip { p.conj() } else { p };
        q * self.rot.conj()
    }
}

/// Triangular ratio metric of the annulus `r < |z| < 1`.
pub fn s_annulus(x: PlanePoint, y: PlanePoint, r: f64) -> Result<MetricResult> {
    let dom = Domain::annulus(r)?;
    dom.check(x)?;
    dom.check(y)?;
    if coincident(x, y) {
        return Ok(MetricResult::zero());
    }
    let frame = Frame::new(x, y);
    let (xl, yl) = (frame.to_local(x), frame.to_local(y));
    let dist = (xl - yl).norm();

    if segment_meets_closed_disk(xl, yl, r) {
        return Ok(MetricResult { value: 1.0, active_branch: Branch::SegmentHitsInner, witnesses: Vec::new() });
    }
    let outer = optimal_reflection_point(xl, yl, 1.0, Side::Inside)?;
    let inner = optimal_reflection_point(xl, yl, r, Side::Outside)?;
    let (value, branch) = if inner.sum < outer.sum {
        (dist / inner.sum, Branch::InnerCircle)
    } else {
        (dist / outer.sum, Branch::OuterCircle)
    };
    Ok(MetricResult {
        value: value.min(1.0),
        active_branch: branch,
        witnesses: vec![frame.to_global(outer.chosen), frame.to_global(inner.chosen)],
    })
}

/// Triangular ratio metric of the unit disk.
pub fn s_unit_disk(x: PlanePoint, y: PlanePoint) -> Result<MetricResult> {
    Domain::UnitDisk.check(x)?;
    Domain::UnitDisk.check(y)?;
    if coincident(x, y) {
        return Ok(MetricResult::zero());
    }
    let sol = optimal_reflection_point(x, y, 1.0, Side::Inside)?;
    Ok(MetricResult {
        value: ((x - y).norm() / sol.sum).min(1.0),
        active_branch: Branch::OuterCircle,
        witnesses: vec![sol.chosen],
    })
}

/// Triangular ratio metric of the exterior `|z| > r`.
pub fn s_exterior(x: PlanePoint, y: PlanePoint, r: f64) -> Result<MetricResult> {
    let dom = Domain::exterior(r)?;
    dom.check(x)?;
    dom.check(y)?;
    if coincident(x, y) {
        return Ok(MetricResult::zero());
    }
    if segment_meets_closed_disk(x, y, r) {
        return Ok(MetricResult { value: 1.0, active_branch: Branch::SegmentHitsInner, witnesses: Vec::new() });
    }
    let sol = optimal_reflection_point(x, y, r, Side::Outside)?;
    Ok(MetricResult {
        value: ((x - y).norm() / sol.sum).min(1.0),
        active_branch: Branch::InnerCircle,
        witnesses: vec![sol.chosen],
    })
}

/// Triangular ratio metric of the punctured disk `0 < |z| < 1`: the larger
/// of the unit-disk value and `|x - y| / (|x| + |y|)`.
pub fn s_punctured(x: PlanePoint, y: PlanePoint) -> Result<MetricResult> {
    Domain::PuncturedDisk.check(x)?;
    Domain::PuncturedDisk.check(y)?;
    if coincident(x, y) {
        return Ok(MetricResult::zero());
    }
    let disk = s_unit_disk(x, y)?;
    let through_origin = (x - y).norm() / (x.norm() + y.norm());
    if through_origin > disk.value {
        Ok(MetricResult {
            value: through_origin.min(1.0),
            active_branch: Branch::Puncture,
            witnesses: vec![Complex64::new(0.0, 0.0)],
        })
    } else {
        Ok(disk)
    }
}

/// Triangular ratio metric in any supported domain.
pub fn s_metric(d: &Domain, x: PlanePoint, y: PlanePoint) -> Result<MetricResult> {
    match *d {
        Domain::UnitDisk => s_unit_disk(x, y),
        Domain::ExteriorDisk { r } => s_exterior(x, y, r),
        Domain::Annulus { r } => s_annulus(x, y, r),
        Domain::PuncturedDisk => s_punctured(x, y),
    }
}

fn check_collinear_same_ray(x: PlanePoint, y: PlanePoint) -> Result<()> {
    let (mx, my) = (x.norm(), y.norm());
    let sin = (x.re * y.im - x.im * y.re) / (mx * my);
    let cos = (x.re * y.re + x.im * y.im) / (mx * my);
    if sin.abs() <= COLLINEAR_TOL && cos > 0.0 {
        Ok(())
    } else {
        Err(MetricError::NotCollinear)
    }
}

/// Closed form for two points on the same ray from the origin:
/// `|x - y| / min(2 - |x + y|, |x + y| - 2r)`.
pub fn s_collinear(x: PlanePoint, y: PlanePoint, r: f64) -> Result<f64> {
    let dom = Domain::annulus(r)?;
    dom.check(x)?;
    dom.check(y)?;
    if coincident(x, y) {
        return Ok(0.0);
    }
    check_collinear_same_ray(x, y)?;
    let sum = x.norm() + y.norm();
    Ok((x - y).norm() / (2.0 - sum).min(sum - 2.0 * r))
}

/// Closed form for two points at the same distance `h` from the origin,
/// seeing each other under the angle `mu` from the origin.
pub fn s_equidistant(h: f64, mu: f64, r: f64) -> Result<f64> {
    if !(0.0 < r && r < h && h < 1.0) {
        return Err(MetricError::ParameterOutOfRange(format!("need 0 < r < h < 1, got r={r}, h={h}")));
    }
    if !(0.0 < mu && mu < std::f64::consts::PI) {
        return Err(MetricError::ParameterOutOfRange(format!("need 0 < mu < pi, got {mu}")));
    }
    let c = (mu / 2.0).cos();
    let hs = h * (mu / 2.0).sin();
    let inner = hs / (h * h + r * r - 2.0 * h * r * c).sqrt();
    let outer = hs / (1.0 + h * h - 2.0 * h * c).sqrt();
    let tangent = (1.0 + r) / (2.0 * h);

    Ok(if c < r / h {
        1.0
    } else if c <= h {
        h.max(inner)
    } else if c <= tangent {
        inner
    } else {
        outer
    })
}

/// Value of `s_B(x, conj x)` in the unit disk for `Im x > 0`.
///
/// Negative real parts are handled through the rotation by `pi`, which maps
/// the pair `{x, conj x}` onto `{-conj x, -x}`.
pub fn s_conjugate_disk(x: PlanePoint) -> Result<f64> {
    Domain::UnitDisk.check(x)?;
    if x.im <= 0.0 {
        return Err(MetricError::ParameterOutOfRange(format!("need Im x > 0, got {}", x.im)));
    }
    let (h, k) = (x.re.abs(), x.im);
    if (Complex64::new(h, k) - 0.5).norm() > 0.5 {
        Ok(x.norm())
    } else {
        Ok(k / ((1.0 - h).powi(2) + k * k).sqrt())
    }
}

/// The four points of the Euclidean midpoint rotation of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmrQuadruple {
    /// Rotated pair at equal distance from the origin.
    pub x0: PlanePoint,
    pub y0: PlanePoint,
    /// Rotated pair on the ray through the midpoint, `|x1| = |k| + q`.
    pub x1: PlanePoint,
    pub y1: PlanePoint,
    /// Midpoint of the pair.
    pub k: PlanePoint,
    /// Half the distance between the points.
    pub q: f64,
    /// Whether `x1` and `y1` both lie in the domain passed to [`emr`].
    pub x1y1_inside: bool,
}

/// Rotate `x, y` about their midpoint into an origin-equidistant pair and an
/// origin-collinear pair, flagging whether the latter stays inside `d`.
///
/// Fails with [`MetricError::MidpointAtOrigin`] when `x + y = 0`: every
/// rotation is then already equidistant and no collinear position exists.
pub fn emr(x: PlanePoint, y: PlanePoint, d: &Domain) -> Result<EmrQuadruple> {
    if coincident(x, y) {
        return Err(MetricError::CoincidentPoints);
    }
    let k = (x + y) / 2.0;
    let q = (x - k).norm();
    let mk = k.norm();
    if mk == 0.0 {
        return Err(MetricError::MidpointAtOrigin);
    }
    let dir = k / mk;
    let perp = dir * Complex64::i();
    let (x1, y1) = (k + dir * q, k - dir * q);
    Ok(EmrQuadruple {
        x0: k + perp * q,
        y0: k - perp * q,
        x1,
        y1,
        k,
        q,
        x1y1_inside: d.contains(x1) && d.contains(y1),
    })
}

/// Upper end of a midpoint-rotation sandwich.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UpperBound {
    Value(f64),
    /// The collinear rotation leaves the domain: rotating the pair pushes the
    /// metric arbitrarily close to 1 without reaching it.
    AttainsOne,
}

impl UpperBound {
    pub fn value(self) -> Option<f64> {
        match self {
            UpperBound::Value(v) => Some(v),
            UpperBound::AttainsOne => None,
        }
    }
}

/// Lower and upper bounds for `s` of the annulus from the midpoint rotation.
pub fn emr_bounds_s(x: PlanePoint, y: PlanePoint, r: f64) -> Result<(f64, UpperBound)> {
    let dom = Domain::annulus(r)?;
    dom.check(x)?;
    dom.check(y)?;
    let quad = match emr(x, y, &dom) {
        Ok(q) => q,
        Err(MetricError::MidpointAtOrigin) => {
            // y = -x: the pair is already equidistant and the segment crosses 0.
            return Ok((s_annulus(x, y, r)?.value, UpperBound::AttainsOne));
        }
        Err(MetricError::CoincidentPoints) => return Ok((0.0, UpperBound::Value(0.0))),
        Err(e) => return Err(e),
    };
    let h = quad.x0.norm();
    let mu = 2.0 * (quad.q / quad.k.norm()).atan();
    let lower = s_equidistant(h, mu, r)?;
    let upper = if quad.x1y1_inside {
        UpperBound::Value(s_collinear_unchecked(quad.x1, quad.y1, r))
    } else {
        UpperBound::AttainsOne
    };
    Ok((lower, upper))
}

/// The same sandwich in the punctured disk, evaluated with [`s_punctured`].
pub fn emr_bounds_s_punctured(x: PlanePoint, y: PlanePoint) -> Result<(f64, UpperBound)> {
    let dom = Domain::PuncturedDisk;
    dom.check(x)?;
    dom.check(y)?;
    let quad = match emr(x, y, &dom) {
        Ok(q) => q,
        Err(MetricError::MidpointAtOrigin) => return Ok((s_punctured(x, y)?.value, UpperBound::AttainsOne)),
        Err(MetricError::CoincidentPoints) => return Ok((0.0, UpperBound::Value(0.0))),
        Err(e) => return Err(e),
    };
    let lower = s_punctured(quad.x0, quad.y0)?.value;
    let upper = if quad.x1y1_inside {
        UpperBound::Value(s_punctured(quad.x1, quad.y1)?.value)
    } else {
        UpperBound::AttainsOne
    };
    Ok((lower, upper))
}

/// Collinear closed form without the angular check; the caller guarantees
/// the two points lie on one ray (as the EMR construction does).
fn s_collinear_unchecked(x: PlanePoint, y: PlanePoint, r: f64) -> f64 {
    let sum = x.norm() + y.norm();
    (x - y).norm() / (2.0 - sum).min(sum - 2.0 * r)
}

/// Diameter `q / (q + d)` of the closed ball `B(k, q)` in the triangular
/// ratio metric, `d` being the distance from the ball to the boundary.
pub fn s_ball_diameter(k: PlanePoint, q: f64, d: &Domain) -> Result<f64> {
    let m = k.norm();
    let dist = match *d {
        Domain::UnitDisk => 1.0 - m - q,
        Domain::ExteriorDisk { r } => m - q - r,
        Domain::Annulus { r } => (m - q - r).min(1.0 - m - q),
        Domain::PuncturedDisk => (m - q).min(1.0 - m - q),
    };
    if !(q > 0.0) || !(dist > 0.0) {
        return Err(MetricError::BallNotContained { re: k.re, im: k.im, radius: q });
    }
    Ok(q / (q + dist))
}

/// A point `y` such that `z = r e^{iu}` reflects `x` to `y` off the circle
/// `|z| = r`: `y = z + R (x' - z)` with `x'` the mirror image of `x` in the
/// line through 0 and `z`.
pub fn reflection_partner(x: PlanePoint, u: f64, r: f64, stretch: f64) -> Result<PlanePoint> {
    if x.norm() == 0.0 || !(stretch > 0.0) || !(r > 0.0) {
        return Err(MetricError::ParameterOutOfRange("need x != 0, r > 0, R > 0".into()));
    }
    let z = Complex64::from_polar(r, u);
    let mirrored = Complex64::from_polar(x.norm(), 2.0 * u - x.arg());
    Ok(z + (mirrored - z) * stretch)
}

/// Residual of the reflection quartic at `z`, scaled by the circle radius.
pub fn quartic_residual(x: PlanePoint, y: PlanePoint, j: f64, z: PlanePoint) -> f64 {
    let (xs, ys, w) = (x / j, y / j, z / j);
    horner(&reflection_quartic(xs, ys, 1.0), w).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::pt;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn dense_circle_min(x: PlanePoint, y: PlanePoint, j: f64, n: usize) -> f64 {
        (0..n)
            .map(|i| {
                let z = Complex64::from_polar(j, TAU * i as f64 / n as f64);
                (x - z).norm() + (z - y).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn ring_point(rng: &mut ChaCha8Rng, r: f64) -> PlanePoint {
        let m = rng.gen_range(r * r..1.0f64).sqrt();
        Complex64::from_polar(m.clamp(r + 1e-9, 1.0 - 1e-9), rng.gen_range(0.0..TAU))
    }

    #[test]
    fn symmetric_pairs_reflect_on_the_axis() {
        let x = Complex64::from_polar(0.8, PI / 6.0);
        let y = x.conj();
        let out = optimal_reflection_point(x, y, 1.0, Side::Inside).unwrap();
        assert!((out.chosen - pt(1.0, 0.0)).norm() < 1e-10);
        let inner = optimal_reflection_point(x, y, 0.6, Side::Outside).unwrap();
        assert!((inner.chosen - pt(0.6, 0.0)).norm() < 1e-10);
        assert!(quartic_residual(x, y, 0.6, inner.chosen) < 1e-9);
    }

    #[test]
    fn reflection_point_beats_dense_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let mut checked = 0;
        while checked < 40 {
            let r = rng.gen_range(0.1..0.9);
            let (x, y) = (ring_point(&mut rng, r), ring_point(&mut rng, r));
            let outer = optimal_reflection_point(x, y, 1.0, Side::Inside).unwrap();
            assert!(outer.sum <= dense_circle_min(x, y, 1.0, 1_000_000) + 1e-9);
            assert!((outer.chosen.norm() - 1.0).abs() < 1e-10);
            if !segment_meets_closed_disk(x, y, r) {
                let inner = optimal_reflection_point(x, y, r, Side::Outside).unwrap();
                assert!(inner.sum <= dense_circle_min(x, y, r, 1_000_000) + 1e-9);
                assert!((inner.chosen.norm() - r).abs() < 1e-10);
            }
            checked += 1;
        }
    }

    #[test]
    fn reflection_point_preconditions() {
        assert_eq!(
            optimal_reflection_point(pt(0.5, 0.0), pt(0.5, 0.0), 1.0, Side::Inside),
            Err(MetricError::CoincidentPoints)
        );
        assert!(matches!(
            optimal_reflection_point(pt(0.8, 0.0), pt(-0.8, 0.0), 0.5, Side::Outside),
            Err(MetricError::NoAdmissibleRoot { .. })
        ));
    }

    #[test]
    fn s_annulus_examples() {
        let v = s_annulus(pt(0.95, 0.0), pt(0.65, 0.0), 0.6).unwrap();
        assert_abs_diff_eq!(v.value, 0.75, epsilon = 1e-12);
        let w = s_annulus(Complex64::from_polar(0.8, 1.0), Complex64::from_polar(0.8, -1.0), 0.6).unwrap();
        assert_eq!(w.value, 1.0);
        assert_eq!(w.active_branch, Branch::SegmentHitsInner);
        assert_eq!(s_annulus(pt(0.7, 0.1), pt(0.7, 0.1), 0.6).unwrap().value, 0.0);
        assert!(s_annulus(pt(0.5, 0.0), pt(0.7, 0.0), 0.6).is_err());
    }

    #[test]
    fn s_annulus_rotation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..300 {
            let r = rng.gen_range(0.1..0.9);
            let (x, y) = (ring_point(&mut rng, r), ring_point(&mut rng, r));
            let rot = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
            let a = s_annulus(x, y, r).unwrap().value;
            let b = s_annulus(rot * x, rot * y, r).unwrap().value;
            let c = s_annulus(x.conj(), y.conj(), r).unwrap().value;
            assert!((a - b).abs() < 1e-10 && (a - c).abs() < 1e-10);
            assert!(a > 0.0 && a <= 1.0);
            assert!((a - s_annulus(y, x, r).unwrap().value).abs() < 1e-12);
        }
    }

    #[test]
    fn s_collinear_examples() {
        assert_abs_diff_eq!(s_collinear(pt(0.95, 0.0), pt(0.65, 0.0), 0.6).unwrap(), 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(s_collinear(pt(0.7, 0.0), pt(0.9, 0.0), 0.6).unwrap(), 0.5, epsilon = 1e-12);
        assert_eq!(s_collinear(pt(0.7, 0.0), pt(-0.9, 0.0), 0.6), Err(MetricError::NotCollinear));
        assert_eq!(s_collinear(pt(0.7, 0.0), pt(0.0, 0.9), 0.6), Err(MetricError::NotCollinear));
    }

    #[test]
    fn s_collinear_agrees_with_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..500 {
            let r = rng.gen_range(0.05..0.95);
            let t = rng.gen_range(0.0..TAU);
            let dir = Complex64::from_polar(1.0, t);
            let (a, b): (f64, f64) = (rng.gen_range(r..1.0), rng.gen_range(r..1.0));
            if (a - b).abs() < 1e-9 || a <= r || b <= r {
                continue;
            }
            // exact collinearity: same unit direction
            let (x, y) = (dir * a, dir * b);
            let closed = s_collinear(x, y, r).unwrap();
            let general = s_annulus(x, y, r).unwrap().value;
            assert!((closed - general).abs() < 1e-9, "r={r} a={a} b={b}: {closed} vs {general}");
        }
    }

    #[test]
    fn s_equidistant_examples() {
        assert_eq!(s_equidistant(0.8, 2.0, 0.6).unwrap(), 1.0);
        let c: f64 = 0.6f64.cos();
        let expected = 0.8 * 0.6f64.sin() / (1.0 + 0.64 - 1.6 * c).sqrt();
        assert_abs_diff_eq!(s_equidistant(0.8, 1.2, 0.3).unwrap(), expected, epsilon = 1e-15);
        let general = s_annulus(Complex64::from_polar(0.8, 0.6), Complex64::from_polar(0.8, -0.6), 0.3).unwrap();
        assert_abs_diff_eq!(general.value, expected, epsilon = 1e-9);
        assert!(s_equidistant(0.5, 1.0, 0.6).is_err());
        assert!(s_equidistant(0.8, PI, 0.6).is_err());
    }

    #[test]
    fn s_equidistant_agrees_with_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..500 {
            let r = rng.gen_range(0.05..0.95);
            let h = rng.gen_range(r..1.0);
            let mu = rng.gen_range(1e-3..PI - 1e-3);
            if h <= r {
                continue;
            }
            let x = Complex64::from_polar(h, mu / 2.0);
            let closed = s_equidistant(h, mu, r).unwrap();
            let general = s_annulus(x, x.conj(), r).unwrap().value;
            assert!((closed - general).abs() < 1e-9, "h={h} mu={mu} r={r}: {closed} vs {general}");
        }
    }

    #[test]
    fn conjugate_disk_examples() {
        assert_abs_diff_eq!(s_conjugate_disk(pt(0.1, 0.1)).unwrap(), 0.1 / 0.82f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(s_conjugate_disk(pt(0.1, 0.1)).unwrap(), 0.11043, epsilon = 1e-5);
        assert_abs_diff_eq!(s_conjugate_disk(pt(0.0, 0.8)).unwrap(), 0.8, epsilon = 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..300 {
            let x = Complex64::from_polar(rng.gen_range(0.01..0.99), rng.gen_range(0.01..PI - 0.01));
            let solver = s_unit_disk(x, x.conj()).unwrap().value;
            assert!((s_conjugate_disk(x).unwrap() - solver).abs() < 1e-9, "{x}");
        }
    }

    #[test]
    fn punctured_examples() {
        for h in [0.05, 0.2, 0.3] {
            assert_eq!(s_punctured(pt(h, 0.0), pt(-h, 0.0)).unwrap().value, 1.0);
        }
        let v = s_punctured(pt(0.5, 0.0), pt(0.6, 0.0)).unwrap().value;
        // unit-disk part: z = 1, sum 0.5 + 0.4
        assert_abs_diff_eq!(v, (0.1f64 / 0.9).max(0.1 / 1.1), epsilon = 1e-12);
        let (x, y) = (pt(0.3, 0.4), pt(-0.2, 0.1));
        assert_abs_diff_eq!(s_punctured(x, y).unwrap().value, s_punctured(y, x).unwrap().value, epsilon = 1e-12);
    }

    #[test]
    fn emr_construction() {
        let (x, y) = (pt(0.7, 0.1), pt(0.8, -0.05));
        let e = emr(x, y, &Domain::UnitDisk).unwrap();
        assert!((e.k - pt(0.75, 0.025)).norm() < 1e-15);
        assert_abs_diff_eq!(e.q, 0.008125f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(e.x1.norm(), e.k.norm() + e.q, epsilon = 1e-14);
        assert_abs_diff_eq!(e.y1.norm(), e.k.norm() - e.q, epsilon = 1e-14);
        assert_abs_diff_eq!(e.x0.norm(), e.y0.norm(), epsilon = 1e-14);
        for p in [e.x0, e.y0, e.x1, e.y1] {
            assert_abs_diff_eq!((p - e.k).norm(), e.q, epsilon = 1e-14);
        }
        assert!(((e.x0 + e.y0) / 2.0 - e.k).norm() < 1e-15);
        assert!(((e.x1 + e.y1) / 2.0 - e.k).norm() < 1e-15);
        assert_eq!(emr(pt(0.5, 0.1), pt(-0.5, -0.1), &Domain::UnitDisk), Err(MetricError::MidpointAtOrigin));
    }

    #[test]
    fn emr_fixed_points() {
        let same = |a: (PlanePoint, PlanePoint), b: (PlanePoint, PlanePoint)| {
            ((a.0 - b.0).norm() < 1e-14 && (a.1 - b.1).norm() < 1e-14)
                || ((a.0 - b.1).norm() < 1e-14 && (a.1 - b.0).norm() < 1e-14)
        };
        let (x, y) = (Complex64::from_polar(0.9, 0.4), Complex64::from_polar(0.7, 0.4));
        let e = emr(x, y, &Domain::UnitDisk).unwrap();
        assert!(same((e.x1, e.y1), (x, y)));
        let (x, y) = (Complex64::from_polar(0.8, 0.9), Complex64::from_polar(0.8, 0.2));
        let e = emr(x, y, &Domain::UnitDisk).unwrap();
        assert!(same((e.x0, e.y0), (x, y)));
    }

    #[test]
    fn emr_sandwich_examples() {
        let r = 0.4;
        let (x, y) = (Complex64::from_polar(0.9, 1.1), Complex64::from_polar(0.6, 1.1));
        let (_, upper) = emr_bounds_s(x, y, r).unwrap();
        let s = s_annulus(x, y, r).unwrap().value;
        assert!((upper.value().unwrap() - s).abs() < 1e-12);

        let (x, y) = (Complex64::from_polar(0.7, 0.3), Complex64::from_polar(0.7, -0.2));
        let (lower, _) = emr_bounds_s(x, y, r).unwrap();
        assert!((lower - s_annulus(x, y, r).unwrap().value).abs() < 1e-9);

        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..2000 {
            let r = rng.gen_range(0.05..0.95);
            let (x, y) = (ring_point(&mut rng, r), ring_point(&mut rng, r));
            let s = s_annulus(x, y, r).unwrap().value;
            let (lower, upper) = emr_bounds_s(x, y, r).unwrap();
            assert!(lower - 1e-12 <= s, "lower {lower} > s {s}");
            if let UpperBound::Value(u) = upper {
                assert!(s <= u + 1e-12, "s {s} > upper {u}");
            }
        }
    }

    #[test]
    fn ball_diameter_examples() {
        let ring = Domain::annulus(0.6).unwrap();
        assert_abs_diff_eq!(s_ball_diameter(pt(0.8, 0.0), 0.05, &ring).unwrap(), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(s_ball_diameter(pt(0.0, 0.0), 0.5, &Domain::UnitDisk).unwrap(), 0.5);
        assert!(matches!(s_ball_diameter(pt(0.8, 0.0), 0.3, &ring), Err(MetricError::BallNotContained { .. })));
        // the diameter is realised by the collinear pair k +- q
        let collinear = s_collinear(pt(0.85, 0.0), pt(0.75, 0.0), 0.6).unwrap();
        assert_abs_diff_eq!(collinear, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn reflection_partner_examples() {
        let x = Complex64::from_polar(1.2, 0.2);
        let y = reflection_partner(x, 0.0, 1.0, 1.0).unwrap();
        assert!((y - x.conj()).norm() < 1e-15);
        let sol = optimal_reflection_point(x, y, 1.0, Side::Outside).unwrap();
        assert!((sol.chosen - pt(1.0, 0.0)).norm() < 1e-6);

        let y = reflection_partner(x, x.arg(), 1.0, 2.5).unwrap();
        assert!((y.arg() - x.arg()).abs() < 1e-12);
    }

    #[test]
    fn reflection_partner_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let mut done = 0;
        while done < 100 {
            let r = rng.gen_range(0.2..0.9);
            let u = rng.gen_range(0.0..TAU);
            // x on the far side of the tangent line at z = r e^{iu}
            let x = Complex64::from_polar(rng.gen_range(1.05 * r..3.0 * r), u + rng.gen_range(-0.8..0.8));
            let z = Complex64::from_polar(r, u);
            if (x * z.conj()).re <= r * r * 1.01 {
                continue;
            }
            let y = reflection_partner(x, u, r, rng.gen_range(0.3..3.0)).unwrap();
            if y.norm() <= r || segment_meets_closed_disk(x, y, r) || (x - y).norm() < 1e-3 {
                continue;
            }
            let sol = optimal_reflection_point(x, y, r, Side::Outside).unwrap();
            assert!((sol.chosen - z).norm() < 1e-6, "expected {z}, got {}", sol.chosen);
            done += 1;
        }
    }

    #[test]
    fn midpoint_rotation_sum_is_increasing() {
        // f(mu) = sqrt(u - v cos mu) + sqrt(u + v cos mu) on [0, pi/2]
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        for _ in 0..200 {
            let v = rng.gen_range(0.01..2.0);
            let u = v + rng.gen_range(0.0..2.0);
            let f = |m: f64| (u - v * m.cos()).sqrt() + (u + v * m.cos()).sqrt();
            let n = 2000;
            for i in 0..n {
                let (a, b) = (PI / 2.0 * i as f64 / n as f64, PI / 2.0 * (i + 1) as f64 / n as f64);
                assert!(f(b) >= f(a) - 1e-14);
            }
        }
    }
}

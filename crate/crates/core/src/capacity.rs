//! The symmetric quantity `delta(E, F)`: the Möbius metric diameter of `E` in
//! the complement of `F`, its constant `c_n`, and the resulting lower bound
//! `cap(R(E, F)) >= c_n delta(E, F) / 2` for the ring capacity.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{MetricError, Result};
use crate::geometry::{chordal, point_segment_distance, ExtendedPoint, PlanePoint};
use crate::optimize::golden_max;

/// Default number of sampling intervals per curve.
pub const DEFAULT_SAMPLES: usize = 256;
/// Curves need at least this many sampling intervals.
pub const MIN_CURVE_SAMPLES: usize = 8;
/// Parameter tolerance of the golden-section refinement.
const REFINE_TOL: f64 = 1e-10;
const MAX_REFINE_ROUNDS: usize = 60;

/// Exact description of a planar set.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Segment { a: PlanePoint, b: PlanePoint },
    Circle { center: PlanePoint, radius: f64 },
    /// `{start + t dir : t >= 0}` together with the point at infinity.
    Ray { start: PlanePoint, direction: PlanePoint },
    Polyline { points: Vec<PlanePoint> },
    /// A finite set of points, possibly including infinity. Not refined.
    PointSet { points: Vec<ExtendedPoint> },
}

impl Shape {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(MetricError::BadSetDescription(m.to_string()));
        match self {
            Shape::Segment { a, b } if a == b => bad("segment endpoints coincide"),
            Shape::Circle { radius, .. } if !(*radius > 0.0 && radius.is_finite()) => bad("circle radius must be positive"),
            Shape::Ray { direction, .. } if direction.norm() == 0.0 => bad("ray direction must be non-zero"),
            Shape::Polyline { points } if points.len() < 2 => bad("polyline needs at least two vertices"),
            Shape::PointSet { points } if points.is_empty() => Err(MetricError::EmptySet),
            _ => Ok(()),
        }
    }

    fn is_periodic(&self) -> bool {
        matches!(self, Shape::Circle { .. })
    }

    /// Point at curve parameter `t in [0, 1]`; `None` for point sets.
    pub fn point_at(&self, t: f64) -> Option<ExtendedPoint> {
        Some(match self {
            Shape::Segment { a, b } => (a + (b - a) * t.clamp(0.0, 1.0)).into(),
            Shape::Circle { center, radius } => (center + Complex64::from_polar(*radius, TAU * t)).into(),
            Shape::Ray { start, direction } => {
                let t = t.clamp(0.0, 1.0);
                if t >= 1.0 {
                    ExtendedPoint::Infinity
                } else {
                    (start + direction * (t / (1.0 - t))).into()
                }
            }
            Shape::Polyline { points } => polyline_point(points, t.clamp(0.0, 1.0)).into(),
            Shape::PointSet { .. } => return None,
        })
    }
}

fn polyline_point(points: &[PlanePoint], t: f64) -> PlanePoint {
    let lengths: Vec<f64> = points.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let total: f64 = lengths.iter().sum();
    if total == 0.0 {
        return points[0];
    }
    let mut target = t * total;
    for (i, &len) in lengths.iter().enumerate() {
        if target <= len || i + 1 == lengths.len() {
            let s = if len > 0.0 { (target / len).clamp(0.0, 1.0) } else { 0.0 };
            return points[i] + (points[i + 1] - points[i]) * s;
        }
        target -= len;
    }
    points[points.len() - 1]
}

/// A set given by an exact shape plus a sampling of it.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySet {
    pub shape: Shape,
    /// Number of sampling intervals along the curve.
    pub sample_count: usize,
    pub samples: Vec<ExtendedPoint>,
    /// Curve parameters of the samples (empty for point sets).
    params: Vec<f64>,
}

impl BoundarySet {
    /// Sample `shape` at the parameters `i / sample_count`. Grids are nested,
    /// so doubling `sample_count` keeps every previous sample.
    pub fn new(shape: Shape, sample_count: usize) -> Result<Self> {
        shape.validate()?;
        if let Shape::PointSet { points } = &shape {
            let samples = points.clone();
            return Ok(BoundarySet { shape, sample_count: samples.len(), samples, params: Vec::new() });
        }
        if sample_count < MIN_CURVE_SAMPLES {
            return Err(MetricError::ParameterOutOfRange(format!(
                "curves need at least {MIN_CURVE_SAMPLES} samples, got {sample_count}"
            )));
        }
        let last = if shape.is_periodic() { sample_count - 1 } else { sample_count };
        let params: Vec<f64> = (0..=last).map(|i| i as f64 / sample_count as f64).collect();
        let samples = params.iter().map(|&t| shape.point_at(t).expect("curve shape")).collect();
        Ok(BoundarySet { shape, sample_count, samples, params })
    }

    pub fn segment(a: PlanePoint, b: PlanePoint, n: usize) -> Result<Self> {
        Self::new(Shape::Segment { a, b }, n)
    }

    pub fn circle(center: PlanePoint, radius: f64, n: usize) -> Result<Self> {
        Self::new(Shape::Circle { center, radius }, n)
    }

    pub fn ray(start: PlanePoint, direction: PlanePoint, n: usize) -> Result<Self> {
        Self::new(Shape::Ray { start, direction }, n)
    }

    pub fn points(points: Vec<ExtendedPoint>) -> Result<Self> {
        Self::new(Shape::PointSet { points }, 0)
    }

    /// Parse `segment:ax,ay:bx,by`, `circle:cx,cy:r`, `ray:sx,sy:dx,dy` or
    /// `polyline:x1,y1;x2,y2;...`.
    pub fn parse(desc: &str, sample_count: usize) -> Result<Self> {
        Self::new(desc.parse()?, sample_count)
    }

    /// The image of the samples under `f`, as a point set.
    pub fn map<F: Fn(ExtendedPoint) -> ExtendedPoint>(&self, f: F) -> Result<Self> {
        Self::points(self.samples.iter().map(|&p| f(p)).collect())
    }

    fn refinable(&self) -> bool {
        !self.params.is_empty()
    }
}

impl FromStr for Shape {
    type Err = MetricError;

    fn from_str(desc: &str) -> Result<Shape> {
        let bad = || MetricError::BadSetDescription(desc.to_string());
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
        let point = |s: &str| -> Result<PlanePoint> {
            let (a, b) = s.split_once(',').ok_or_else(bad)?;
            Ok(Complex64::new(num(a)?, num(b)?))
        };
        let (kind, rest) = desc.split_once(':').ok_or_else(bad)?;
        let parts: Vec<&str> = rest.split(':').collect();
        let shape = match (kind.trim(), parts.as_slice()) {
            ("segment", [a, b]) => Shape::Segment { a: point(a)?, b: point(b)? },
            ("circle", [c, r]) => Shape::Circle { center: point(c)?, radius: num(r)? },
            ("ray", [s, d]) => Shape::Ray { start: point(s)?, direction: point(d)? },
            ("polyline", [pts]) => {
                Shape::Polyline { points: pts.split(';').map(point).collect::<Result<Vec<_>>>()? }
            }
            _ => return Err(bad()),
        };
        shape.validate()?;
        Ok(shape)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = |z: &PlanePoint| format!("{},{}", z.re, z.im);
        match self {
            Shape::Segment { a, b } => write!(f, "segment:{}:{}", p(a), p(b)),
            Shape::Circle { center, radius } => write!(f, "circle:{}:{}", p(center), radius),
            Shape::Ray { start, direction } => write!(f, "ray:{}:{}", p(start), p(direction)),
            Shape::Polyline { points } => {
                write!(f, "polyline:{}", points.iter().map(p).collect::<Vec<_>>().join(";"))
            }
            Shape::PointSet { points } => write!(f, "points[{}]", points.len()),
        }
    }
}

/// Pieces the closure of a shape decomposes into.
#[derive(Debug, Clone, Copy)]
enum Piece {
    /// `{p + s d : 0 <= s <= 1}` or, for rays, `s >= 0`.
    Linear { p: PlanePoint, d: PlanePoint, unbounded: bool },
    Circle { c: PlanePoint, r: f64 },
    Point(ExtendedPoint),
}

fn pieces(shape: &Shape) -> Vec<Piece> {
    match shape {
        Shape::Segment { a, b } => vec![Piece::Linear { p: *a, d: b - a, unbounded: false }],
        Shape::Circle { center, radius } => vec![Piece::Circle { c: *center, r: *radius }],
        Shape::Ray { start, direction } => vec![
            Piece::Linear { p: *start, d: *direction, unbounded: true },
            Piece::Point(ExtendedPoint::Infinity),
        ],
        Shape::Polyline { points } => points
            .windows(2)
            .map(|w| Piece::Linear { p: w[0], d: w[1] - w[0], unbounded: false })
            .collect(),
        Shape::PointSet { points } => points.iter().map(|&p| Piece::Point(p)).collect(),
    }
}

fn point_linear_distance(q: PlanePoint, p: PlanePoint, d: PlanePoint, unbounded: bool) -> f64 {
    if unbounded {
        let s = (((q - p) * d.conj()).re / d.norm_sqr()).max(0.0);
        (p + d * s - q).norm()
    } else {
        point_segment_distance(q, p, p + d)
    }
}

fn cross2(u: PlanePoint, v: PlanePoint) -> f64 {
    u.re * v.im - u.im * v.re
}

fn linear_pieces_cross(p1: PlanePoint, d1: PlanePoint, u1: bool, p2: PlanePoint, d2: PlanePoint, u2: bool) -> bool {
    let den = cross2(d1, d2);
    if den == 0.0 {
        return false;
    }
    let w = p2 - p1;
    let s = cross2(w, d2) / den;
    let t = cross2(w, d1) / den;
    let ok = |x: f64, unbounded: bool| x >= 0.0 && (unbounded || x <= 1.0);
    ok(s, u1) && ok(t, u2)
}

/// Euclidean distance between two pieces (0 if they meet). Infinity is at
/// distance 0 from unbounded pieces and at infinite distance from the rest.
fn piece_distance(a: Piece, b: Piece) -> f64 {
    use Piece::*;
    match (a, b) {
        (Point(ExtendedPoint::Infinity), other) | (other, Point(ExtendedPoint::Infinity)) => match other {
            Linear { unbounded: true, .. } | Point(ExtendedPoint::Infinity) => 0.0,
            _ => f64::INFINITY,
        },
        (Point(ExtendedPoint::Finite(p)), Point(ExtendedPoint::Finite(q))) => (p - q).norm(),
        (Point(ExtendedPoint::Finite(q)), Linear { p, d, unbounded })
        | (Linear { p, d, unbounded }, Point(ExtendedPoint::Finite(q))) => point_linear_distance(q, p, d, unbounded),
        (Point(ExtendedPoint::Finite(q)), Circle { c, r }) | (Circle { c, r }, Point(ExtendedPoint::Finite(q))) => {
            ((q - c).norm() - r).abs()
        }
        (Circle { c: c1, r: r1 }, Circle { c: c2, r: r2 }) => {
            let d = (c1 - c2).norm();
            (d - r1 - r2).max(r1.max(r2) - d - r1.min(r2)).max(0.0)
        }
        (Circle { c, r }, Linear { p, d, unbounded }) | (Linear { p, d, unbounded }, Circle { c, r }) => {
            let near = point_linear_distance(c, p, d, unbounded);
            let far = if unbounded { f64::INFINITY } else { (p - c).norm().max((p + d - c).norm()) };
            if near > r {
                near - r
            } else if far < r {
                r - far
            } else {
                0.0
            }
        }
        (Linear { p: p1, d: d1, unbounded: u1 }, Linear { p: p2, d: d2, unbounded: u2 }) => {
            if u1 && u2 {
                return 0.0;
            }
            if linear_pieces_cross(p1, d1, u1, p2, d2, u2) {
                return 0.0;
            }
            let mut best = point_linear_distance(p1, p2, d2, u2).min(point_linear_distance(p2, p1, d1, u1));
            if !u1 {
                best = best.min(point_linear_distance(p1 + d1, p2, d2, u2));
            }
            if !u2 {
                best = best.min(point_linear_distance(p2 + d2, p1, d1, u1));
            }
            best
        }
    }
}

/// Whether the closures of the two sets are disjoint, judged from the exact
/// shapes and from the samples.
pub fn closures_disjoint(e: &BoundarySet, f: &BoundarySet) -> bool {
    let exact = pieces(&e.shape)
        .into_iter()
        .all(|a| pieces(&f.shape).into_iter().all(|b| piece_distance(a, b) > 0.0));
    let sampled = e.samples.iter().all(|&x| f.samples.iter().all(|&a| chordal(x, a) > 0.0));
    exact && sampled
}

/// Result of the four-point supremum with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaEf {
    pub value: f64,
    /// Value over the samples alone, before refinement.
    pub sampled: f64,
    /// False when the refinement kept climbing, typically because the
    /// closures nearly touch and the supremum is huge.
    pub converged: bool,
    pub x: ExtendedPoint,
    pub y: ExtendedPoint,
    pub a: ExtendedPoint,
    pub b: ExtendedPoint,
}

/// `|a, x, b, y|` in chordal form, 0 where it degenerates.
fn cross(a: ExtendedPoint, x: ExtendedPoint, b: ExtendedPoint, y: ExtendedPoint) -> f64 {
    let den = chordal(a, x) * chordal(b, y);
    if den == 0.0 {
        return 0.0;
    }
    chordal(a, b) * chordal(x, y) / den
}

/// `delta(E, F)` with diagnostics.
///
/// Writing `q` for the chordal metric, `|a, x, b, y|` factors as
/// `[q(x, y) / q(a, x)] [q(a, b) / q(b, y)]`, so for each `(a, y)` the two
/// factors are maximised independently over `x` and `b`.
pub fn delta_ef_detailed(e: &BoundarySet, f: &BoundarySet) -> Result<DeltaEf> {
    if e.samples.is_empty() || f.samples.is_empty() {
        return Err(MetricError::EmptySet);
    }
    if !closures_disjoint(e, f) {
        return Err(MetricError::SetsNotDisjoint);
    }
    let (es, fs) = (&e.samples, &f.samples);
    let matrix = |rows: &[ExtendedPoint], cols: &[ExtendedPoint]| -> Vec<Vec<f64>> {
        rows.iter().map(|&p| cols.iter().map(|&q| chordal(p, q)).collect()).collect()
    };
    let q_ee = matrix(es, es);
    let q_fe = matrix(fs, es);
    let q_ff = matrix(fs, fs);

    // (value, ia, iy, ix, ib)
    let best = (0..fs.len())
        .into_par_iter()
        .map(|ia| {
            let mut local = (0.0f64, ia, 0usize, 0usize, 0usize);
            for iy in 0..es.len() {
                let (mut fx, mut ix) = (0.0f64, 0usize);
                for (k, (&num, &den)) in q_ee.iter().map(|row| &row[iy]).zip(&q_fe[ia]).enumerate() {
                    let v = num / den;
                    if v > fx {
                        (fx, ix) = (v, k);
                    }
                }
                let (mut fb, mut ib) = (0.0f64, 0usize);
                for ib_ in 0..fs.len() {
                    let v = q_ff[ia][ib_] / q_fe[ib_][iy];
                    if v > fb {
                        (fb, ib) = (v, ib_);
                    }
                }
                if fx * fb > local.0 {
                    local = (fx * fb, ia, iy, ix, ib);
                }
            }
            local
        })
        .reduce(|| (0.0, 0, 0, 0, 0), |p, q| if q.0 > p.0 || (q.0 == p.0 && q.1 < p.1) { q } else { p });
    let (sampled, ia, iy, ix, ib) = best;

    let mut state = Refiner::new(e, f, [ix, iy, ia, ib]);
    let (value, converged) = state.run(sampled);
    let [x, y, a, b] = state.points();
    Ok(DeltaEf { value: value.ln_1p(), sampled: sampled.ln_1p(), converged, x, y, a, b })
}

/// `delta(E, F) = sup_{x, y in E; a, b in F} log(1 + |a, x, b, y|)`.
pub fn delta_ef(e: &BoundarySet, f: &BoundarySet) -> Result<f64> {
    Ok(delta_ef_detailed(e, f)?.value)
}

/// Coordinate ascent on the curve parameters of `(x, y, a, b)`.
struct Refiner<'s> {
    sets: [&'s BoundarySet; 4],
    params: [f64; 4],
    fixed: [ExtendedPoint; 4],
}

impl<'s> Refiner<'s> {
    fn new(e: &'s BoundarySet, f: &'s BoundarySet, idx: [usize; 4]) -> Self {
        let sets = [e, e, f, f];
        let mut params = [0.0; 4];
        let mut fixed = [ExtendedPoint::Infinity; 4];
        for k in 0..4 {
            fixed[k] = sets[k].samples[idx[k]];
            if sets[k].refinable() {
                params[k] = sets[k].params[idx[k]];
            }
        }
        Refiner { sets, params, fixed }
    }

    fn point(&self, k: usize, t: f64) -> ExtendedPoint {
        if self.sets[k].refinable() {
            self.sets[k].shape.point_at(t).expect("curve shape")
        } else {
            self.fixed[k]
        }
    }

    fn points(&self) -> [ExtendedPoint; 4] {
        [0, 1, 2, 3].map(|k| self.point(k, self.params[k]))
    }

    fn eval_with(&self, k: usize, t: f64) -> f64 {
        let mut p = self.points();
        p[k] = self.point(k, t);
        cross(p[2], p[0], p[3], p[1])
    }

    /// Returns the refined cross-ratio and whether the ascent settled.
    fn run(&mut self, sampled: f64) -> (f64, bool) {
        let mut value = sampled;
        let mut settled = false;
        for _ in 0..MAX_REFINE_ROUNDS {
            let before = value;
            for k in 0..4 {
                let set = self.sets[k];
                if !set.refinable() {
                    continue;
                }
                let h = 1.0 / set.sample_count as f64;
                let t0 = self.params[k];
                let (lo, hi) = if set.shape.is_periodic() { (t0 - h, t0 + h) } else { ((t0 - h).max(0.0), (t0 + h).min(1.0)) };
                let (t, v) = golden_max(|t| self.eval_with(k, t), lo, hi, REFINE_TOL, 200);
                if v > value {
                    self.params[k] = t;
                    value = v;
                }
            }
            if value <= before * (1.0 + 1e-15) {
                settled = true;
                break;
            }
        }
        let gain = value.ln_1p() - sampled.ln_1p();
        (value, settled && gain <= 1e-3 * value.ln_1p().max(1.0))
    }
}

/// The dimension constant `c_n`, with `c_2 = 2 / pi`.
pub fn c_constant(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(MetricError::ParameterOutOfRange(format!("need n >= 2, got {n}")));
    }
    if n == 2 {
        return Ok(2.0 / PI);
    }
    Ok(sphere_area(n - 2) * (2.0 * sine_power_integral(n)).powf(1.0 - n as f64))
}

/// Lower estimate `omega_{n-2} (pi (n - 1))^{1 - n}` of `c_n`.
pub fn c_constant_lower(n: u32) -> f64 {
    sphere_area(n - 2) * (PI * (n - 1) as f64).powf(1.0 - n as f64)
}

/// Surface area `omega_k` of the unit sphere `S^k`.
pub fn sphere_area(k: u32) -> f64 {
    let h = (k + 1) as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}

/// `int_0^{pi/2} (sin t)^{(2 - n)/(n - 1)} dt`.
///
/// After `t = u^m` with `m = n - 1` the integrand `m u^{m-1} sin(u^m)^p`
/// tends to `m` as `u -> 0`, so adaptive Simpson applies directly.
pub fn sine_power_integral(n: u32) -> f64 {
    let m = (n - 1) as f64;
    let p = (2.0 - n as f64) / m;
    let g = |u: f64| {
        if u == 0.0 {
            m
        } else {
            let t = u.powf(m);
            m * u.powf(m - 1.0) * t.sin().powf(p)
        }
    };
    adaptive_simpson(&g, 0.0, FRAC_PI_2.powf(1.0 / m), 1e-13)
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Möbius-invariant lower bound for the capacity of the ring `R(E, F)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityBound {
    pub delta_ef: f64,
    pub c_n: f64,
    /// `c_n delta_ef / 2`
    pub bound: f64,
    pub n: u32,
    pub converged: bool,
}

pub fn cap_lower_bound(e: &BoundarySet, f: &BoundarySet, n: u32) -> Result<CapacityBound> {
    let c_n = c_constant(n)?;
    let d = delta_ef_detailed(e, f)?;
    Ok(CapacityBound { delta_ef: d.value, c_n, bound: 0.5 * c_n * d.value, n, converged: d.converged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{invert_in_circle, pt};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn seg(a: f64, b: f64) -> BoundarySet {
        BoundarySet::segment(pt(a, 0.0), pt(b, 0.0), DEFAULT_SAMPLES).unwrap()
    }

    fn unit_circle() -> BoundarySet {
        BoundarySet::circle(pt(0.0, 0.0), 1.0, DEFAULT_SAMPLES).unwrap()
    }

    #[test]
    fn parses_descriptions() {
        assert_eq!("segment:-1,0:0,0".parse::<Shape>().unwrap(), Shape::Segment { a: pt(-1.0, 0.0), b: pt(0.0, 0.0) });
        assert_eq!("circle:0,0:1".parse::<Shape>().unwrap(), Shape::Circle { center: pt(0.0, 0.0), radius: 1.0 });
        assert_eq!("ray:1,0:1,0".parse::<Shape>().unwrap(), Shape::Ray { start: pt(1.0, 0.0), direction: pt(1.0, 0.0) });
        let poly = "polyline:0,0;1,0;1,1".parse::<Shape>().unwrap();
        assert_eq!(poly.to_string(), "polyline:0,0;1,0;1,1");
        for bad in ["segment:0,0", "circle:0,0:-1", "blob:1,2", "ray:0,0:0,0", "segment:a,0:1,1"] {
            assert!(bad.parse::<Shape>().is_err(), "{bad}");
        }
    }

    #[test]
    fn samples_lie_on_shapes() {
        let ray = BoundarySet::ray(pt(1.0, 0.0), pt(1.0, 0.0), 16).unwrap();
        assert_eq!(ray.samples.iter().filter(|p| p.is_infinite()).count(), 1);
        assert_eq!(ray.samples.len(), 17);
        let circle = BoundarySet::circle(pt(0.5, 0.5), 2.0, 16).unwrap();
        for p in &circle.samples {
            assert!(((p.finite().unwrap() - pt(0.5, 0.5)).norm() - 2.0).abs() < 1e-12);
        }
        let poly = BoundarySet::parse("polyline:0,0;1,0;1,1", 8).unwrap();
        assert_eq!(poly.samples[4], ExtendedPoint::Finite(pt(1.0, 0.0)));
        assert!(BoundarySet::segment(pt(0.0, 0.0), pt(1.0, 0.0), 4).is_err());
    }

    #[test]
    fn disjointness() {
        assert!(closures_disjoint(&seg(-1.0, 0.0), &BoundarySet::ray(pt(1.0, 0.0), pt(1.0, 0.0), 16).unwrap()));
        assert!(!closures_disjoint(&seg(-1.0, 1.0), &unit_circle()));
        assert!(!closures_disjoint(
            &BoundarySet::ray(pt(2.0, 0.0), pt(1.0, 0.0), 16).unwrap(),
            &BoundarySet::ray(pt(0.0, 2.0), pt(0.0, 1.0), 16).unwrap()
        ));
        assert!(!closures_disjoint(
            &BoundarySet::parse("segment:0,-1:0,1", 8).unwrap(),
            &BoundarySet::parse("segment:-1,0:1,0", 8).unwrap()
        ));
        assert!(closures_disjoint(&unit_circle(), &BoundarySet::circle(pt(0.0, 0.0), 0.5, 16).unwrap()));
        assert!(!closures_disjoint(&unit_circle(), &BoundarySet::circle(pt(0.5, 0.0), 0.5, 16).unwrap()));
        assert_eq!(delta_ef(&seg(-1.0, 1.0), &unit_circle()), Err(MetricError::SetsNotDisjoint));
    }

    #[test]
    fn segment_and_ray() {
        for s in [0.5, 1.0, 2.0] {
            let f = BoundarySet::ray(pt(s, 0.0), pt(1.0, 0.0), DEFAULT_SAMPLES).unwrap();
            let d = delta_ef_detailed(&seg(-1.0, 0.0), &f).unwrap();
            assert_abs_diff_eq!(d.value, (1.0 + 1.0 / s).ln(), epsilon = 1e-12);
            assert!(d.converged);
        }
    }

    #[test]
    fn segment_and_unit_circle() {
        for r in [0.25, 0.5, 0.75] {
            let d = delta_ef(&seg(0.0, r), &unit_circle()).unwrap();
            assert_abs_diff_eq!(d, 2.0 * r.atanh(), epsilon = 1e-10);
        }
    }

    #[test]
    fn symmetric_in_e_and_f() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for _ in 0..10 {
            let a = pt(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            let b = a + Complex64::from_polar(rng.gen_range(0.1..0.4), rng.gen_range(0.0..TAU));
            let e = BoundarySet::segment(a, b, 64).unwrap();
            let f = BoundarySet::circle(pt(rng.gen_range(-0.1..0.1), 0.0), rng.gen_range(1.2..2.0), 64).unwrap();
            let (ef, fe) = (delta_ef(&e, &f).unwrap(), delta_ef(&f, &e).unwrap());
            assert!((ef - fe).abs() <= 1e-6, "{ef} vs {fe}");
        }
    }

    #[test]
    fn monotone_in_density() {
        let e = BoundarySet::parse("polyline:0,0;0.3,0.1;0.2,0.4", 8).unwrap();
        let mut prev = 0.0;
        for n in [8, 16, 32, 64] {
            let e = BoundarySet::new(e.shape.clone(), n).unwrap();
            let f = BoundarySet::circle(pt(0.1, 0.0), 1.0, n).unwrap();
            let d = delta_ef_detailed(&e, &f).unwrap();
            assert!(d.sampled >= prev);
            assert!(d.value >= d.sampled);
            prev = d.sampled;
        }
    }

    #[test]
    fn interior_points_do_not_help() {
        let f = unit_circle();
        let boundary = BoundarySet::circle(pt(0.2, 0.1), 0.3, 64).unwrap();
        let mut with_interior = boundary.samples.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..50 {
            let p = pt(0.2, 0.1) + Complex64::from_polar(rng.gen_range(0.0..0.3), rng.gen_range(0.0..TAU));
            with_interior.push(p.into());
        }
        let only = delta_ef(&BoundarySet::points(boundary.samples.clone()).unwrap(), &f).unwrap();
        let more = delta_ef(&BoundarySet::points(with_interior).unwrap(), &f).unwrap();
        assert!(more <= only + 1e-12);
    }

    #[test]
    fn bound_is_moebius_invariant() {
        let e = seg(0.0, 0.5);
        let f = BoundarySet::circle(pt(0.0, 0.0), 1.0, 64).unwrap();
        let inv = |p| invert_in_circle(p, pt(2.0, 1.0), 1.5);
        let (ep, fp) = (BoundarySet::points(e.samples.clone()).unwrap(), BoundarySet::points(f.samples.clone()).unwrap());
        let before = cap_lower_bound(&ep, &fp, 2).unwrap();
        let after = cap_lower_bound(&ep.map(inv).unwrap(), &fp.map(inv).unwrap(), 2).unwrap();
        assert!((before.bound - after.bound).abs() < 1e-5);
        assert_eq!(before.bound, 0.5 * before.c_n * before.delta_ef);
    }

    #[test]
    fn near_touching_sets_report_no_convergence() {
        let e = BoundarySet::circle(pt(0.0, 0.0), 0.5, 8).unwrap();
        let f = BoundarySet::circle(Complex64::from_polar(1.0 + 1e-7, 0.3), 0.5, 8).unwrap();
        let d = delta_ef_detailed(&e, &f).unwrap();
        assert!(d.value.is_finite() && d.value >= d.sampled);
        assert!(!d.converged);
    }

    #[test]
    fn c_constant_values() {
        assert_eq!(c_constant(2).unwrap(), 2.0 / PI);
        assert!(c_constant(1).is_err());
        assert_abs_diff_eq!(sphere_area(1), TAU, epsilon = 1e-14);
        assert_abs_diff_eq!(sphere_area(2), 4.0 * PI, epsilon = 1e-13);
        for n in 3..=8 {
            assert!(c_constant(n).unwrap() >= c_constant_lower(n));
        }
    }

    #[test]
    fn sine_integral_matches_closed_form() {
        for n in 3..=8u32 {
            let p = (2.0 - n as f64) / (n - 1) as f64;
            let beta = PI.sqrt() / 2.0 * gamma((p + 1.0) / 2.0) / gamma(p / 2.0 + 1.0);
            let got = sine_power_integral(n);
            assert!((got - beta).abs() <= 1e-10 * beta, "n={n}: {got} vs {beta}");
        }
    }

    #[test]
    fn sine_integral_second_rule() {
        // Gauss-Legendre on the substituted integrand as an independent rule
        let nodes = [
            (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
            (-0.538_469_310_105_683, 0.478_628_670_499_366_5),
            (0.0, 0.568_888_888_888_888_9),
            (0.538_469_310_105_683, 0.478_628_670_499_366_5),
            (0.906_179_845_938_664, 0.236_926_885_056_189_1),
        ];
        for n in [3u32, 5, 8] {
            let m = (n - 1) as f64;
            let p = (2.0 - n as f64) / m;
            let top = FRAC_PI_2.powf(1.0 / m);
            let panels = 400;
            let mut sum = 0.0;
            for k in 0..panels {
                let (a, b) = (top * k as f64 / panels as f64, top * (k + 1) as f64 / panels as f64);
                for (x, w) in nodes {
                    let u = 0.5 * (b - a) * x + 0.5 * (a + b);
                    sum += 0.5 * (b - a) * w * m * u.powf(m - 1.0) * u.powf(m).sin().powf(p);
                }
            }
            let c3 = sphere_area(n - 2) * (2.0 * sum).powf(1.0 - n as f64);
            assert!((c3 - c_constant(n).unwrap()).abs() < 1e-6);
        }
    }
}

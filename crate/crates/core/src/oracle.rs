//! Brute-force evaluation of `s` and `delta` straight from their definitions,
//! by uniform angular sampling of every boundary component followed by
//! golden-section refinement. Slow on purpose; used to validate everything else.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::base_metrics::coincident;
use crate::domain::Domain;
use crate::error::{MetricError, Result};
use crate::geometry::PlanePoint;
use crate::optimize::{golden_max, golden_min};

/// Sampling and refinement settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    pub samples_per_circle: usize,
    /// Rounds of alternating one-variable refinement.
    pub refinement_iters: usize,
    /// Only used to pick test points; boundary samples are never random.
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { samples_per_circle: 4096, refinement_iters: 40, seed: 42 }
    }
}

impl OracleConfig {
    pub fn with_samples(samples_per_circle: usize) -> Self {
        OracleConfig { samples_per_circle, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.samples_per_circle < 64 {
            return Err(MetricError::ParameterOutOfRange(format!(
                "oracle needs at least 64 samples per circle, got {}",
                self.samples_per_circle
            )));
        }
        Ok(())
    }
}

/// A boundary component of one of the supported domains.
#[derive(Debug, Clone, Copy)]
enum Component {
    /// Circle `|z| = radius` parametrised by angle.
    Circle(f64),
    /// The puncture at the origin.
    Origin,
    /// The point at infinity.
    Infinity,
}

fn components(d: &Domain) -> Vec<Component> {
    match *d {
        Domain::UnitDisk => vec![Component::Circle(1.0)],
        Domain::ExteriorDisk { r } => vec![Component::Circle(r), Component::Infinity],
        Domain::Annulus { r } => vec![Component::Circle(1.0), Component::Circle(r)],
        Domain::PuncturedDisk => vec![Component::Circle(1.0), Component::Origin],
    }
}

/// `|x - y| / inf_z (|x - z| + |z - y|)` over sampled boundary points.
pub fn s_oracle(d: &Domain, x: PlanePoint, y: PlanePoint, cfg: &OracleConfig) -> Result<f64> {
    cfg.validate()?;
    d.check(x)?;
    d.check(y)?;
    if coincident(x, y) {
        return Ok(0.0);
    }
    let n = cfg.samples_per_circle;
    let step = TAU / n as f64;
    let mut best = f64::INFINITY;
    for comp in components(d) {
        match comp {
            Component::Circle(rad) => {
                let sum = |t: f64| {
                    let z = Complex64::from_polar(rad, t);
                    (x - z).norm() + (z - y).norm()
                };
                let (mut t0, mut v0) = (0.0, f64::INFINITY);
                for i in 0..n {
                    let t = step * i as f64;
                    let v = sum(t);
                    if v < v0 {
                        (t0, v0) = (t, v);
                    }
                }
                let (_, refined) = golden_min(sum, t0 - step, t0 + step, 1e-15, 200);
                best = best.min(v0).min(refined);
            }
            Component::Origin => best = best.min(x.norm() + y.norm()),
            Component::Infinity => {}
        }
    }
    Ok(((x - y).norm() / best).min(1.0))
}

/// One side `(a or b)` of the cross-ratio: a sampled circle or a fixed point.
#[derive(Clone, Copy)]
enum Side {
    Circle(f64),
    Point(Complex64),
    Infinity,
}

impl Side {
    fn point(self, t: f64) -> Option<Complex64> {
        match self {
            Side::Circle(rad) => Some(Complex64::from_polar(rad, t)),
            Side::Point(p) => Some(p),
            Side::Infinity => None,
        }
    }

    fn is_circle(self) -> bool {
        matches!(self, Side::Circle(_))
    }
}

impl From<Component> for Side {
    fn from(c: Component) -> Self {
        match c {
            Component::Circle(r) => Side::Circle(r),
            Component::Origin => Side::Point(Complex64::new(0.0, 0.0)),
            Component::Infinity => Side::Infinity,
        }
    }
}

/// `|a, x, b, y|` with `None` standing for the point at infinity.
fn cross(a: Option<Complex64>, x: PlanePoint, b: Option<Complex64>, y: PlanePoint) -> f64 {
    let dxy = (x - y).norm();
    match (a, b) {
        (Some(a), Some(b)) => (a - b).norm() * dxy / ((a - x).norm() * (b - y).norm()),
        (Some(a), None) => dxy / (a - x).norm(),
        (None, Some(b)) => dxy / (b - y).norm(),
        (None, None) => 0.0,
    }
}

/// Best sampled pair `(ta, tb, value)` for two concentric circles.
///
/// `|a_i - b_j|` only depends on `(i - j) mod n`, so the double loop reduces
/// to `max_{i,j} D[(i - j) mod n] / (|a_i - x| |b_j - y|)`, which runs over
/// contiguous memory.
fn circle_pair_scan(ra: f64, rb: f64, x: PlanePoint, y: PlanePoint, n: usize) -> (f64, f64, f64) {
    let step = TAU / n as f64;
    let unit: Vec<Complex64> = (0..n).map(|i| Complex64::from_polar(1.0, step * i as f64)).collect();
    let inv_a: Vec<f64> = unit.iter().map(|&e| 1.0 / (e * ra - x).norm()).collect();
    let inv_b: Vec<f64> = unit.iter().map(|&e| 1.0 / (e * rb - y).norm()).collect();
    let diff: Vec<f64> = unit.iter().map(|&e| (e * ra - rb).norm()).collect();
    // rev[n - 1 - i + j] = diff[(i - j) mod n] for j in 0..n
    let rev: Vec<f64> = (0..2 * n).map(|m| diff[(3 * n - 1 - m) % n]).collect();

    let mut best = (0usize, 0usize, f64::NEG_INFINITY);
    for i in 0..n {
        let row = &rev[n - 1 - i..2 * n - 1 - i];
        let mut acc = [f64::NEG_INFINITY; 8];
        for (chunk_d, chunk_b) in row.chunks_exact(8).zip(inv_b.chunks_exact(8)) {
            for l in 0..8 {
                acc[l] = acc[l].max(chunk_d[l] * chunk_b[l]);
            }
        }
        let tail = n - n % 8;
        let mut row_max = acc.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for j in tail..n {
            row_max = row_max.max(row[j] * inv_b[j]);
        }
        let v = row_max * inv_a[i];
        if v > best.2 {
            let j = (0..n).max_by(|&p, &q| (row[p] * inv_b[p]).total_cmp(&(row[q] * inv_b[q]))).unwrap_or(0);
            best = (i, j, v);
        }
    }
    let dxy = (x - y).norm();
    (step * best.0 as f64, step * best.1 as f64, best.2 * dxy)
}

/// Best sampled pair for two sides of which at most one is a circle.
fn mixed_scan(a: Side, b: Side, x: PlanePoint, y: PlanePoint, n: usize) -> (f64, f64, f64) {
    let step = TAU / n as f64;
    let (na, nb) = (if a.is_circle() { n } else { 1 }, if b.is_circle() { n } else { 1 });
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    for i in 0..na {
        let ta = step * i as f64;
        for j in 0..nb {
            let tb = step * j as f64;
            let v = cross(a.point(ta), x, b.point(tb), y);
            if v > best.2 {
                best = (ta, tb, v);
            }
        }
    }
    best
}

/// `sup_{a, b in dG} log(1 + |a, x, b, y|)` over sampled boundary pairs,
/// refined by alternating golden-section searches on the two angles.
pub fn delta_oracle(d: &Domain, x: PlanePoint, y: PlanePoint, cfg: &OracleConfig) -> Result<f64> {
    cfg.validate()?;
    d.check(x)?;
    d.check(y)?;
    if coincident(x, y) {
        return Ok(0.0);
    }
    let n = cfg.samples_per_circle;
    let step = TAU / n as f64;
    let comps = components(d);
    let mut best = 0.0f64;
    for &ca in &comps {
        for &cb in &comps {
            let (a, b) = (Side::from(ca), Side::from(cb));
            let (mut ta, mut tb, sampled) = match (a, b) {
                (Side::Circle(ra), Side::Circle(rb)) => circle_pair_scan(ra, rb, x, y, n),
                _ => mixed_scan(a, b, x, y, n),
            };
            let mut value = sampled;
            let f = |ta: f64, tb: f64| cross(a.point(ta), x, b.point(tb), y);
            let (ca0, cb0) = (ta, tb);
            for _ in 0..cfg.refinement_iters {
                let before = value;
                if a.is_circle() {
                    let (t, v) = golden_max(|t| f(t, tb), ca0 - step, ca0 + step, 1e-15, 200);
                    if v > value {
                        (ta, value) = (t, v);
                    }
                }
                if b.is_circle() {
                    let (t, v) = golden_max(|t| f(ta, t), cb0 - step, cb0 + step, 1e-15, 200);
                    if v > value {
                        (tb, value) = (t, v);
                    }
                }
                if value <= before {
                    break;
                }
            }
            best = best.max(value);
        }
    }
    Ok(best.ln_1p())
}

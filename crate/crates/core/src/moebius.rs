//! Möbius metric `delta_G(x, y) = sup_{a, b in dG} log(1 + |a, x, b, y|)`.
//!
//! In the annulus the two-point supremum collapses to a maximum of two
//! hyperbolic distances and a one-variable supremum over the angle of the
//! inner boundary point; the matching outer point is explicit.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::base_metrics::{coincident, j_star, rho_disk, rho_exterior, th_half_rho_disk, Branch, MetricResult};
use crate::domain::Domain;
use crate::error::{MetricError, Result};
use crate::geometry::{ring_inversion, PlanePoint};
use crate::optimize::scan_max;
use crate::tri_ratio::{emr, s_metric};

/// Pre-scan intervals for the supremum over `v`.
const V_SCAN: usize = 64;
/// Absolute tolerance on `v` for the golden-section refinement.
const V_TOL: f64 = 1e-12;
/// Roots this far outside `[0, 1]` are rounding noise and get clamped.
const ROOT_SLACK: f64 = 1e-9;
/// Angular tolerance for collinearity with the origin.
const COLLINEAR_TOL: f64 = 1e-12;

/// Coefficients of the quadratic `c1 t^2 + c2 t + c3 = 0` in `t = sin u`
/// whose positive root locates the optimal outer boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl CrossCoefficients {
    pub fn new(v: f64, absx: f64, r: f64) -> Self {
        let (s, c) = v.sin_cos();
        let (x2, r2) = (absx * absx, r * r);
        CrossCoefficients {
            c1: x2 * (1.0 + r2).powi(2) + r2 * (1.0 + x2).powi(2) - 2.0 * r * absx * (1.0 + r2) * (1.0 + x2) * c,
            c2: 4.0 * r * absx * s * (absx * (1.0 + r2) - r * (1.0 + x2) * c),
            c3: -r2 * s * s * (1.0 - x2).powi(2),
        }
    }

    pub fn discriminant(&self) -> f64 {
        self.c2 * self.c2 - 4.0 * self.c1 * self.c3
    }

    /// The non-negative root, computed without cancellation.
    pub fn positive_root(&self) -> f64 {
        let sq = self.discriminant().max(0.0).sqrt();
        if self.c2 > 0.0 {
            let den = -self.c2 - sq;
            if den == 0.0 {
                0.0
            } else {
                2.0 * self.c3 / den
            }
        } else {
            (-self.c2 + sq) / (2.0 * self.c1)
        }
    }
}

/// Angle `u in [0, pi/2]` such that `a = e^{-iu}` maximises the cross-ratio
/// for the inner boundary point `b = r e^{iv}`.
pub fn u_of_v(v: f64, absx: f64, r: f64) -> Result<f64> {
    if !(0.0 < r && r < absx && absx < 1.0) {
        return Err(MetricError::ParameterOutOfRange(format!("need 0 < r < |x| < 1, got r={r}, |x|={absx}")));
    }
    let coeffs = CrossCoefficients::new(v, absx, r);
    if coeffs.c1 < 1e-300 {
        return Err(MetricError::DegenerateCoefficients);
    }
    let t = coeffs.positive_root();
    if !(-ROOT_SLACK..=1.0 + ROOT_SLACK).contains(&t) {
        return Err(MetricError::RootOutOfRange(t));
    }
    Ok(t.clamp(0.0, 1.0).asin())
}

/// `|a, x, b, y| = |a - b||x - y| / (|a - x||b - y|)` for finite points.
#[inline]
pub(crate) fn cross_quotient(a: PlanePoint, x: PlanePoint, b: PlanePoint, y: PlanePoint) -> f64 {
    (a - b).norm() * (x - y).norm() / ((a - x).norm() * (b - y).norm())
}

/// The annulus pair after the value-preserving normalisation: `|y| <= |x|`,
/// `x` on the positive real axis and `y = |y| e^{i mu}` with `mu in [0, pi]`.
#[derive(Debug, Clone, Copy)]
struct Normalized {
    absx: f64,
    absy: f64,
    mu: f64,
}

impl Normalized {
    fn new(x: PlanePoint, y: PlanePoint) -> Self {
        let (x, y) = if y.norm() <= x.norm() { (x, y) } else { (y, x) };
        let cross = x.re * y.im - x.im * y.re;
        let dot = x.re * y.re + x.im * y.im;
        Normalized { absx: x.norm(), absy: y.norm(), mu: cross.atan2(dot).abs() }
    }

    fn x(&self) -> PlanePoint {
        Complex64::new(self.absx, 0.0)
    }

    fn y(&self) -> PlanePoint {
        Complex64::from_polar(self.absy, self.mu)
    }
}

/// Supremum of `|a, x, b, y|` over `a` on the unit circle and `b` on `|b| = r`
/// for a normalised pair, with the maximising `(v, u)`.
fn cross_supremum(n: &Normalized, r: f64) -> Result<(f64, f64, f64)> {
    let (x, y) = (n.x(), n.y());
    let mut failure = None;
    let mut objective = |v: f64| match u_of_v(v, n.absx, r) {
        Ok(u) => cross_quotient(Complex64::from_polar(1.0, -u), x, Complex64::from_polar(r, v), y),
        Err(e) => {
            failure.get_or_insert(e);
            f64::NEG_INFINITY
        }
    };
    let (v, q) = scan_max(&mut objective, n.mu, PI, V_SCAN, V_TOL);
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((q, v, u_of_v(v, n.absx, r)?))
}

/// Diagnostic record of an annulus Möbius-metric evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaAnnulusTrace {
    pub value: f64,
    pub maximand: Branch,
    /// `rho` of the unit disk at `(x, y)`.
    pub disk_part: f64,
    /// `rho` of the unit disk at the images under `z -> r z / |z|^2`.
    pub exterior_part: f64,
    /// `log(1 + sup |a, x, b, y|)` with `a`, `b` on different circles.
    pub cross_part: f64,
    /// Maximising angle of the inner boundary point, in `[mu, pi]`.
    pub v_star: f64,
    /// `u(v_star)`, so that the outer boundary point is `e^{-i u_star}`.
    pub u_star: f64,
    /// Angle at the origin between the two points.
    pub mu: f64,
}

impl DeltaAnnulusTrace {
    fn coincident(mu: f64) -> Self {
        DeltaAnnulusTrace {
            value: 0.0,
            maximand: Branch::Coincident,
            disk_part: 0.0,
            exterior_part: 0.0,
            cross_part: 0.0,
            v_star: PI,
            u_star: 0.0,
            mu,
        }
    }
}

/// Möbius metric of the annulus `r < |z| < 1`.
pub fn delta_annulus(x: PlanePoint, y: PlanePoint, r: f64) -> Result<DeltaAnnulusTrace> {
    let dom = Domain::annulus(r)?;
    dom.check(x)?;
    dom.check(y)?;
    let n = Normalized::new(x, y);
    if coincident(x, y) {
        return Ok(DeltaAnnulusTrace::coincident(n.mu));
    }
    let disk_part = rho_disk(x, y)?;
    let exterior_part = rho_disk(ring_inversion(x, r), ring_inversion(y, r))?;
    let (q, v_star, u_star) = cross_supremum(&n, r)?;
    let cross_part = q.ln_1p();

    let (value, maximand) = [
        (disk_part, Branch::DiskPart),
        (exterior_part, Branch::ExteriorPart),
        (cross_part, Branch::CrossPart),
    ]
    .into_iter()
    .fold((f64::NEG_INFINITY, Branch::DiskPart), |acc, p| if p.0 > acc.0 { p } else { acc });
    Ok(DeltaAnnulusTrace { value, maximand, disk_part, exterior_part, cross_part, v_star, u_star, mu: n.mu })
}

fn collinear_angle(x: PlanePoint, y: PlanePoint) -> Result<f64> {
    let (mx, my) = (x.norm(), y.norm());
    let sin = (x.re * y.im - x.im * y.re) / (mx * my);
    if sin.abs() > COLLINEAR_TOL {
        return Err(MetricError::NotCollinear);
    }
    Ok(if x.re * y.re + x.im * y.im > 0.0 { 0.0 } else { PI })
}

/// `th(delta / 2)` for two points on a line through the origin, as the
/// largest of three explicit quotients.
pub fn th_half_delta_collinear(x: PlanePoint, y: PlanePoint, r: f64) -> Result<f64> {
    let dom = Domain::annulus(r)?;
    dom.check(x)?;
    dom.check(y)?;
    if coincident(x, y) {
        return Ok(0.0);
    }
    let mu = collinear_angle(x, y)?;
    let (a, b) = if y.norm() <= x.norm() { (x.norm(), y.norm()) } else { (y.norm(), x.norm()) };
    let gap = 2.0 * (1.0 - a) * (b - r);
    let quotients = if mu == 0.0 {
        let d = a - b;
        [d / (1.0 - a * b), r * d / (a * b - r * r), d * (1.0 - r) / (gap + d * (1.0 - r))]
    } else {
        let d = a + b;
        [d / (1.0 + a * b), r * d / (a * b + r * r), d * (1.0 + r) / (gap + d * (1.0 + r))]
    };
    Ok(quotients.into_iter().fold(0.0, f64::max))
}

/// Closed-form Möbius metric for two points collinear with the origin.
pub fn delta_collinear(x: PlanePoint, y: PlanePoint, r: f64) -> Result<f64> {
    Ok(2.0 * th_half_delta_collinear(x, y, r)?.atanh())
}

/// Möbius metric of the punctured disk `0 < |z| < 1`: the larger of the
/// hyperbolic distance and `log(1 + |x - y| / ((1 - |x|)|y|))` with `|y| <= |x|`.
pub fn delta_punctured(x: PlanePoint, y: PlanePoint) -> Result<MetricResult> {
    let dom = Domain::PuncturedDisk;
    dom.check(x)?;
    dom.check(y)?;
    if coincident(x, y) {
        return Ok(MetricResult::zero());
    }
    let (x, y) = if y.norm() <= x.norm() { (x, y) } else { (y, x) };
    let disk = rho_disk(x, y)?;
    let puncture = ((x - y).norm() / ((1.0 - x.norm()) * y.norm())).ln_1p();
    Ok(if puncture > disk {
        let a = x / x.norm();
        MetricResult { value: puncture, active_branch: Branch::Puncture, witnesses: vec![a, Complex64::new(0.0, 0.0)] }
    } else {
        MetricResult { value: disk, active_branch: Branch::DiskPart, witnesses: Vec::new() }
    })
}

/// Möbius metric of the unit disk, which is the hyperbolic metric.
pub fn delta_disk(x: PlanePoint, y: PlanePoint) -> Result<f64> {
    rho_disk(x, y)
}

/// Möbius metric in any supported domain.
pub fn delta_metric(d: &Domain, x: PlanePoint, y: PlanePoint) -> Result<f64> {
    match *d {
        Domain::UnitDisk => delta_disk(x, y),
        Domain::ExteriorDisk { r } => rho_exterior(x, y, r),
        Domain::Annulus { r } => Ok(delta_annulus(x, y, r)?.value),
        Domain::PuncturedDisk => Ok(delta_punctured(x, y)?.value),
    }
}

/// `th(delta / 2)` in any supported domain.
pub fn th_half_delta(d: &Domain, x: PlanePoint, y: PlanePoint) -> Result<f64> {
    if let Domain::UnitDisk = d {
        d.check(x)?;
        d.check(y)?;
        return Ok(if coincident(x, y) { 0.0 } else { th_half_rho_disk(x, y) });
    }
    Ok((delta_metric(d, x, y)? / 2.0).tanh())
}

/// Midpoint-rotation bounds for the Möbius metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaBounds {
    /// `delta(x0, y0)`
    pub lower: f64,
    /// `delta(x1, y1)`
    pub upper: f64,
    /// True when the upper bound rests on the unproven monotonicity of the
    /// cross supremum (annulus); false for the punctured disk.
    pub conjectural: bool,
}

/// Lower and upper bounds from the Euclidean midpoint rotation, in the
/// annulus or the punctured disk.
pub fn emr_bounds_delta(d: &Domain, x: PlanePoint, y: PlanePoint) -> Result<DeltaBounds> {
    let conjectural = match d {
        Domain::Annulus { .. } => true,
        Domain::PuncturedDisk => false,
        _ => return Err(MetricError::ParameterOutOfRange(format!("no midpoint-rotation bound in the {d}"))),
    };
    d.check(x)?;
    d.check(y)?;
    let quad = emr(x, y, d)?;
    if !quad.x1y1_inside || !d.contains(quad.x0) || !d.contains(quad.y0) {
        return Err(MetricError::EmrPointOutsideDomain);
    }
    Ok(DeltaBounds {
        lower: delta_metric(d, quad.x0, quad.y0)?,
        upper: delta_metric(d, quad.x1, quad.y1)?,
        conjectural,
    })
}

/// Outcome of scanning the cross supremum along a midpoint rotation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub r: f64,
    pub k: f64,
    pub q: f64,
    /// Grid of rotation angles on `[0, pi/2]`.
    pub mu: Vec<f64>,
    /// `sup |a, x, b, y|` over `a` on the unit circle, `b` on `|b| = r`.
    pub supremum: Vec<f64>,
    /// Largest `supremum[i + 1] - supremum[i]`, or 0 if the sequence never rises.
    pub max_increment: f64,
    /// Index `i` of the step realising `max_increment`, if positive.
    pub violation_at: Option<usize>,
}

impl ConjectureReport {
    pub fn is_monotone(&self, tol: f64) -> bool {
        self.max_increment <= tol
    }
}

/// Scan the cross supremum at `x = k + q e^{i mu}`, `y = k - q e^{i mu}` for
/// `steps` equally spaced `mu in [0, pi/2]`.
pub fn conjecture_scan(r: f64, k: f64, q: f64, steps: usize) -> Result<ConjectureReport> {
    if !(0.0 < r && r < k && k < 1.0) {
        return Err(MetricError::ParameterOutOfRange(format!("need 0 < r < k < 1, got r={r}, k={k}")));
    }
    if !(q > 0.0 && q < (k - r).min(1.0 - k)) {
        return Err(MetricError::ParameterOutOfRange(format!("need 0 < q < min(k - r, 1 - k), got q={q}")));
    }
    if steps < 2 {
        return Err(MetricError::ParameterOutOfRange(format!("need at least 2 steps, got {steps}")));
    }
    let kc = Complex64::new(k, 0.0);
    let mut mu = Vec::with_capacity(steps);
    let mut supremum = Vec::with_capacity(steps);
    for i in 0..steps {
        let m = if i + 1 == steps { FRAC_PI_2 } else { FRAC_PI_2 * i as f64 / (steps - 1) as f64 };
        let w = Complex64::from_polar(q, m);
        let (value, _, _) = cross_supremum(&Normalized::new(kc + w, kc - w), r)?;
        mu.push(m);
        supremum.push(value);
    }
    let (mut max_increment, mut violation_at) = (0.0, None);
    for i in 0..steps - 1 {
        let inc = supremum[i + 1] - supremum[i];
        if inc > max_increment {
            max_increment = inc;
            violation_at = Some(i);
        }
    }
    Ok(ConjectureReport { r, k, q, mu, supremum, max_increment, violation_at })
}

/// The five quantities `s/2 <= j* <= th(delta/2) <= 2 j* <= 2 s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainReport {
    pub s_half: f64,
    pub j_star: f64,
    pub th_half_delta: f64,
    pub two_j_star: f64,
    pub two_s: f64,
}

impl ChainReport {
    pub fn values(&self) -> [f64; 5] {
        [self.s_half, self.j_star, self.th_half_delta, self.two_j_star, self.two_s]
    }

    /// Largest amount by which a link of the chain is violated (0 if none).
    pub fn worst_violation(&self) -> f64 {
        self.values().windows(2).map(|w| (w[0] - w[1]).max(0.0)).fold(0.0, f64::max)
    }

    pub fn holds(&self, slack: f64) -> bool {
        self.worst_violation() <= slack
    }
}

/// Evaluate the inequality chain between `s`, `j*` and `th(delta / 2)`.
pub fn inequality_chain(d: &Domain, x: PlanePoint, y: PlanePoint) -> Result<ChainReport> {
    let s = s_metric(d, x, y)?.value;
    let js = j_star(d, x, y)?;
    Ok(ChainReport {
        s_half: s / 2.0,
        j_star: js,
        th_half_delta: th_half_delta(d, x, y)?,
        two_j_star: 2.0 * js,
        two_s: 2.0 * s,
    })
}

/// How `s` and `j*` change under the annulus self-map `z -> r z / |z|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistortionReport {
    pub s: f64,
    pub s_image: f64,
    pub j_star: f64,
    pub j_star_image: f64,
}

impl DistortionReport {
    /// `s(f(x), f(y)) / s(x, y)`
    pub fn s_ratio(&self) -> f64 {
        self.s_image / self.s
    }

    pub fn j_star_ratio(&self) -> f64 {
        self.j_star_image / self.j_star
    }

    /// `s` changes by at most a factor 4 and `j*` by at most a factor 2.
    pub fn within_bounds(&self, slack: f64) -> bool {
        self.s_image <= 4.0 * self.s + slack
            && self.s <= 4.0 * self.s_image + slack
            && self.j_star_image <= 2.0 * self.j_star + slack
            && self.j_star <= 2.0 * self.j_star_image + slack
    }
}

pub fn distortion_bounds_check(x: PlanePoint, y: PlanePoint, r: f64) -> Result<DistortionReport> {
    let dom = Domain::annulus(r)?;
    let (fx, fy) = (ring_inversion(x, r), ring_inversion(y, r));
    Ok(DistortionReport {
        s: s_metric(&dom, x, y)?.value,
        s_image: s_metric(&dom, fx, fy)?.value,
        j_star: j_star(&dom, x, y)?,
        j_star_image: j_star(&dom, fx, fy)?,
    })
}

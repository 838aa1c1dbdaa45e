//! Metric circles: a metric evaluated on a grid around a fixed centre, level
//! sets by marching squares, and CSV/SVG output.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::base_metrics::j_star;
use crate::domain::Domain;
use crate::error::{MetricError, Result};
use crate::geometry::PlanePoint;
use crate::moebius::th_half_delta;
use crate::tri_ratio::s_metric;

/// Which bounded metric a field holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldMetric {
    S,
    JStar,
    /// `th(delta / 2)`, which lives in `[0, 1)` like the other two.
    ThDeltaHalf,
}

impl FieldMetric {
    pub const ALL: [FieldMetric; 3] = [FieldMetric::S, FieldMetric::JStar, FieldMetric::ThDeltaHalf];

    pub fn eval(self, d: &Domain, x: PlanePoint, y: PlanePoint) -> Result<f64> {
        match self {
            FieldMetric::S => Ok(s_metric(d, x, y)?.value),
            FieldMetric::JStar => j_star(d, x, y),
            FieldMetric::ThDeltaHalf => th_half_delta(d, x, y),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FieldMetric::S => "s",
            FieldMetric::JStar => "jstar",
            FieldMetric::ThDeltaHalf => "th-delta-half",
        }
    }
}

impl FromStr for FieldMetric {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s" => Ok(FieldMetric::S),
            "jstar" | "j*" => Ok(FieldMetric::JStar),
            "delta" | "th-delta-half" => Ok(FieldMetric::ThDeltaHalf),
            _ => Err(MetricError::ParameterOutOfRange(format!("unknown field metric `{s}`"))),
        }
    }
}

/// Metric values on the `grid_n x grid_n` nodes `-1 + 2 i / grid_n` of the
/// square `[-1, 1]^2`. Nodes outside the domain hold `NaN`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelField {
    pub domain: Domain,
    pub center: PlanePoint,
    pub metric: FieldMetric,
    pub grid_n: usize,
    /// Row-major, row `j` at ordinate `node(j)`.
    pub values: Vec<f64>,
}

impl LevelField {
    pub fn node(&self, i: usize) -> f64 {
        grid_node(i, self.grid_n)
    }

    pub fn point(&self, i: usize, j: usize) -> PlanePoint {
        Complex64::new(self.node(i), self.node(j))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid_n + i]
    }

    /// In-domain `(point, value)` pairs in row-major order.
    pub fn iter_defined(&self) -> impl Iterator<Item = (PlanePoint, f64)> + '_ {
        (0..self.grid_n).flat_map(move |j| {
            (0..self.grid_n).filter_map(move |i| {
                let v = self.get(i, j);
                (!v.is_nan()).then(|| (self.point(i, j), v))
            })
        })
    }
}

#[inline]
fn grid_node(i: usize, n: usize) -> f64 {
    -1.0 + 2.0 * i as f64 / n as f64
}

/// Evaluate `metric(center, .)` on the grid, in parallel over rows.
pub fn evaluate_field(domain: &Domain, center: PlanePoint, metric: FieldMetric, grid_n: usize) -> Result<LevelField> {
    domain.check(center)?;
    if grid_n < 16 {
        return Err(MetricError::ParameterOutOfRange(format!("grid needs at least 16 nodes per side, got {grid_n}")));
    }
    let rows: Vec<Vec<f64>> = (0..grid_n)
        .into_par_iter()
        .map(|j| {
            let y = grid_node(j, grid_n);
            (0..grid_n)
                .map(|i| {
                    let p = Complex64::new(grid_node(i, grid_n), y);
                    if domain.contains(p) {
                        metric.eval(domain, center, p).unwrap_or(f64::NAN)
                    } else {
                        f64::NAN
                    }
                })
                .collect()
        })
        .collect();
    Ok(LevelField { domain: *domain, center, metric, grid_n, values: rows.concat() })
}

/// A polyline of a level set; closed ones repeat their first vertex at the end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub points: Vec<PlanePoint>,
    pub closed: bool,
}

impl Polyline {
    /// `max / min` distance of the vertices from their centroid.
    pub fn eccentricity(&self) -> f64 {
        let pts = self.distinct_points();
        let c = pts.iter().sum::<Complex64>() / pts.len() as f64;
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for p in pts {
            let d = (p - c).norm();
            lo = lo.min(d);
            hi = hi.max(d);
        }
        hi / lo
    }

    fn distinct_points(&self) -> &[PlanePoint] {
        if self.closed && self.points.len() > 1 {
            &self.points[..self.points.len() - 1]
        } else {
            &self.points
        }
    }

    /// Even-odd point-in-polygon test against the closed polyline.
    pub fn contains(&self, p: PlanePoint) -> bool {
        let pts = self.distinct_points();
        let mut inside = false;
        let mut j = pts.len() - 1;
        for i in 0..pts.len() {
            let (a, b) = (pts[i], pts[j]);
            if (a.im > p.im) != (b.im > p.im) && p.re < (b.re - a.re) * (p.im - a.im) / (b.im - a.im) + a.re {
                inside = !inside;
            }
            j = i;
        }
        inside
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSet {
    pub level: f64,
    pub polylines: Vec<Polyline>,
}

/// Edges of the grid: horizontal `(i, j)-(i+1, j)` or vertical `(i, j)-(i, j+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

/// Marching squares with linear interpolation. Cells with an undefined corner
/// are skipped; saddles are split according to the mean of the four corners.
pub fn extract_levels(field: &LevelField, levels: &[f64]) -> Vec<LevelSet> {
    levels.iter().map(|&l| LevelSet { level: l, polylines: extract_one(field, l) }).collect()
}

fn extract_one(field: &LevelField, level: f64) -> Vec<Polyline> {
    let n = field.grid_n;
    let mut segments: Vec<(Edge, Edge)> = Vec::new();
    for j in 0..n - 1 {
        for i in 0..n - 1 {
            // corners counter-clockwise from (i, j)
            let v = [field.get(i, j), field.get(i + 1, j), field.get(i + 1, j + 1), field.get(i, j + 1)];
            if v.iter().any(|x| x.is_nan()) {
                continue;
            }
            let bits: u8 = v.iter().enumerate().fold(0, |acc, (k, &x)| acc | (((x > level) as u8) << k));
            // edges: 0 bottom, 1 right, 2 top, 3 left
            let e = [Edge::H(i, j), Edge::V(i + 1, j), Edge::H(i, j + 1), Edge::V(i, j)];
            let mean_above = v.iter().sum::<f64>() / 4.0 > level;
            let pairs: &[(usize, usize)] = match bits {
                0 | 15 => &[],
                1 | 14 => &[(3, 0)],
                2 | 13 => &[(0, 1)],
                3 | 12 => &[(3, 1)],
                4 | 11 => &[(1, 2)],
                6 | 9 => &[(0, 2)],
                7 | 8 => &[(3, 2)],
                5 if mean_above => &[(3, 2), (0, 1)],
                5 => &[(3, 0), (1, 2)],
                10 if mean_above => &[(3, 0), (1, 2)],
                10 => &[(3, 2), (0, 1)],
                _ => unreachable!(),
            };
            for &(a, b) in pairs {
                segments.push((e[a], e[b]));
            }
        }
    }
    chain(field, level, &segments)
}

fn edge_point(field: &LevelField, level: f64, e: Edge) -> PlanePoint {
    let ((i0, j0), (i1, j1)) = match e {
        Edge::H(i, j) => ((i, j), (i + 1, j)),
        Edge::V(i, j) => ((i, j), (i, j + 1)),
    };
    let (v0, v1) = (field.get(i0, j0), field.get(i1, j1));
    let t = if v1 == v0 { 0.5 } else { ((level - v0) / (v1 - v0)).clamp(0.0, 1.0) };
    let (p0, p1) = (field.point(i0, j0), field.point(i1, j1));
    p0 + (p1 - p0) * t
}

/// Join segments sharing an edge into maximal polylines.
fn chain(field: &LevelField, level: f64, segments: &[(Edge, Edge)]) -> Vec<Polyline> {
    let mut by_edge: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (k, &(a, b)) in segments.iter().enumerate() {
        by_edge.entry(a).or_default().push(k);
        by_edge.entry(b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let next = |edge: Edge, used: &[bool]| by_edge[&edge].iter().copied().find(|&k| !used[k]);
    let mut out = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segments[start];
        let mut forward = vec![a, b];
        while let Some(k) = next(*forward.last().unwrap(), &used) {
            used[k] = true;
            let (p, q) = segments[k];
            forward.push(if p == *forward.last().unwrap() { q } else { p });
        }
        let mut backward = Vec::new();
        let mut tail = a;
        while let Some(k) = next(tail, &used) {
            used[k] = true;
            let (p, q) = segments[k];
            tail = if p == tail { q } else { p };
            backward.push(tail);
        }
        backward.reverse();
        backward.extend(forward);
        let closed = backward.len() > 2 && backward.first() == backward.last();
        out.push(Polyline { points: backward.iter().map(|&e| edge_point(field, level, e)).collect(), closed });
    }
    out
}

/// Levels `lo, lo + step, ...` up to `hi` inclusive (with rounding slack).
pub fn level_range(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || hi < lo {
        return Err(MetricError::ParameterOutOfRange(format!("bad level range {lo}:{hi}:{step}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|k| ((lo + step * k as f64) * 1e12).round() / 1e12).collect())
}

/// Outcome of probing segments from the centre to points of a metric disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StarlikeReport {
    pub metric: FieldMetric,
    pub level: f64,
    pub probes: usize,
    /// Largest metric value seen along any probe segment, minus `level`.
    pub max_excess: f64,
    pub worst_probe: Option<PlanePoint>,
    pub passed: bool,
}

/// Points per probe segment.
const SEGMENT_POINTS: usize = 64;

/// Check that the metric disk `{y : m(center, y) < level}` is starlike with
/// respect to its centre: sample `n_probes` points of the disk and evaluate
/// the metric along each segment `[center, y]`.
pub fn starlikeness_check(
    domain: &Domain,
    center: PlanePoint,
    metric: FieldMetric,
    level: f64,
    n_probes: usize,
    seed: u64,
) -> Result<StarlikeReport> {
    domain.check(center)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut probes = Vec::with_capacity(n_probes);
    let mut radius = 2.0f64;
    let mut attempts = 0usize;
    while probes.len() < n_probes && attempts < 10_000 * n_probes.max(1) {
        attempts += 1;
        let y = center + Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
        if !domain.contains(y) {
            continue;
        }
        if metric.eval(domain, center, y)? < level {
            probes.push(y);
        } else if probes.is_empty() && attempts.is_multiple_of(100) {
            radius *= 0.7;
        }
    }
    let excesses: Vec<(f64, PlanePoint)> = probes
        .par_iter()
        .map(|&y| {
            let worst = (1..=SEGMENT_POINTS)
                .map(|k| {
                    let p = center + (y - center) * (k as f64 / SEGMENT_POINTS as f64);
                    metric.eval(domain, center, p).unwrap_or(f64::INFINITY)
                })
                .fold(f64::NEG_INFINITY, f64::max);
            (worst - level, y)
        })
        .collect();
    let (max_excess, worst_probe) = excesses
        .iter()
        .fold((f64::NEG_INFINITY, None), |acc, &(e, y)| if e > acc.0 { (e, Some(y)) } else { acc });
    Ok(StarlikeReport {
        metric,
        level,
        probes: probes.len(),
        max_excess,
        worst_probe,
        passed: max_excess <= 1e-6,
    })
}

/// `x,y,value` rows over the defined grid nodes.
pub fn field_csv(field: &LevelField) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "y", "value"]).expect("in-memory write");
    for (p, v) in field.iter_defined() {
        w.write_record([p.re.to_string(), p.im.to_string(), v.to_string()]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("ascii")
}

/// `level,poly_id,x,y` rows; `poly_id` counts polylines within each level.
pub fn levels_csv(sets: &[LevelSet]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["level", "poly_id", "x", "y"]).expect("in-memory write");
    for set in sets {
        for (k, poly) in set.polylines.iter().enumerate() {
            for p in &poly.points {
                w.write_record([set.level.to_string(), k.to_string(), p.re.to_string(), p.im.to_string()])
                    .expect("in-memory write");
            }
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("ascii")
}

/// Read back the output of [`levels_csv`]. Closedness is recovered from a
/// repeated first vertex.
pub fn parse_levels_csv(text: &str) -> io::Result<Vec<LevelSet>> {
    #[derive(Deserialize)]
    struct Row {
        level: f64,
        poly_id: usize,
        x: f64,
        y: f64,
    }
    let mut sets: Vec<LevelSet> = Vec::new();
    for row in csv::Reader::from_reader(text.as_bytes()).deserialize::<Row>() {
        let row = row.map_err(io::Error::other)?;
        if sets.last().is_none_or(|s| s.level != row.level) {
            sets.push(LevelSet { level: row.level, polylines: Vec::new() });
        }
        let set = sets.last_mut().expect("just pushed");
        if set.polylines.len() <= row.poly_id {
            set.polylines.push(Polyline { points: Vec::new(), closed: false });
        }
        set.polylines[row.poly_id].points.push(Complex64::new(row.x, row.y));
    }
    for poly in sets.iter_mut().flat_map(|s| s.polylines.iter_mut()) {
        poly.closed = poly.points.len() > 2 && poly.points.first() == poly.points.last();
    }
    Ok(sets)
}

/// SVG drawing of the level sets over the square `[-1, 1]^2`, with the
/// boundary circles of the domain for reference.
pub fn levels_svg(sets: &[LevelSet], domain: &Domain) -> String {
    let mut s = String::new();
    s.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" viewBox=\"-1 -1 2 2\">\n");
    s.push_str("<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"0.004\">\n");
    for r in domain.boundary_radii() {
        let _ = writeln!(s, "<circle class=\"boundary\" cx=\"0\" cy=\"0\" r=\"{r}\" stroke=\"black\"/>");
    }
    if let Domain::PuncturedDisk = domain {
        s.push_str("<circle class=\"boundary\" cx=\"0\" cy=\"0\" r=\"0.006\" fill=\"black\"/>\n");
    }
    for set in sets {
        for poly in &set.polylines {
            let _ = write!(s, "<path class=\"level-{}\" stroke=\"steelblue\" d=\"", set.level);
            for (k, p) in poly.points.iter().enumerate() {
                let _ = write!(s, "{}{} {}", if k == 0 { "M" } else { " L" }, p.re, p.im);
            }
            if poly.closed {
                s.push_str(" Z");
            }
            s.push_str("\"/>\n");
        }
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// Vertices of every `<path>` in an SVG produced by [`levels_svg`], keyed by
/// the level in its class attribute.
pub fn parse_svg_paths(svg: &str) -> Vec<(String, Vec<PlanePoint>)> {
    let mut out = Vec::new();
    for line in svg.lines().filter(|l| l.starts_with("<path")) {
        let attr = |name: &str| {
            let key = format!("{name}=\"");
            line.find(&key).map(|i| {
                let rest = &line[i + key.len()..];
                rest[..rest.find('"').unwrap_or(rest.len())].to_string()
            })
        };
        let class = attr("class").unwrap_or_default();
        let d = attr("d").unwrap_or_default();
        let nums: Vec<f64> = d
            .split(|c: char| c == 'M' || c == 'L' || c == 'Z' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .filter_map(|t| t.parse().ok())
            .collect();
        out.push((class, nums.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect()));
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> io::Result<()> {
    fs::write(path, contents)
}

//! Property suites over random samples, each reporting its worst case.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::base_metrics::{j_metric, j_star, rho_disk};
use crate::capacity::{c_constant, c_constant_lower};
use crate::contour::{evaluate_field, extract_levels, starlikeness_check, FieldMetric};
use crate::domain::Domain;
use crate::error::{MetricError, Result};
use crate::geometry::{chordal, cross_ratio, invert_in_circle, pt, ring_inversion, ExtendedPoint, PlanePoint};
use crate::moebius::{
    delta_annulus, delta_collinear, delta_metric, distortion_bounds_check, emr_bounds_delta, inequality_chain,
    th_half_delta,
};
use crate::oracle::{delta_oracle, s_oracle, OracleConfig};
use crate::tri_ratio::{emr_bounds_s, emr_bounds_s_punctured, s_annulus, s_collinear, s_equidistant, s_metric};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Axioms,
    ClosedForms,
    Emr,
    Inequalities,
    Invariance,
    Oracle,
    Starlike,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] =
        [Suite::Axioms, Suite::ClosedForms, Suite::Emr, Suite::Inequalities, Suite::Invariance, Suite::Oracle, Suite::Starlike];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::ClosedForms => "closedforms",
            Suite::Emr => "emr",
            Suite::Inequalities => "inequalities",
            Suite::Invariance => "invariance",
            Suite::Oracle => "oracle",
            Suite::Starlike => "starlike",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| MetricError::ParameterOutOfRange(format!("unknown suite `{s}`")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sample sizes and tolerances of a verification run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    pub r_list: Vec<f64>,
    /// Slack for metric axioms and inequality chains.
    pub slack: f64,
    /// Slack for the midpoint-rotation sandwiches.
    pub emr_slack: f64,
    /// Agreement of closed forms with the general solvers.
    pub closed_form_tol: f64,
    /// `|s_annulus - s_oracle|`.
    pub s_oracle_tol: f64,
    /// Allowed sampling gap between `delta` and its oracle.
    pub delta_oracle_gap: f64,
    /// `|delta(x, y) - delta(f(x), f(y))|` under the ring inversion.
    pub invariance_tol: f64,
    /// Cap on oracle cases per domain; the oracle is slow.
    pub oracle_samples: usize,
    pub oracle: OracleConfig,
    /// Cap on probes per level in the starlikeness suite.
    pub starlike_probes: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            samples: 1000,
            seed: 42,
            r_list: vec![0.2, 0.5, 0.8],
            slack: 1e-10,
            emr_slack: 1e-12,
            closed_form_tol: 1e-9,
            s_oracle_tol: 1e-6,
            delta_oracle_gap: 1e-3,
            invariance_tol: 1e-6,
            oracle_samples: 200,
            oracle: OracleConfig::default(),
            starlike_probes: 1000,
        }
    }
}

/// Result of one property over its sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub name: String,
    /// Hard properties fail the run; soft ones are only reported.
    pub hard: bool,
    pub passed: bool,
    pub cases: usize,
    /// Worst observed value of the checked quantity.
    pub worst: f64,
    pub tolerance: f64,
    pub witness: Option<String>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub config: VerifyConfig,
    /// Sorted by name.
    pub properties: Vec<PropertyReport>,
}

impl VerifyReport {
    pub fn hard_failures(&self) -> impl Iterator<Item = &PropertyReport> {
        self.properties.iter().filter(|p| p.hard && !p.passed)
    }

    pub fn passed(&self) -> bool {
        self.hard_failures().next().is_none()
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.samples == 0 {
        return Err(MetricError::ParameterOutOfRange("need at least one sample".into()));
    }
    for &r in &cfg.r_list {
        Domain::annulus(r)?;
    }
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let mut properties = Vec::new();
    for s in suites {
        let mut ctx = Ctx { cfg, out: Vec::new() };
        match s {
            Suite::Axioms => axioms(&mut ctx)?,
            Suite::ClosedForms => closed_forms(&mut ctx)?,
            Suite::Emr => emr_suite(&mut ctx)?,
            Suite::Inequalities => inequalities(&mut ctx)?,
            Suite::Invariance => invariance(&mut ctx)?,
            Suite::Oracle => oracle_suite(&mut ctx)?,
            Suite::Starlike => starlike(&mut ctx)?,
            Suite::All => unreachable!(),
        }
        properties.extend(ctx.out);
    }
    properties.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(VerifyReport { suite, config: cfg.clone(), properties })
}

struct Ctx<'a> {
    cfg: &'a VerifyConfig,
    out: Vec<PropertyReport>,
}

/// Worst value of `f` over `cases` and the index attaining it. Errors count
/// as an infinite value.
fn worst_case<T: Sync, F>(cases: &[T], f: F) -> (f64, Option<usize>)
where
    F: Fn(&T) -> Result<f64> + Sync,
{
    cases
        .par_iter()
        .enumerate()
        .map(|(i, c)| (f(c).unwrap_or(f64::INFINITY), i))
        .map(|(v, i)| (if v.is_nan() { f64::INFINITY } else { v }, i))
        .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        .map_or((f64::NEG_INFINITY, None), |(v, i)| (v, Some(i)))
}

fn fmt_pt(p: PlanePoint) -> String {
    format!("({}, {})", p.re, p.im)
}

impl Ctx<'_> {
    fn rng(&self, tag: &str) -> ChaCha8Rng {
        let h = tag.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
        ChaCha8Rng::seed_from_u64(self.cfg.seed ^ h)
    }

    fn pairs(&self, d: &Domain, n: usize, tag: &str) -> Vec<(PlanePoint, PlanePoint)> {
        let mut rng = self.rng(tag);
        (0..n).map(|_| (d.random_point(&mut rng), d.random_point(&mut rng))).collect()
    }

    fn triples(&self, d: &Domain, n: usize, tag: &str) -> Vec<[PlanePoint; 3]> {
        let mut rng = self.rng(tag);
        (0..n).map(|_| [d.random_point(&mut rng), d.random_point(&mut rng), d.random_point(&mut rng)]).collect()
    }

    /// Record a property whose value must not exceed `tol`.
    fn check<T: Sync + fmt::Debug, F>(&mut self, name: String, hard: bool, tol: f64, cases: &[T], f: F)
    where
        F: Fn(&T) -> Result<f64> + Sync,
    {
        let (worst, at) = worst_case(cases, f);
        self.out.push(PropertyReport {
            name,
            hard,
            passed: worst <= tol,
            cases: cases.len(),
            worst,
            tolerance: tol,
            witness: at.map(|i| format!("{:?}", cases[i])),
            note: None,
        });
    }

    fn note(&mut self, text: String) {
        if let Some(p) = self.out.last_mut() {
            p.note = Some(text);
        }
    }

    fn annuli(&self) -> Vec<(String, Domain)> {
        self.cfg.r_list.iter().map(|&r| (format!("r={r}"), Domain::Annulus { r })).collect()
    }
}

fn axioms(ctx: &mut Ctx) -> Result<()> {
    let n = ctx.cfg.samples;
    let slack = ctx.cfg.slack;

    let disk = ctx.triples(&Domain::UnitDisk, n, "axioms.disk");
    ctx.check("axioms.rho_disk.triangle".into(), true, slack, &disk, |&[x, y, z]| {
        Ok(rho_disk(x, z)? - rho_disk(x, y)? - rho_disk(y, z)?)
    });
    ctx.check("axioms.rho_disk.symmetry".into(), true, 0.0, &disk, |&[x, y, _]| {
        Ok((rho_disk(x, y)? - rho_disk(y, x)?).abs())
    });
    ctx.check("axioms.rho_disk.sinh_form".into(), true, 1e-9, &disk, |&[x, y, _]| {
        let lhs = (rho_disk(x, y)? / 2.0).sinh().powi(2);
        let rhs = (x - y).norm_sqr() / ((1.0 - x.norm_sqr()) * (1.0 - y.norm_sqr()));
        Ok((lhs - rhs).abs() / rhs.max(1.0))
    });

    let sphere: Vec<[PlanePoint; 3]> = {
        let mut rng = ctx.rng("axioms.chordal");
        (0..n).map(|_| std::array::from_fn(|_| pt(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)))).collect()
    };
    ctx.check("axioms.chordal.triangle".into(), true, 1e-12, &sphere, |&[x, y, z]| {
        let q = |a: PlanePoint, b: PlanePoint| chordal(a.into(), b.into());
        Ok(q(x, z) - q(x, y) - q(y, z))
    });

    let mut domains = ctx.annuli();
    domains.push(("punctured".into(), Domain::PuncturedDisk));
    for (label, d) in domains {
        let triples = ctx.triples(&d, n, &format!("axioms.{label}"));
        ctx.check(format!("axioms.s.triangle[{label}]"), true, slack, &triples, |&[x, y, z]| {
            Ok(s_metric(&d, x, z)?.value - s_metric(&d, x, y)?.value - s_metric(&d, y, z)?.value)
        });
        ctx.check(format!("axioms.s.range[{label}]"), true, 0.0, &triples, |&[x, y, _]| {
            let s = s_metric(&d, x, y)?.value;
            Ok(if s > 0.0 && s <= 1.0 { 0.0 } else { 1.0 })
        });
        ctx.check(format!("axioms.delta.triangle[{label}]"), true, slack, &triples, |&[x, y, z]| {
            Ok(delta_metric(&d, x, z)? - delta_metric(&d, x, y)? - delta_metric(&d, y, z)?)
        });
        ctx.check(format!("axioms.delta.symmetry[{label}]"), true, slack, &triples, |&[x, y, _]| {
            Ok((delta_metric(&d, x, y)? - delta_metric(&d, y, x)?).abs())
        });
        ctx.check(format!("axioms.j_star.below_s[{label}]"), true, slack, &triples, |&[x, y, _]| {
            let js = j_star(&d, x, y)?;
            Ok(if js < 1.0 { js - s_metric(&d, x, y)?.value } else { f64::INFINITY })
        });
    }
    Ok(())
}

fn closed_forms(ctx: &mut Ctx) -> Result<()> {
    let n = ctx.cfg.samples;
    let tol = ctx.cfg.closed_form_tol;
    for (label, d) in ctx.annuli() {
        let Domain::Annulus { r } = d else { unreachable!() };
        let mut rng = ctx.rng(&format!("closedforms.{label}"));
        let collinear: Vec<(PlanePoint, PlanePoint)> = (0..n)
            .map(|_| {
                let t = rng.gen_range(0.0..std::f64::consts::TAU);
                let (a, b) = (rng.gen_range(r..1.0), rng.gen_range(r..1.0));
                (Complex64::from_polar(a.max(r + 1e-9), t), Complex64::from_polar(b.max(r + 1e-9), t))
            })
            .collect();
        ctx.check(format!("closedforms.s_collinear[{label}]"), true, tol, &collinear, |&(x, y)| {
            Ok((s_collinear(x, y, r)? - s_annulus(x, y, r)?.value).abs())
        });
        ctx.check(format!("closedforms.delta_collinear.same_ray[{label}]"), true, 1e-8, &collinear, |&(x, y)| {
            Ok((delta_collinear(x, y, r)? - delta_annulus(x, y, r)?.value).abs())
        });
        let opposite: Vec<(PlanePoint, PlanePoint)> = collinear.iter().map(|&(x, y)| (x, -y)).collect();
        ctx.check(format!("closedforms.delta_collinear.opposite_rays[{label}]"), true, 1e-8, &opposite, |&(x, y)| {
            Ok((delta_collinear(x, y, r)? - delta_annulus(x, y, r)?.value).abs())
        });
        let equidistant: Vec<(f64, f64)> =
            (0..n).map(|_| (rng.gen_range(r..1.0f64).max(r + 1e-9), rng.gen_range(1e-6..PI - 1e-6))).collect();
        ctx.check(format!("closedforms.s_equidistant[{label}]"), true, tol, &equidistant, |&(h, mu)| {
            let (x, y) = (Complex64::from_polar(h, mu / 2.0), Complex64::from_polar(h, -mu / 2.0));
            Ok((s_equidistant(h, mu, r)? - s_annulus(x, y, r)?.value).abs())
        });
    }

    let example = [(pt(0.5, 0.0), pt(-0.5, 0.0))];
    ctx.check("closedforms.delta_punctured.example".into(), true, 1e-12, &example, |&(x, y)| {
        Ok((delta_metric(&Domain::PuncturedDisk, x, y)? - 2.0 * 0.8f64.atanh()).abs())
    });
    let dims: Vec<u32> = (2..=8).collect();
    ctx.check("closedforms.c_constant.two_over_pi".into(), true, 0.0, &dims[..1], |&k| {
        Ok((c_constant(k)? - 2.0 / PI).abs())
    });
    ctx.check("closedforms.c_constant.lower_bound".into(), true, 0.0, &dims, |&k| {
        Ok(c_constant_lower(k) - c_constant(k)?)
    });
    Ok(())
}

fn emr_suite(ctx: &mut Ctx) -> Result<()> {
    let n = ctx.cfg.samples;
    let slack = ctx.cfg.emr_slack;
    let mut domains = ctx.annuli();
    domains.push(("punctured".into(), Domain::PuncturedDisk));
    for (label, d) in domains {
        let pairs = ctx.pairs(&d, n, &format!("emr.{label}"));
        let s_bounds = |x, y| match d {
            Domain::Annulus { r } => emr_bounds_s(x, y, r),
            _ => emr_bounds_s_punctured(x, y),
        };
        ctx.check(format!("emr.s.lower[{label}]"), true, slack, &pairs, |&(x, y)| {
            Ok(s_bounds(x, y)?.0 - s_metric(&d, x, y)?.value)
        });
        ctx.check(format!("emr.s.upper[{label}]"), true, slack, &pairs, |&(x, y)| {
            Ok(s_bounds(x, y)?.1.value().map_or(0.0, |u| s_metric(&d, x, y).map_or(f64::INFINITY, |s| s.value - u)))
        });
        let unbounded = pairs.iter().filter(|&&(x, y)| s_bounds(x, y).is_ok_and(|b| b.1.value().is_none())).count();
        ctx.note(format!("{unbounded} pairs have no finite upper bound"));

        // pairs whose rotated points leave the domain carry no delta bound
        let bounded: Vec<_> = pairs.iter().copied().filter(|&(x, y)| emr_bounds_delta(&d, x, y).is_ok()).collect();
        let skipped = pairs.len() - bounded.len();
        ctx.check(format!("emr.delta.lower[{label}]"), true, slack, &bounded, |&(x, y)| {
            Ok(emr_bounds_delta(&d, x, y)?.lower - delta_metric(&d, x, y)?)
        });
        ctx.note(format!("{skipped} pairs skipped: a rotated point leaves the domain"));
        let conjectural = matches!(d, Domain::Annulus { .. });
        let violations = bounded
            .par_iter()
            .filter(|&&(x, y)| match (emr_bounds_delta(&d, x, y), delta_metric(&d, x, y)) {
                (Ok(b), Ok(v)) => v > b.upper + slack,
                _ => true,
            })
            .count();
        ctx.check(format!("emr.delta.upper[{label}]"), !conjectural, slack, &bounded, |&(x, y)| {
            Ok(delta_metric(&d, x, y)? - emr_bounds_delta(&d, x, y)?.upper)
        });
        ctx.note(format!(
            "{violations} violations{}",
            if conjectural { "; bound rests on the unproven monotonicity of the cross supremum" } else { "" }
        ));
    }
    Ok(())
}

fn inequalities(ctx: &mut Ctx) -> Result<()> {
    let n = ctx.cfg.samples;
    let slack = ctx.cfg.slack;
    let mut domains = ctx.annuli();
    domains.push(("punctured".into(), Domain::PuncturedDisk));
    for (label, d) in domains {
        let pairs = ctx.pairs(&d, n, &format!("inequalities.{label}"));
        ctx.check(format!("inequalities.chain[{label}]"), true, slack, &pairs, |&(x, y)| {
            Ok(inequality_chain(&d, x, y)?.worst_violation())
        });
        ctx.check(format!("inequalities.j_delta_2j[{label}]"), true, slack, &pairs, |&(x, y)| {
            let (j, delta) = (j_metric(&d, x, y)?, delta_metric(&d, x, y)?);
            Ok((j - delta).max(delta - 2.0 * j))
        });
    }

    // sharpness configurations, reported only
    let r = 1e-4f64;
    let (x, y) = (pt(r.sqrt(), 0.0), pt(-r.sqrt(), 0.0));
    let d = Domain::Annulus { r };
    let ratio_s = th_half_delta(&d, x, y)? / s_metric(&d, x, y)?.value;
    let ratio_j = th_half_delta(&d, x, y)? / j_star(&d, x, y)?;
    sharpness(ctx, "inequalities.sharpness.th_delta_over_s[r=1e-4]", ratio_s, 0.5, 0.01);
    sharpness(ctx, "inequalities.sharpness.th_delta_over_j_star[r=1e-4]", ratio_j, 1.0, 0.02);
    let (r, h) = (0.5f64, 1e-3);
    let d = Domain::Annulus { r };
    let (x, y) = (pt((1.0 + r) / 2.0 + h, 0.0), pt((1.0 + r) / 2.0 - h, 0.0));
    let ratio = th_half_delta(&d, x, y)? / j_star(&d, x, y)?;
    sharpness(ctx, "inequalities.sharpness.th_delta_over_j_star[r=0.5,h=1e-3]", ratio, 2.0, 0.01);
    Ok(())
}

fn sharpness(ctx: &mut Ctx, name: &str, ratio: f64, limit: f64, rel: f64) {
    let dev = (ratio - limit).abs() / limit;
    ctx.out.push(PropertyReport {
        name: name.into(),
        hard: false,
        passed: dev <= rel,
        cases: 1,
        worst: dev,
        tolerance: rel,
        witness: Some(format!("ratio {ratio}, limit {limit}")),
        note: Some("relative distance to the limiting constant at a finite configuration".into()),
    });
}

fn invariance(ctx: &mut Ctx) -> Result<()> {
    let n = ctx.cfg.samples;
    let tol = ctx.cfg.invariance_tol;
    let slack = ctx.cfg.slack;
    for (label, d) in ctx.annuli() {
        let Domain::Annulus { r } = d else { unreachable!() };
        let pairs = ctx.pairs(&d, n, &format!("invariance.{label}"));
        ctx.check(format!("invariance.delta.ring_inversion[{label}]"), true, tol, &pairs, |&(x, y)| {
            Ok((delta_annulus(x, y, r)?.value - delta_annulus(ring_inversion(x, r), ring_inversion(y, r), r)?.value).abs())
        });
        let mut rng = ctx.rng(&format!("invariance.angles.{label}"));
        let moved: Vec<_> = pairs.iter().map(|&(x, y)| (x, y, Complex64::from_polar(1.0, rng.gen_range(0.0..7.0)))).collect();
        ctx.check(format!("invariance.delta.rotation_conjugation[{label}]"), true, slack, &moved, |&(x, y, e)| {
            let base = delta_annulus(x, y, r)?.value;
            let rot = delta_annulus(e * x, e * y, r)?.value;
            let conj = delta_annulus(x.conj(), y.conj(), r)?.value;
            Ok((base - rot).abs().max((base - conj).abs()))
        });
        ctx.check(format!("invariance.s.rotation[{label}]"), true, slack, &moved, |&(x, y, e)| {
            Ok((s_annulus(x, y, r)?.value - s_annulus(e * x, e * y, r)?.value).abs())
        });
        ctx.check(format!("invariance.distortion.bounds[{label}]"), true, 0.0, &pairs, |&(x, y)| {
            Ok(if distortion_bounds_check(x, y, r)?.within_bounds(1e-12) { 0.0 } else { 1.0 })
        });
        ctx.check(format!("invariance.distortion.s_ratio[{label}]"), false, 2.05, &pairs, |&(x, y)| {
            let rep = distortion_bounds_check(x, y, r)?;
            Ok(rep.s_ratio().max(1.0 / rep.s_ratio()))
        });
        ctx.note("largest factor by which s changes under z -> r z / |z|^2".into());
    }

    let quads: Vec<[PlanePoint; 5]> = {
        let mut rng = ctx.rng("invariance.cross_ratio");
        (0..n).map(|_| std::array::from_fn(|_| pt(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))).collect()
    };
    ctx.check("invariance.cross_ratio.inversion".into(), true, 1e-10, &quads, |&[a, b, c, e, centre]| {
        let f = |p: PlanePoint| invert_in_circle(ExtendedPoint::Finite(p), centre, 0.7);
        let before = cross_ratio(a.into(), b.into(), c.into(), e.into())?;
        let after = cross_ratio(f(a), f(b), f(c), f(e))?;
        Ok((before - after).abs() / before.max(1.0))
    });
    Ok(())
}

fn oracle_suite(ctx: &mut Ctx) -> Result<()> {
    let n = ctx.cfg.samples.min(ctx.cfg.oracle_samples);
    let ocfg = ctx.cfg.oracle;
    let gap = ctx.cfg.delta_oracle_gap;
    for (label, d) in ctx.annuli() {
        let Domain::Annulus { r } = d else { unreachable!() };
        let pairs = ctx.pairs(&d, n, &format!("oracle.{label}"));
        ctx.check(format!("oracle.s[{label}]"), true, ctx.cfg.s_oracle_tol, &pairs, |&(x, y)| {
            Ok((s_annulus(x, y, r)?.value - s_oracle(&d, x, y, &ocfg)?).abs())
        });
        let diffs: Vec<f64> = pairs
            .par_iter()
            .map(|&(x, y)| Ok(delta_annulus(x, y, r)?.value - delta_oracle(&d, x, y, &ocfg)?))
            .map(|v: Result<f64>| v.unwrap_or(f64::NAN))
            .collect();
        ctx.check(format!("oracle.delta.above_oracle[{label}]"), true, 1e-9, &diffs, |&v| Ok(-v));
        ctx.check(format!("oracle.delta.gap[{label}]"), true, gap, &diffs, |&v| Ok(v));
    }
    let disk = ctx.pairs(&Domain::UnitDisk, n, "oracle.disk");
    ctx.check("oracle.delta.unit_disk".into(), true, gap, &disk, |&(x, y)| {
        Ok((delta_oracle(&Domain::UnitDisk, x, y, &ocfg)? - rho_disk(x, y)?).abs())
    });
    let punct = ctx.pairs(&Domain::PuncturedDisk, n, "oracle.punctured");
    ctx.check("oracle.delta.punctured".into(), true, gap, &punct, |&(x, y)| {
        Ok((delta_oracle(&Domain::PuncturedDisk, x, y, &ocfg)? - delta_metric(&Domain::PuncturedDisk, x, y)?).abs())
    });
    Ok(())
}

fn starlike(ctx: &mut Ctx) -> Result<()> {
    let probes = ctx.cfg.samples.min(ctx.cfg.starlike_probes);
    let d = Domain::Annulus { r: 0.6 };
    let centre = pt(0.75, 0.0);
    for metric in [FieldMetric::S, FieldMetric::ThDeltaHalf] {
        for level in [0.3, 0.5, 0.7] {
            let rep = starlikeness_check(&d, centre, metric, level, probes, ctx.cfg.seed)?;
            ctx.out.push(PropertyReport {
                name: format!("starlike.{}[level={level}]", metric.name()),
                hard: metric == FieldMetric::S,
                passed: rep.passed,
                cases: rep.probes,
                worst: rep.max_excess,
                tolerance: 1e-6,
                witness: rep.worst_probe.map(fmt_pt),
                note: (metric != FieldMetric::S).then(|| "informational".to_string()),
            });
        }
    }

    let grid = 200;
    let field = evaluate_field(&d, centre, FieldMetric::S, grid)?;
    let levels: Vec<f64> = (2..=9).map(|k| k as f64 / 10.0).collect();
    let sets = extract_levels(&field, &levels);
    // closed outer contour around the centre per window, if the level has one
    let outers: Vec<_> =
        sets.windows(2).map(|w| w[1].polylines.iter().find(|p| p.closed && p.contains(centre)).cloned()).collect();
    let nested: Vec<(f64, PlanePoint)> = sets
        .windows(2)
        .enumerate()
        .flat_map(|(k, w)| w[0].polylines.iter().flat_map(move |p| p.points.iter().map(move |&q| (k as f64, q))))
        .collect();
    ctx.check("starlike.sublevel_nesting".into(), true, 0.0, &nested, |&(k, p)| {
        Ok(match &outers[k as usize] {
            Some(o) if !o.contains(p) => 1.0,
            _ => 0.0,
        })
    });
    for metric in FieldMetric::ALL {
        let field = if metric == FieldMetric::S { field.clone() } else { evaluate_field(&d, centre, metric, grid)? };
        let set = &extract_levels(&field, &[0.2])[0];
        let ecc: Vec<f64> = set.polylines.iter().map(|p| p.eccentricity()).collect();
        ctx.check(format!("starlike.eccentricity.{}[level=0.2]", metric.name()), true, 1.5, &ecc, |&e| Ok(e));
    }
    Ok(())
}

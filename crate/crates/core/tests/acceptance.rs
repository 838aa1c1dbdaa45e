//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use ringmetrics::capacity::{c_constant, c_constant_lower, delta_ef, BoundarySet, DEFAULT_SAMPLES};
use ringmetrics::contour::{evaluate_field, extract_levels, starlikeness_check, FieldMetric};
use ringmetrics::geometry::ring_inversion;
use ringmetrics::moebius::{
    conjecture_scan, delta_annulus, delta_collinear, delta_metric, distortion_bounds_check, emr_bounds_delta,
    inequality_chain, th_half_delta,
};
use ringmetrics::oracle::{delta_oracle, s_oracle, OracleConfig};
use ringmetrics::tri_ratio::{emr_bounds_s, s_annulus, s_collinear, s_equidistant};
use ringmetrics::{j_star, pt, rho_disk, Domain, PlanePoint};

const SEED: u64 = 42;
const RADII: [f64; 3] = [0.2, 0.5, 0.8];

/// Criterion number, check, time budget in seconds.
type Criterion = (u32, fn() -> Outcome, u64);

struct Outcome {
    passed: bool,
    detail: String,
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

fn pairs(d: &Domain, n: usize, rng: &mut ChaCha8Rng) -> Vec<(PlanePoint, PlanePoint)> {
    (0..n).map(|_| (d.random_point(rng), d.random_point(rng))).collect()
}

fn max_of(it: impl ParallelIterator<Item = f64>) -> f64 {
    it.map(|v| if v.is_nan() { f64::INFINITY } else { v }).reduce(|| f64::NEG_INFINITY, f64::max)
}

fn criterion_1() -> Outcome {
    let pairs = pairs(&Domain::UnitDisk, 200, &mut rng(1));
    let cfg = OracleConfig::default();
    let worst = max_of(pairs.par_iter().map(|&(x, y)| {
        (delta_oracle(&Domain::UnitDisk, x, y, &cfg).unwrap() - rho_disk(x, y).unwrap()).abs()
    }));
    Outcome { passed: worst <= 1e-3, detail: format!("max |oracle - rho| = {worst:.3e} over 200 pairs") }
}

fn criterion_2() -> Outcome {
    let cfg = OracleConfig::default();
    let mut rng = rng(2);
    let (mut below, mut above) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for r in RADII {
        let d = Domain::annulus(r).unwrap();
        let pairs = pairs(&d, 200, &mut rng);
        let diffs: Vec<f64> = pairs
            .par_iter()
            .map(|&(x, y)| delta_annulus(x, y, r).unwrap().value - delta_oracle(&d, x, y, &cfg).unwrap())
            .collect();
        below = below.max(max_of(diffs.par_iter().map(|&v| -v)));
        above = above.max(max_of(diffs.par_iter().copied()));
    }
    Outcome {
        passed: below <= 1e-9 && above <= 1e-3,
        detail: format!("oracle - delta <= {below:.3e} (tol 1e-9), delta - oracle <= {above:.3e} (tol 1e-3), 600 pairs"),
    }
}

fn criterion_3() -> Outcome {
    let mut rng = rng(3);
    let mut worst = 0.0f64;
    for opposite in [false, true] {
        for _ in 0..100 {
            let r = rng.gen_range(0.05..0.95);
            let t = rng.gen_range(0.0..2.0 * PI);
            let a = rng.gen_range(r..1.0f64).max(r + 1e-9);
            let b = rng.gen_range(r..1.0f64).max(r + 1e-9);
            let x = Complex64::from_polar(a, t);
            let y = Complex64::from_polar(if opposite { -b } else { b }, t);
            worst = worst.max((delta_collinear(x, y, r).unwrap() - delta_annulus(x, y, r).unwrap().value).abs());
        }
    }
    Outcome { passed: worst <= 1e-8, detail: format!("max |closed form - delta| = {worst:.3e} over 200 cases") }
}

fn criterion_4() -> Outcome {
    let mut rng = rng(4);
    let (mut col, mut equi) = (0.0f64, 0.0f64);
    for _ in 0..500 {
        let r = RADII[rng.gen_range(0..3)];
        let t = rng.gen_range(0.0..2.0 * PI);
        let x = Complex64::from_polar(rng.gen_range(r..1.0f64).max(r + 1e-9), t);
        let y = Complex64::from_polar(rng.gen_range(r..1.0f64).max(r + 1e-9), t);
        col = col.max((s_collinear(x, y, r).unwrap() - s_annulus(x, y, r).unwrap().value).abs());

        let h = rng.gen_range(r..1.0f64).max(r + 1e-9);
        let mu = rng.gen_range(1e-6..PI - 1e-6);
        let (x, y) = (Complex64::from_polar(h, mu / 2.0), Complex64::from_polar(h, -mu / 2.0));
        equi = equi.max((s_equidistant(h, mu, r).unwrap() - s_annulus(x, y, r).unwrap().value).abs());
    }
    let cfg = OracleConfig::default();
    let cases: Vec<(f64, PlanePoint, PlanePoint)> = (0..500)
        .map(|_| {
            let r = RADII[rng.gen_range(0..3)];
            let d = Domain::annulus(r).unwrap();
            (r, d.random_point(&mut rng), d.random_point(&mut rng))
        })
        .collect();
    let oracle = max_of(cases.par_iter().map(|&(r, x, y)| {
        let d = Domain::annulus(r).unwrap();
        (s_annulus(x, y, r).unwrap().value - s_oracle(&d, x, y, &cfg).unwrap()).abs()
    }));
    Outcome {
        passed: col <= 1e-9 && equi <= 1e-9 && oracle <= 1e-6,
        detail: format!("collinear {col:.3e}, equidistant {equi:.3e} (tol 1e-9); vs oracle {oracle:.3e} (tol 1e-6)"),
    }
}

fn criterion_5() -> Outcome {
    let mut rng = rng(5);
    let cases: Vec<(f64, PlanePoint, PlanePoint)> = (0..10_000)
        .map(|_| {
            let r = RADII[rng.gen_range(0..3)];
            let d = Domain::annulus(r).unwrap();
            (r, d.random_point(&mut rng), d.random_point(&mut rng))
        })
        .collect();
    let slack = 1e-12;
    let s_excess = max_of(cases.par_iter().map(|&(r, x, y)| {
        let s = s_annulus(x, y, r).unwrap().value;
        let (lo, hi) = emr_bounds_s(x, y, r).unwrap();
        (lo - s).max(hi.value().map_or(f64::NEG_INFINITY, |u| s - u))
    }));
    let bounded: Vec<_> = cases
        .par_iter()
        .filter_map(|&(r, x, y)| {
            let d = Domain::annulus(r).unwrap();
            emr_bounds_delta(&d, x, y).ok().map(|b| (b, delta_metric(&d, x, y).unwrap()))
        })
        .collect();
    let lower = max_of(bounded.par_iter().map(|(b, v)| b.lower - v));
    let violations = bounded.iter().filter(|(b, v)| *v > b.upper + slack).count();
    Outcome {
        passed: s_excess <= slack && lower <= slack && violations == 0,
        detail: format!(
            "s sandwich excess {s_excess:.3e}, delta lower excess {lower:.3e} (tol 1e-12) on {} bounded pairs; \
             conjectural upper-bound violations: {violations}",
            bounded.len()
        ),
    }
}

fn ratio_dev(ratio: f64, limit: f64) -> f64 {
    (ratio - limit).abs() / limit
}

fn criterion_6() -> Outcome {
    let mut rng = rng(6);
    let mut domains: Vec<Domain> = RADII.iter().map(|&r| Domain::annulus(r).unwrap()).collect();
    domains.push(Domain::PuncturedDisk);
    let mut worst = 0.0f64;
    for d in &domains {
        let pairs = pairs(d, 10_000, &mut rng);
        worst = worst.max(max_of(pairs.par_iter().map(|&(x, y)| inequality_chain(d, x, y).unwrap().worst_violation())));
    }
    let chain_ok = worst <= 1e-10;

    let r = 1e-4f64;
    let d = Domain::annulus(r).unwrap();
    let (x, y) = (pt(r.sqrt(), 0.0), pt(-r.sqrt(), 0.0));
    let th = th_half_delta(&d, x, y).unwrap();
    let over_s = th / s_annulus(x, y, r).unwrap().value;
    let over_j = th / j_star(&d, x, y).unwrap();

    let (r2, h) = (0.5f64, 1e-3);
    let d2 = Domain::annulus(r2).unwrap();
    let (u, v) = (pt((1.0 + r2) / 2.0 + h, 0.0), pt((1.0 + r2) / 2.0 - h, 0.0));
    let mid = th_half_delta(&d2, u, v).unwrap() / j_star(&d2, u, v).unwrap();

    let checks = [
        (ratio_dev(over_s, 0.5) <= 0.01, format!("th(delta/2)/s = {over_s:.6} ({:.4}% from 1/2, tol 1%)", 100.0 * ratio_dev(over_s, 0.5))),
        (ratio_dev(over_j, 1.0) <= 0.02, format!("th(delta/2)/j* = {over_j:.6} ({:.4}% from 1, tol 2%)", 100.0 * ratio_dev(over_j, 1.0))),
        (ratio_dev(mid, 2.0) <= 0.01, format!("midpoint pair th(delta/2)/j* = {mid:.6} ({:.4}% from 2, tol 1%)", 100.0 * ratio_dev(mid, 2.0))),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.0).map(|c| c.1.as_str()).collect();
    Outcome {
        passed: chain_ok && failed.is_empty(),
        detail: format!(
            "chain worst violation {worst:.3e} on 4 x 10^4 pairs (tol 1e-10); {}{}",
            checks.iter().map(|c| c.1.as_str()).collect::<Vec<_>>().join("; "),
            if failed.is_empty() { String::new() } else { format!("; failing: {}", failed.join(", ")) }
        ),
    }
}

fn criterion_7() -> Outcome {
    let mut rng = rng(7);
    let (mut inv, mut ratio, mut violated) = (0.0f64, 0.0f64, 0usize);
    for r in RADII {
        let d = Domain::annulus(r).unwrap();
        let small = pairs(&d, 1000, &mut rng);
        inv = inv.max(max_of(small.par_iter().map(|&(x, y)| {
            (delta_annulus(x, y, r).unwrap().value
                - delta_annulus(ring_inversion(x, r), ring_inversion(y, r), r).unwrap().value)
                .abs()
        })));
        let big = pairs(&d, 10_000, &mut rng);
        let reports: Vec<_> = big.par_iter().map(|&(x, y)| distortion_bounds_check(x, y, r).unwrap()).collect();
        violated += reports.iter().filter(|rep| !rep.within_bounds(1e-12)).count();
        ratio = ratio.max(reports.iter().map(|rep| rep.s_ratio().max(1.0 / rep.s_ratio())).fold(0.0, f64::max));
    }
    Outcome {
        passed: inv <= 1e-6 && violated == 0,
        detail: format!(
            "max |delta - delta o f| = {inv:.3e} (tol 1e-6); distortion bound violations {violated} / 30000; \
             max s distortion factor {ratio:.4} (informational, expected <= 2.05)"
        ),
    }
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for s in [0.5f64, 1.0, 2.0] {
        let e = BoundarySet::segment(pt(-1.0, 0.0), pt(0.0, 0.0), DEFAULT_SAMPLES).unwrap();
        let f = BoundarySet::ray(pt(s, 0.0), pt(1.0, 0.0), DEFAULT_SAMPLES).unwrap();
        let err = (delta_ef(&e, &f).unwrap() - (1.0 + 1.0 / s).ln()).abs();
        ok &= err <= 1e-3;
        notes.push(format!("ray s={s}: {err:.1e}"));
    }
    let mut sym = 0.0f64;
    for r in [0.25f64, 0.5, 0.75] {
        let e = BoundarySet::segment(pt(0.0, 0.0), pt(r, 0.0), DEFAULT_SAMPLES).unwrap();
        let f = BoundarySet::circle(pt(0.0, 0.0), 1.0, DEFAULT_SAMPLES).unwrap();
        let (ef, fe) = (delta_ef(&e, &f).unwrap(), delta_ef(&f, &e).unwrap());
        let err = (ef - 2.0 * r.atanh()).abs();
        ok &= err <= 1e-3;
        sym = sym.max((ef - fe).abs());
        notes.push(format!("circle r={r}: {err:.1e}"));
    }
    let mut rng = rng(8);
    for _ in 0..5 {
        let a = pt(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4));
        let b = a + Complex64::from_polar(rng.gen_range(0.05..0.3), rng.gen_range(0.0..2.0 * PI));
        let e = BoundarySet::segment(a, b, 64).unwrap();
        let f = BoundarySet::circle(pt(rng.gen_range(-0.1..0.1), 0.0), rng.gen_range(0.9..1.2), 64).unwrap();
        sym = sym.max((delta_ef(&e, &f).unwrap() - delta_ef(&f, &e).unwrap()).abs());
    }
    ok &= sym <= 1e-6;
    let c2 = c_constant(2).unwrap() == 2.0 / PI;
    let lower = (2..=8).all(|n| c_constant(n).unwrap() >= c_constant_lower(n));
    Outcome {
        passed: ok && c2 && lower,
        detail: format!(
            "errors {}; symmetry {sym:.1e} (tol 1e-6); c_2 = 2/pi exactly: {c2}; lower inequality n <= 8: {lower}",
            notes.join(", ")
        ),
    }
}

fn criterion_9() -> Outcome {
    let d = Domain::annulus(0.6).unwrap();
    let center = pt(0.75, 0.0);
    let levels: Vec<f64> = (2..=9).map(|k| k as f64 / 10.0).collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for metric in FieldMetric::ALL {
        let t = Instant::now();
        let field = evaluate_field(&d, center, metric, 1000).unwrap();
        let sets = extract_levels(&field, &levels);
        let secs = t.elapsed().as_secs_f64();
        let ecc = sets[0].polylines.iter().map(|p| p.eccentricity()).fold(f64::NEG_INFINITY, f64::max);
        ok &= secs < 60.0 && ecc < 1.5 && !sets[0].polylines.is_empty();
        parts.push(format!("{} {secs:.1}s ecc {ecc:.3}", metric.name()));
    }
    for level in [0.3, 0.5, 0.7] {
        let rep = starlikeness_check(&d, center, FieldMetric::S, level, 1000, SEED).unwrap();
        ok &= rep.passed && rep.probes == 1000;
        parts.push(format!("starlike {level}: {:.1e}", rep.max_excess));
    }
    Outcome { passed: ok, detail: parts.join(", ") }
}

fn criterion_10() -> Outcome {
    let mut rng = rng(10);
    let triples: Vec<(f64, f64, f64)> = (0..20)
        .map(|_| {
            let r: f64 = rng.gen_range(0.05..0.9);
            let k = rng.gen_range(r + 0.01..0.99);
            (r, k, rng.gen_range(0.05..0.95) * (k - r).min(1.0 - k))
        })
        .collect();
    let worst = triples
        .par_iter()
        .map(|&(r, k, q)| conjecture_scan(r, k, q, 200).unwrap().max_increment)
        .reduce(|| 0.0, f64::max);
    let note = if worst <= 1e-9 { "monotone on every grid" } else { "NOTABLE: an increase was found" };
    Outcome { passed: true, detail: format!("max positive increment {worst:.3e} over 20 triples ({note})") }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, criterion_1, 30),
        (2, criterion_2, 120),
        (3, criterion_3, 5),
        (4, criterion_4, 60),
        (5, criterion_5, 120),
        (6, criterion_6, 120),
        (7, criterion_7, 60),
        (8, criterion_8, 30),
        (9, criterion_9, 180),
        (10, criterion_10, 60),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failures = 0;
    for (n, f, budget) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let t = Instant::now();
        let out = f();
        let elapsed = t.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let passed = out.passed && in_time;
        failures += usize::from(!passed);
        println!(
            "criterion {n:>2}: {} [{:.1}s / {budget}s{}] {}",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", over budget" },
            out.detail
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}

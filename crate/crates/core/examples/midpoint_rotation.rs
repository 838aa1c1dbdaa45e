//! Bounds for s and delta from rotating a pair about its midpoint.

use ringmetrics::moebius::{delta_metric, emr_bounds_delta};
use ringmetrics::tri_ratio::{emr, emr_bounds_s, s_annulus, UpperBound};
use ringmetrics::{pt, Domain, Result};

fn main() -> Result<()> {
    let r = 0.3;
    let d = Domain::annulus(r)?;
    let (x, y) = (pt(0.62, 0.18), pt(0.55, 0.31));
    let q = emr(x, y, &d)?;
    println!("midpoint {:.6}, half distance {:.6}", q.k, q.q);
    println!("  equidistant pair {:.6} {:.6}", q.x0, q.y0);
    println!("  collinear pair   {:.6} {:.6} (inside: {})", q.x1, q.y1, q.x1y1_inside);

    let (lo, hi) = emr_bounds_s(x, y, r)?;
    let hi = match hi {
        UpperBound::Value(v) => format!("{v:.10}"),
        UpperBound::AttainsOne => "1 (not attained)".into(),
    };
    println!("s:     {lo:.10} <= {:.10} <= {hi}", s_annulus(x, y, r)?.value);

    let b = emr_bounds_delta(&d, x, y)?;
    println!(
        "delta: {:.10} <= {:.10} <= {:.10}{}",
        b.lower,
        delta_metric(&d, x, y)?,
        b.upper,
        if b.conjectural { "  (upper bound conjectural)" } else { "" }
    );
    Ok(())
}

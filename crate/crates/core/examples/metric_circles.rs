//! Metric circles around 0.75 in the annulus 0.6 < |z| < 1, written as SVG.
//!
//! `cargo run --release --example metric_circles -- out_dir [grid]`

use std::path::PathBuf;

use ringmetrics::contour::{evaluate_field, extract_levels, levels_svg, starlikeness_check, FieldMetric};
use ringmetrics::{pt, Domain};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| ".".into()));
    let grid: usize = args.next().map(|g| g.parse()).transpose()?.unwrap_or(400);
    let d = Domain::annulus(0.6)?;
    let center = pt(0.75, 0.0);
    let levels: Vec<f64> = (2..=9).map(|k| k as f64 / 10.0).collect();

    for metric in FieldMetric::ALL {
        let field = evaluate_field(&d, center, metric, grid)?;
        let sets = extract_levels(&field, &levels);
        let path = dir.join(format!("circles_{}.svg", metric.name()));
        std::fs::write(&path, levels_svg(&sets, &d))?;
        let ecc = sets[0].polylines.first().map_or(f64::NAN, |p| p.eccentricity());
        println!("{}: {} paths, innermost eccentricity {ecc:.4}", path.display(), sets.iter().map(|s| s.polylines.len()).sum::<usize>());
    }

    let rep = starlikeness_check(&d, center, FieldMetric::S, 0.5, 500, 42)?;
    println!("s-disk of radius 0.5 starlike: {} (max excess {:.3e})", rep.passed, rep.max_excess);
    Ok(())
}

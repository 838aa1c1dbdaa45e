//! The triangular ratio metric of the annulus, with the reflection point
//! found through the quartic and the closed forms that bypass it.

use ringmetrics::tri_ratio::{optimal_reflection_point, s_annulus, s_collinear, s_equidistant, Side};
use ringmetrics::{pt, Result};

fn main() -> Result<()> {
    let r = 0.6;
    let (x, y) = (pt(0.7, 0.3), pt(0.2, 0.85));
    let s = s_annulus(x, y, r)?;
    println!("s({x}, {y}) = {:.12}  [{}]", s.value, s.active_branch);
    for w in &s.witnesses {
        println!("  boundary witness {w:.6}  |w| = {:.6}", w.norm());
    }

    let outer = optimal_reflection_point(x, y, 1.0, Side::Inside)?;
    println!("outer circle: {} candidate roots, |x-z|+|z-y| = {:.12}", outer.roots.len(), outer.sum);

    let (a, b) = (pt(0.95, 0.0), pt(0.65, 0.0));
    println!("collinear  s = {:.12} (closed form {:.12})", s_annulus(a, b, r)?.value, s_collinear(a, b, r)?);

    let (h, mu) = (0.8, 0.9);
    let e = |t: f64| num_complex::Complex64::from_polar(h, t);
    println!(
        "equidistant s = {:.12} (closed form {:.12})",
        s_annulus(e(mu / 2.0), e(-mu / 2.0), r)?.value,
        s_equidistant(h, mu, r)?
    );
    Ok(())
}

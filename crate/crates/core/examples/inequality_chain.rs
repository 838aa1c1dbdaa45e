//! The chain s/2 <= j* <= th(delta/2) <= 2 j* <= 2 s, and how s and j*
//! move under the inversion swapping the two boundary circles.

use ringmetrics::moebius::{distortion_bounds_check, inequality_chain};
use ringmetrics::{pt, Domain, Result};

fn main() -> Result<()> {
    let pairs = [(pt(0.7, 0.0), pt(0.0, 0.75)), (pt(0.51, 0.02), pt(0.49, -0.02)), (pt(0.9, 0.1), pt(-0.8, -0.3))];
    for d in [Domain::annulus(0.3)?, Domain::PuncturedDisk] {
        println!("{d}");
        for &(x, y) in &pairs {
            let c = inequality_chain(&d, x, y)?;
            let v = c.values();
            println!("  {v:.6?}  holds: {}", c.holds(1e-10));
        }
    }

    let r = 0.3;
    for &(x, y) in &pairs {
        let rep = distortion_bounds_check(x, y, r)?;
        println!(
            "s {:.6} -> {:.6} (x{:.4}), j* {:.6} -> {:.6} (x{:.4})",
            rep.s,
            rep.s_image,
            rep.s_ratio(),
            rep.j_star,
            rep.j_star_image,
            rep.j_star_ratio()
        );
    }
    Ok(())
}

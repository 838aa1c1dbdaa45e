//! The Möbius metric of the annulus and the three parts it is the maximum of.

use ringmetrics::moebius::{delta_annulus, delta_collinear};
use ringmetrics::{pt, Result};

fn main() -> Result<()> {
    let r = 0.5;
    for (x, y) in [(pt(0.9, 0.0), pt(0.6, 0.0)), (pt(0.7, 0.2), pt(-0.3, 0.6)), (pt(0.55, 0.1), pt(0.55, -0.1))] {
        let t = delta_annulus(x, y, r)?;
        println!("delta({x}, {y}) = {:.10}", t.value);
        println!(
            "  disk {:.6}  exterior {:.6}  cross {:.6}  -> {}",
            t.disk_part, t.exterior_part, t.cross_part, t.maximand
        );
        println!("  mu = {:.6}, v* = {:.6}, u* = {:.6}", t.mu, t.v_star, t.u_star);
    }
    let (x, y) = (pt(0.9, 0.0), pt(-0.6, 0.0));
    println!("opposite rays: {:.12} vs closed form {:.12}", delta_annulus(x, y, r)?.value, delta_collinear(x, y, r)?);
    Ok(())
}

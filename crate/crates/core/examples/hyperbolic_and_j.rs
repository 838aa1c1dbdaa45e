//! Hyperbolic metric of the disk, the distance ratio metric j and j*.

use ringmetrics::{j_metric, j_star, pt, rho_disk, rho_exterior, Domain, Result};

fn main() -> Result<()> {
    let (x, y) = (pt(0.0, 0.0), pt(0.5, 0.0));
    println!("rho_B(0, 0.5) = {:.12}  (2 artanh 0.5 = {:.12})", rho_disk(x, y)?, 2.0 * 0.5f64.atanh());

    let r = 0.4;
    let (u, v) = (pt(0.8, 0.1), pt(-0.5, 0.9));
    println!("rho outside the disk of radius {r}: {:.12}", rho_exterior(u * 2.0, v * 2.0, r)?);

    for d in [Domain::UnitDisk, Domain::PuncturedDisk, Domain::annulus(r)?] {
        let (a, b) = (pt(0.6, 0.2), pt(0.5, -0.3));
        println!("{d}: j = {:.10}, j* = {:.10}", j_metric(&d, a, b)?, j_star(&d, a, b)?);
    }
    Ok(())
}

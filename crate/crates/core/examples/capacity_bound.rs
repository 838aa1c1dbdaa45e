//! delta(E, F) for two boundary sets and the resulting capacity lower bound.

use ringmetrics::capacity::{c_constant, cap_lower_bound, delta_ef, BoundarySet};
use ringmetrics::Result;

fn main() -> Result<()> {
    for s in [0.5f64, 1.0, 2.0] {
        let e = BoundarySet::parse("segment:-1,0:0,0", 256)?;
        let f = BoundarySet::parse(&format!("ray:{s},0:1,0"), 256)?;
        let b = cap_lower_bound(&e, &f, 2)?;
        println!("[-1,0] vs [{s}, inf): delta = {:.9} (log(1+1/s) = {:.9}), cap >= {:.9}", b.delta_ef, (1.0 + 1.0 / s).ln(), b.bound);
    }

    let e = BoundarySet::parse("segment:0,0:0.5,0", 256)?;
    let f = BoundarySet::parse("circle:0,0:1", 256)?;
    println!("[0, 0.5] vs unit circle: {:.9}, swapped {:.9}", delta_ef(&e, &f)?, delta_ef(&f, &e)?);

    for n in 2..=6 {
        println!("c_{n} = {:.12}", c_constant(n)?);
    }
    Ok(())
}

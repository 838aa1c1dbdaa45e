//! Scan the cross supremum of the Möbius metric while a pair rotates about
//! its midpoint, looking for places where it fails to decrease.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringmetrics::moebius::conjecture_scan;
use ringmetrics::Result;

fn main() -> Result<()> {
    let rep = conjecture_scan(0.6, 0.8, 0.05, 100)?;
    println!("r=0.6 k=0.8 q=0.05: {:.9} -> {:.9}, max increment {:.3e}", rep.supremum[0], rep.supremum[99], rep.max_increment);

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let r: f64 = rng.gen_range(0.05..0.9);
        let k = rng.gen_range(r + 0.01..0.99);
        let q = rng.gen_range(0.05..0.95) * (k - r).min(1.0 - k);
        worst = worst.max(conjecture_scan(r, k, q, 200)?.max_increment);
    }
    println!("20 random configurations: largest increment {worst:.3e}");
    Ok(())
}

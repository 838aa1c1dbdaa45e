//! Compare the fast evaluators with direct sampling of the boundary.

use ringmetrics::moebius::delta_metric;
use ringmetrics::oracle::{delta_oracle, s_oracle, OracleConfig};
use ringmetrics::tri_ratio::s_metric;
use ringmetrics::{Domain, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let cfg = OracleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for d in [Domain::annulus(0.5)?, Domain::PuncturedDisk, Domain::UnitDisk] {
        let (x, y) = (d.random_point(&mut rng), d.random_point(&mut rng));
        let (s, so) = (s_metric(&d, x, y)?.value, s_oracle(&d, x, y, &cfg)?);
        let (dm, dor) = (delta_metric(&d, x, y)?, delta_oracle(&d, x, y, &cfg)?);
        println!("{d}: x = {x:.5}, y = {y:.5}");
        println!("  s     {s:.12}  oracle {so:.12}  diff {:.2e}", s - so);
        println!("  delta {dm:.12}  oracle {dor:.12}  diff {:.2e}", dm - dor);
    }
    Ok(())
}

//! Run the property suites programmatically and print the failures.

use ringmetrics::verify::{run, Suite, VerifyConfig};

fn main() -> ringmetrics::Result<()> {
    let cfg = VerifyConfig { samples: 200, oracle_samples: 20, ..VerifyConfig::default() };
    for suite in [Suite::Axioms, Suite::ClosedForms, Suite::Inequalities] {
        let rep = run(suite, &cfg)?;
        println!("{suite}: {} properties, {} hard failures", rep.properties.len(), rep.hard_failures().count());
        for p in rep.properties.iter().filter(|p| !p.passed) {
            println!("  {} worst {:e} (tol {:e}) {}", p.name, p.worst, p.tolerance, p.note.as_deref().unwrap_or(""));
        }
    }
    Ok(())
}

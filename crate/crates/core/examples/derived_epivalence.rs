//! Runs the seeded derived induction suite on one bundled scenario.
//!
//! `cargo run --example derived_epivalence -- E3 3`

use phl::cli;
use phl::derived::{epivalence_suite, SampleConfig};

fn main() -> phl::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "E1-Q".into());
    let seeds = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    let scenario = cli::bundled(&name).expect("unknown scenario")?;
    let config = SampleConfig { seeds, recheck: true, ..SampleConfig::default() };
    let report = epivalence_suite(scenario.require_data()?, &config, 0)?;
    for s in &report.samples {
        println!("seed {}: complex from degree {} with dims {:?}", s.seed, s.lo, s.dims);
    }
    for c in &report.checks {
        println!("{:<12} seed {}: {}", c.id, c.seed, if c.passed() { "ok" } else { "FAILED" });
    }
    println!("all passed: {}", report.ok());
    Ok(())
}

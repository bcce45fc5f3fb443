//! Projective modules over the dual numbers glued to `k` versus gluing
//! triples of projectives, enumerated over F2 up to a dimension bound.
//!
//! `cargo run --example milnor -- 6`

use phl::cli;
use phl::triples::{milnor_check, MilnorOptions};

fn main() -> phl::Result<()> {
    let bound = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let scenario = cli::bundled("E1-F2").expect("bundled")?;
    let data = scenario.require_data()?;
    let opts = MilnorOptions { dim_bound: bound, seed: 0, state_ceiling: 1 << 20, samples_per_pair: 3 };
    let report = milnor_check(data, &opts)?;
    println!("projective R-modules of dim <= {bound}: {}", report.projective_classes.len());
    println!("gluing triples of projectives: {}", report.triple_classes.len());
    for c in &report.triple_classes {
        println!(
            "  legs {:?} / {:?}: c = {}, preimage {:?}",
            c.leg1, c.leg2, c.triple.c, c.preimage
        );
    }
    println!("bijection: {}, fully faithful: {}", report.bijection, report.fully_faithful);
    Ok(())
}

//! Separated modules and the unit and counit of the induction adjunction on
//! random samples over `k x k -> k <- k`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use phl::cli;
use phl::modrep::random_module;
use phl::triples::{ind, is_separated, lemma_suite};

fn main() -> phl::Result<()> {
    let scenario = cli::bundled("E3").expect("bundled")?;
    let data = scenario.require_data()?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..4 {
        let m = random_module(&data.r, &mut rng, 3)?;
        let i = ind(data, &m)?;
        println!(
            "dim M = {}: X1 {} + X2 {}, separated: {}",
            m.dim(),
            i.triple.x1.dim(),
            i.triple.x2.dim(),
            is_separated(data, &m)?
        );
    }
    let report = lemma_suite(data, &mut rng, 4, 3)?;
    println!("{} modules and {} triples checked: {}", report.modules, report.triples, report.ok());
    Ok(())
}

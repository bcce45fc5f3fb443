//! Two copies of `k` glued over the dual numbers: the first map is not onto,
//! and twisting the regular triple by the unit `1 + t` gives a gluing triple
//! whose fibre product is zero.

use phl::cli;
use phl::triples::{counit, counterexample_demo, pb, unit_twisted_triple};

fn main() -> phl::Result<()> {
    let scenario = cli::bundled("E2").expect("bundled")?;
    let data = scenario.require_data()?;
    let rp = &data.rp;
    let u: Vec<_> = rp.unit().iter().zip(&rp.basis_vec(1)).map(|(a, b)| a + b).collect();
    let t = unit_twisted_triple(data, &u)?;
    println!("c = {} is invertible: {}", t.c, t.is_gluing());
    println!("dim Pb = {}", pb(&t)?.module.dim());
    println!("counit invertible: {}", counit(&t)?.map.is_iso());

    let report = counterexample_demo(data)?;
    for o in &report.outcomes {
        println!("twist {}: dim Pb {}, counit invertible {}", o.twist, o.pb_dim, o.counit_iso);
    }
    Ok(())
}

//! Lifts a hand-built derived triple back to a complex over the pullback:
//! the induced triple of a sampled complex with `c` scaled by 2.

use phl::chaincx::minimize;
use phl::cli;
use phl::derived::{density_lift, ind_l, sample_complexes, DerivedTriple, SampleConfig};

fn main() -> phl::Result<()> {
    let scenario = cli::bundled("E1-Q").expect("bundled")?;
    let data = scenario.require_data()?;
    let f = data.r.field();
    // the first sample that is not homotopic to a stalk
    let mut p = None;
    'seeds: for seed in 0.. {
        for c in sample_complexes(data, &SampleConfig::default(), seed)? {
            if minimize(&c)?.q.terms().iter().filter(|m| m.dim() > 0).count() >= 2 {
                p = Some(c);
                break 'seeds;
            }
        }
    }
    let p = p.expect("found");
    println!("P: degrees {}..={}, dims {:?}", p.lo(), p.hi(), p.terms().iter().map(|m| m.dim()).collect::<Vec<_>>());

    let t = ind_l(data, &p)?.triple;
    let twisted = DerivedTriple::new(data.clone(), t.p1().clone(), t.p2().clone(), t.c().scale(&f.from_i64(2)))?;
    let lift = density_lift(&twisted)?;
    println!(
        "lift: degrees {}..={}, dims {:?}, cancelled pairs {:?}",
        lift.p.lo(),
        lift.p.hi(),
        lift.p.terms().iter().map(|m| m.dim()).collect::<Vec<_>>(),
        lift.cancelled
    );
    for n in lift.p.degrees().filter(|&n| lift.p.dim_at(n) > 0) {
        println!("  iso on the first leg in degree {n}: {}", lift.iso.f1.at(n, lift.induction.triple.p1(), twisted.p1()));
    }
    Ok(())
}

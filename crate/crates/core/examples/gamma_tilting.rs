//! The triangular ring `Gamma`, the module `T` and its endomorphism ring for
//! the dual numbers glued to `k`, over F101.

use phl::cli;
use phl::gamma::{build_t, compare_gamma_prime, gamma_ring, verify_tilting};

fn main() -> phl::Result<()> {
    let scenario = cli::bundled("E1-F101").expect("bundled")?;
    let ring = gamma_ring(scenario.require_data()?)?;
    println!("dim Gamma = {}, dim R'* = {}", ring.alg.dim(), ring.dual_dim());
    let t = build_t(&ring)?;
    println!("dim T = {}", t.module().dim());
    let r = verify_tilting(&ring)?;
    println!("pd T <= 1: {}, Ext^1(T, T) = {}, syzygies {:?}", r.pd_at_most_one, r.ext1_dim, r.syzygy_dims);
    let g = compare_gamma_prime(&ring)?;
    println!(
        "dim End(T)^op = {}, dim Gamma' = {}, blockwise count = {}, algebra iso: {}",
        g.end_dim, g.gamma_prime_dim, g.block_formula, g.iso
    );
    Ok(())
}

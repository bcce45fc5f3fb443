//! Builds the fibre product of `k[x]/x^2 -> k <- k[y]/y^2` over the
//! rationals and prints its basis, multiplication and structure maps.

use std::sync::Arc;

use phl::algebra::{pullback, Algebra, AlgebraMorphism};
use phl::exactlin::{Field, Mat};

fn main() -> phl::Result<()> {
    let f = Field::Rationals;
    let r1 = Arc::new(Algebra::truncated_polynomial(f, "x", 2));
    let r2 = Arc::new(Algebra::truncated_polynomial(f, "y", 2));
    let k = Arc::new(Algebra::ground(f));
    let ev = Mat::from_i64(f, &[vec![1, 0]]);
    let pi1 = AlgebraMorphism::new(r1, k.clone(), ev.clone())?;
    let pi2 = AlgebraMorphism::new(r2, k, ev)?;
    let data = pullback(&pi1, &pi2)?;

    println!("dim R = {} (rank of [pi1, -pi2] is {})", data.r.dim(), data.stacked_rank());
    println!("basis: {}", data.r.names().join(", "));
    for i in 0..data.r.dim() {
        for j in 0..data.r.dim() {
            let p = data.r.mul(&data.r.basis_vec(i), &data.r.basis_vec(j));
            println!("  {} * {} = {}", data.r.names()[i], data.r.names()[j], data.r.format_elem(&p));
        }
    }
    println!("i1 = {}", data.i1.mat);
    println!("i2 = {}", data.i2.mat);
    let d = data.verify();
    println!("square commutes and R embeds: {}", d.ok());
    Ok(())
}

//! Radical and idempotents of `k[x]/x^2 x k`: the trace form finds the
//! radical, and a family that is idempotent only modulo the radical is
//! lifted to an honest complete orthogonal one.

use phl::algebra::{lift_idempotents, verify_radical, Algebra};
use phl::exactlin::Field;

fn main() -> phl::Result<()> {
    let f = Field::Rationals;
    let a = Algebra::product(&Algebra::truncated_polynomial(f, "x", 2), &Algebra::ground(f));
    println!("basis: {}", a.names().join(", "));

    let rad = a.radical()?;
    let report = verify_radical(&a, &rad.space)?;
    println!("radical: dim {}, nilpotency index {}, {}", report.dim, report.nilpotency_index, report.verdict());

    // (1 + x, 0) and (-x, 1) are idempotent modulo x only
    let one = f.one();
    let zero = f.zero();
    let approx = vec![vec![one.clone(), one.clone(), zero.clone()], vec![zero.clone(), -one.clone(), one.clone()]];
    let lifted = lift_idempotents(&a, &rad.space, &approx)?;
    for (e, g) in approx.iter().zip(&lifted) {
        println!("{} lifts to {}", a.format_elem(e), a.format_elem(g));
    }
    println!("complete and orthogonal: {}", a.check_complete_orthogonal(&lifted).ok());
    let prim = a.primitive_idempotents()?;
    println!("primitive idempotents: {}", prim.iter().map(|e| a.format_elem(e)).collect::<Vec<_>>().join(", "));
    Ok(())
}

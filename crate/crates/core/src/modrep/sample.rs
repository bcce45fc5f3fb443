use rand::Rng;

use super::{Module, Side};
use crate::algebra::AlgRef;
use crate::error::Result;
use crate::exactlin::{random_scalar, Field, Mat, Scalar, Subspace};

fn random_vec(f: Field, n: usize, rng: &mut impl Rng) -> Vec<Scalar> {
    (0..n).map(|_| random_scalar(f, rng, 2)).collect()
}

/// A random invertible element of the span of `basis`, if one turns up.
pub fn random_invertible(f: Field, n: usize, basis: &[Mat], rng: &mut impl Rng, tries: usize) -> Option<Mat> {
    for _ in 0..tries {
        let mut m = Mat::zeros(f, n, n);
        for b in basis {
            m = &m + &b.scale(&random_scalar(f, rng, 3));
        }
        if m.is_invertible() {
            return Some(m);
        }
    }
    None
}

/// A random finitely generated left module of dimension at most `max_dim`:
/// a cyclic or two-generated quotient of a free module, a submodule of one,
/// or a sum of two smaller samples.
pub fn random_module(alg: &AlgRef, rng: &mut impl Rng, max_dim: usize) -> Result<Module> {
    let f = alg.field();
    for _ in 0..16 {
        let m = match rng.gen_range(0..4) {
            0 | 1 => {
                let n = rng.gen_range(1..=2);
                let free = Module::free(alg.clone(), n);
                let k = rng.gen_range(0..=2);
                let vs: Vec<Vec<Scalar>> = (0..k).map(|_| random_vec(f, free.dim(), rng)).collect();
                let sub = free.generated(&vs);
                free.quotient(&sub)?.0
            }
            2 => {
                let free = Module::free(alg.clone(), rng.gen_range(1..=2));
                let vs = vec![random_vec(f, free.dim(), rng)];
                free.submodule(&free.generated(&vs))?
            }
            _ => {
                let half = max_dim / 2;
                if half == 0 {
                    continue;
                }
                let a = random_module(alg, rng, half)?;
                let b = random_module(alg, rng, half)?;
                Module::direct_sum(&[&a, &b])?.module
            }
        };
        if m.dim() <= max_dim {
            return Ok(m);
        }
    }
    // fall back to a simple top of the regular module
    let reg = Module::regular(alg.clone());
    let rad = alg.radical().map(|r| r.space).unwrap_or_else(|_| Subspace::zero(f, alg.dim()));
    let (top, _) = reg.quotient(&reg.ideal_times(&rad))?;
    if top.dim() <= max_dim {
        Ok(top)
    } else {
        Ok(Module::zero(alg.clone(), Side::Left))
    }
}

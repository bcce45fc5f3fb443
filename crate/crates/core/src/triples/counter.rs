use std::sync::Arc;

use serde::Serialize;

use super::{counit, pb, Triple};
use crate::algebra::PullbackData;
use crate::diag::Diagnostics;
use crate::error::{Error, Result};
use crate::exactlin::Scalar;
use crate::modrep::{induce, Module};

/// The triple `(R1, R2; c_u)` with `c_u(r ⊗ a) = r pi1(a) u ⊗ 1`.
pub fn unit_twisted_triple(data: &Arc<PullbackData>, u: &[Scalar]) -> Result<Triple> {
    let x1 = Module::regular(data.r1.clone());
    let x2 = Module::regular(data.r2.clone());
    let y2 = induce(&data.pi2, &x2)?;
    let one2 = data.r2.unit().to_vec();
    let images: Vec<_> = (0..data.r1.dim())
        .map(|j| {
            let a = data.pi1.apply(&data.r1.basis_vec(j));
            y2.tp.elem(&data.rp.mul(&a, u), &one2)
        })
        .collect();
    Triple::from_generator_images(data.clone(), x1, x2, &images)
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistOutcome {
    /// `u` in the basis of `R'`.
    pub twist: String,
    pub gluing: bool,
    pub pb_dim: usize,
    pub glued_dim: usize,
    pub counit_iso: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub pi1_surjective: bool,
    pub r_dim: usize,
    pub outcomes: Vec<TwistOutcome>,
    pub diag: Diagnostics,
}

/// Twists the regular triple by `u = 1 + b` for each basis vector `b` of `R'`
/// outside the image of `pi1`. When `pi1` is not onto, some such gluing
/// triple fails to come from an `R`-module: its counit is not invertible.
pub fn counterexample_demo(data: &Arc<PullbackData>) -> Result<CounterexampleReport> {
    let rp = &data.rp;
    let img = data.pi1.image();
    let one = rp.unit().to_vec();
    let mut twists = vec![one.clone()];
    for k in 0..rp.dim() {
        let b = rp.basis_vec(k);
        if img.contains(&b) {
            continue;
        }
        let u: Vec<Scalar> = one.iter().zip(&b).map(|(x, y)| x + y).collect();
        if rp.left_mult_matrix(&u).is_invertible() {
            twists.push(u);
        }
    }
    let mut d = Diagnostics::new();
    let mut outcomes = Vec::new();
    for u in &twists {
        let t = unit_twisted_triple(data, u)?;
        let e = counit(&t)?;
        outcomes.push(TwistOutcome {
            twist: rp.format_elem(u),
            gluing: t.is_gluing(),
            pb_dim: pb(&t)?.module.dim(),
            glued_dim: t.glued_dim(),
            counit_iso: e.map.is_iso(),
        });
    }
    let surjective = data.pi1_surjective();
    let broken = outcomes.iter().filter(|o| o.gluing && !o.counit_iso).count();
    if surjective {
        d.note("pi1 is surjective; no counterexample expected");
        d.check(broken == 0, || format!("{broken} twisted gluing triples have a non-invertible counit"));
    } else {
        if twists.len() == 1 {
            return Err(Error::InvalidInput("R' has no unit twist outside the image of pi1".into()));
        }
        d.check(broken > 0, || "every twisted gluing triple is induced".into());
        d.note(format!("{broken} gluing triples are not induced from any R-module"));
    }
    Ok(CounterexampleReport { pi1_surjective: surjective, r_dim: data.r.dim(), outcomes, diag: d })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::{e1, e2};
    use super::*;
    use crate::exactlin::Field;

    #[test]
    fn dual_number_twist_has_zero_pullback() {
        let f = Field::prime(2).unwrap();
        let d = e2(f);
        let r = counterexample_demo(&d).unwrap();
        assert!(r.diag.ok());
        assert!(!r.pi1_surjective);
        assert_eq!(r.outcomes.len(), 2);
        assert_eq!((r.outcomes[0].pb_dim, r.outcomes[0].counit_iso), (1, true));
        let t = &r.outcomes[1];
        assert!(t.gluing && !t.counit_iso);
        assert_eq!(t.pb_dim, 0);
    }

    #[test]
    fn surjective_projection_gives_no_counterexample() {
        let r = counterexample_demo(&e1(Field::Rationals)).unwrap();
        assert!(r.pi1_surjective && r.diag.ok());
        assert_eq!(r.outcomes.len(), 1);
    }
}

use std::sync::Arc;

use super::{DerivedTriple, Glued, GluedCategory, GluedMorphism, Leg};
use crate::chaincx::{Complex, Graded};
use crate::error::{Error, Result};
use crate::exactlin::Mat;
use crate::gamma::{phi, GammaModule, GammaRing};

/// `(X1, X2; φ: R'* ⊗_{R1} X1 -> X2)` with complexes as legs.
#[derive(Clone, Debug)]
pub struct CommaObject {
    pub ring: Arc<GammaRing>,
    pub glued: Glued,
}

impl CommaObject {
    pub fn x1(&self) -> &Complex {
        &self.glued.a1
    }
    pub fn x2(&self) -> &Complex {
        &self.glued.a2
    }
    pub fn phi(&self) -> &Graded {
        &self.glued.s
    }

    /// The complex of `Γ`-modules with these legs.
    pub fn to_gamma(&self) -> Result<Complex> {
        let ring = &self.ring;
        let (x1, x2) = (self.x1(), self.x2());
        let src = &self.glued.fa1.complex;
        let lo = x1.lo().min(x2.lo());
        let hi = x1.hi().max(x2.hi());
        if x1.is_zero() && x2.is_zero() {
            return Ok(Complex::zero(ring.alg.clone()));
        }
        let mut terms = Vec::new();
        for n in lo..=hi {
            let g = GammaModule::new(ring, x2.term(n).clone(), x1.term(n).clone(), self.phi().at(n, src, x2))?;
            terms.push(g.module);
        }
        let diffs = (lo..hi).map(|n| GammaModule::block_map(&x2.diff(n), &x1.diff(n))).collect();
        Complex::new(ring.alg.clone(), lo, terms, diffs)
    }
}

/// Pairs `(X1, X2)` over `R1`, `R2` with `R'* ⊗ X1 -> X2`.
pub fn comma_category(ring: &GammaRing) -> GluedCategory {
    GluedCategory { l1: Leg::Tensor(ring.dual.bimodule.clone()), l2: Leg::Identity }
}

/// Reads a complex of `Γ`-modules as its two legs and the structure chain map.
pub fn psi_view(ring: &Arc<GammaRing>, g: &Complex) -> Result<CommaObject> {
    let data = &ring.data;
    let cat = comma_category(ring);
    if g.is_zero() {
        let glued = cat.object(
            Complex::zero(data.r1.clone()),
            Complex::zero(data.r2.clone()),
            Graded::zero(&Complex::zero(data.r2.clone()), &Complex::zero(data.r2.clone()), 0),
        )?;
        return Ok(CommaObject { ring: ring.clone(), glued });
    }
    let mut parts = Vec::new();
    for n in g.degrees() {
        let (gm, change) = GammaModule::from_module(ring, g.term(n))?;
        let back = change.inverse().ok_or_else(|| Error::InvalidModule(format!("degree {n}: block coordinates fail")))?;
        parts.push((gm, change, back));
    }
    let mut d1s = Vec::new();
    let mut d2s = Vec::new();
    for n in g.lo()..g.hi() {
        let i = (n - g.lo()) as usize;
        let (s, t) = (&parts[i], &parts[i + 1]);
        let block = &(&t.1 * &g.diff(n)) * &s.2;
        let (a2, a1, b2, b1) = (s.0.x2.dim(), s.0.x1.dim(), t.0.x2.dim(), t.0.x1.dim());
        if !block.block(0, a2, b2, a1).is_zero() || !block.block(b2, 0, b1, a2).is_zero() {
            return Err(Error::NotAMorphism(format!("d^{n} mixes the two legs")));
        }
        d2s.push(block.block(0, 0, b2, a2));
        d1s.push(block.block(b2, a2, b1, a1));
    }
    let x1 = Complex::new(data.r1.clone(), g.lo(), parts.iter().map(|p| p.0.x1.clone()).collect(), d1s)?;
    let x2 = Complex::new(data.r2.clone(), g.lo(), parts.iter().map(|p| p.0.x2.clone()).collect(), d2s)?;
    let fx1 = cat.l1.apply(&x1)?;
    let f = data.r.field();
    let lo = g.lo();
    let s = Graded::from_fn(&fx1.complex, &x2, 0, |n| {
        let i = n - lo;
        if i >= 0 && (i as usize) < parts.len() {
            parts[i as usize].0.phi.clone()
        } else {
            Mat::zeros(f, x2.dim_at(n), fx1.complex.dim_at(n))
        }
    });
    let glued = cat.object(x1, x2, s)?;
    Ok(CommaObject { ring: ring.clone(), glued })
}

/// The comma object of a derived triple: degreewise `Φ`.
pub fn dphi(ring: &Arc<GammaRing>, t: &DerivedTriple) -> Result<CommaObject> {
    if ring.rp_right_splitting()?.is_none() {
        return Err(Error::HypothesisRefused("R' is not projective as a right R2-module".into()));
    }
    let cat = comma_category(ring);
    let (p1, p2) = (t.p1().clone(), t.p2().clone());
    let fx1 = cat.l1.apply(&p1)?;
    let f = ring.alg.field();
    let mut comps = Vec::new();
    for n in p1.lo().min(p2.lo())..=p1.hi().max(p2.hi()) {
        comps.push((n, phi(ring, &t.degree(n)?)?.phi));
    }
    let s = Graded::from_fn(&fx1.complex, &p2, 0, |n| match comps.iter().find(|(m, _)| *m == n) {
        Some((_, m)) => m.clone(),
        None => Mat::zeros(f, p2.dim_at(n), fx1.complex.dim_at(n)),
    });
    let glued = cat.object(p1, p2, s)?;
    Ok(CommaObject { ring: ring.clone(), glued })
}

pub fn comma_hom(x: &CommaObject, y: &CommaObject) -> Result<Vec<GluedMorphism>> {
    comma_category(&x.ring).hom(&x.glued, &y.glued)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{dtr_hom, ind_l};
    use super::*;
    use crate::exactlin::Field;
    use crate::gamma::{build_t, gamma_ring, twisted_regular_pair};
    use crate::modrep::Module;
    use crate::triples::fixtures::{e1, e3};
    use crate::triples::ind;

    #[test]
    fn regular_pair_stalk() {
        for f in [Field::prime(2).unwrap(), Field::Rationals] {
            let ring = gamma_ring(&e1(f)).unwrap();
            let t0 = twisted_regular_pair(&ring).unwrap();
            let c = psi_view(&ring, &Complex::stalk(&t0.module, 0).unwrap()).unwrap();
            assert_eq!((c.x1().dim_at(0), c.x2().dim_at(0)), (2, 1));
            assert_eq!(c.phi().at(0, &c.glued.fa1.complex, c.x2()), t0.phi);
            let z = psi_view(&ring, &Complex::zero(ring.alg.clone())).unwrap();
            assert!(z.x1().is_zero() && z.x2().is_zero());
        }
    }

    #[test]
    fn direct_sums_split_componentwise() {
        let ring = gamma_ring(&e1(Field::Rationals)).unwrap();
        let t = build_t(&ring).unwrap();
        let c = psi_view(&ring, &Complex::stalk(t.module(), 1).unwrap()).unwrap();
        assert_eq!((c.x1().dim_at(1), c.x2().dim_at(1)), (4, 1));
    }

    #[test]
    fn dphi_of_induced_stalk_is_phi_of_ind() {
        let d = e1(Field::Rationals);
        let ring = gamma_ring(&d).unwrap();
        let p = Complex::stalk(&Module::regular(d.r.clone()), 0).unwrap();
        let c = dphi(&ring, &ind_l(&d, &p).unwrap().triple).unwrap();
        let g = phi(&ring, &ind(&d, &Module::regular(d.r.clone())).unwrap().triple).unwrap();
        assert_eq!(c.phi().at(0, &c.glued.fa1.complex, c.x2()), g.phi);
        let z = dphi(&ring, &DerivedTriple::zero(d)).unwrap();
        assert!(z.x1().is_zero());
    }

    #[test]
    fn hom_dimensions_agree_on_both_sides() {
        for d in [e1(Field::Rationals), e1(Field::prime(3).unwrap()), e3(Field::Rationals)] {
            let ring = gamma_ring(&d).unwrap();
            let x = nilpotent_or_zero(&d);
            let ps = [diagonal(&d, 0, &[1], &x), diagonal(&d, 0, &[1, 1], &x), diagonal(&d, -1, &[1, 2, 1], &x)];
            let ts: Vec<_> = ps.iter().map(|p| ind_l(&d, p).unwrap().triple).collect();
            let cs: Vec<_> = ts.iter().map(|t| dphi(&ring, t).unwrap()).collect();
            for i in 0..ts.len() {
                for j in 0..ts.len() {
                    let a = dtr_hom(&ts[i], &ts[j]).unwrap().len();
                    let b = comma_hom(&cs[i], &cs[j]).unwrap().len();
                    assert_eq!(a, b, "pair ({i}, {j})");
                }
            }
        }
    }

    #[test]
    fn gamma_complex_round_trip() {
        let d = e1(Field::Rationals);
        let ring = gamma_ring(&d).unwrap();
        let p = diagonal(&d, 0, &[1, 2], &nilpotent(&d));
        let c = dphi(&ring, &ind_l(&d, &p).unwrap().triple).unwrap();
        let g = c.to_gamma().unwrap();
        let back = psi_view(&ring, &g).unwrap();
        for n in g.degrees() {
            assert_eq!(back.phi().at(n, &back.glued.fa1.complex, back.x2()), c.phi().at(n, &c.glued.fa1.complex, c.x2()));
            assert_eq!(back.x1().diff(n), c.x1().diff(n));
        }
    }

    fn nilpotent_or_zero(d: &crate::algebra::PullbackData) -> Vec<crate::exactlin::Scalar> {
        let rad = d.r.radical().unwrap().space;
        if rad.dim() == 0 {
            d.r.zero_elem()
        } else {
            rad.vector(0)
        }
    }
}

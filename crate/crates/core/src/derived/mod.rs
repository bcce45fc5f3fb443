//! Derived triples `(P1, P2; c)` of bounded projective complexes, the derived
//! induction functor and the checks that it is an epivalence.

mod density;
mod lift;
mod suite;
mod views;

use std::sync::Arc;

use crate::algebra::{AlgRef, AlgebraMorphism, PullbackData};
use crate::chaincx::{
    chain_operator, flat_len, flat_over, is_quasi_iso, joint_range, null_operator, tensor_complex, tensor_map, verify_homotopy,
    ChainMap, Complex, Graded, Homotopy, MapSpace, TensoredComplex,
};
use crate::error::{Error, Result};
use crate::exactlin::{rref, Mat, Subspace};
use crate::modrep::{is_projective, same_algebra, Bimodule};
use crate::triples::{ind, Triple};

pub use density::{density_lift, density_round_trip, radical_condition_check, DensityLift, RadicalCondition};
pub use lift::{
    cor_ff_check, detect_iso, detects_iso_check, fullness_witness, kernel_basis, square_zero_check, FullnessWitness, IsoDetection,
    KernelElement,
};
pub use suite::{epivalence_suite, epivalence_suite_with, sample_complex, sample_complexes, EpivalenceReport, SampleConfig, SampleSummary, SuiteCheck};
pub use views::{comma_category, comma_hom, dphi, psi_view, CommaObject};

/// A functor on complexes: tensoring with a bimodule, or the identity.
#[derive(Clone, Debug)]
pub enum Leg {
    Tensor(Bimodule),
    Identity,
}

/// A complex after a [`Leg`], with the tensor coordinates when there are any.
#[derive(Clone, Debug)]
pub struct Applied {
    pub complex: Complex,
    pub tensored: Option<TensoredComplex>,
}

impl Leg {
    /// `B ⊗_A -` along `phi: A -> B`.
    pub fn along(phi: &AlgebraMorphism) -> Result<Leg> {
        Ok(Leg::Tensor(Bimodule::via(&AlgebraMorphism::identity(phi.target.clone()), phi)?))
    }

    pub fn apply(&self, x: &Complex) -> Result<Applied> {
        match self {
            Leg::Tensor(b) => {
                let t = tensor_complex(b, x)?;
                Ok(Applied { complex: t.complex.clone(), tensored: Some(t) })
            }
            Leg::Identity => Ok(Applied { complex: x.clone(), tensored: None }),
        }
    }

    pub fn map(&self, g: &Graded, x: &Complex, y: &Complex, ax: &Applied, ay: &Applied) -> Graded {
        match (self, &ax.tensored, &ay.tensored) {
            (Leg::Tensor(b), Some(tx), Some(ty)) => tensor_map(b, g, x, y, tx, ty),
            _ => g.clone(),
        }
    }
}

/// An object `(A1, A2; s: F1 A1 -> F2 A2)` of a category glued from two legs.
#[derive(Clone, Debug)]
pub struct Glued {
    pub a1: Complex,
    pub a2: Complex,
    pub fa1: Applied,
    pub fa2: Applied,
    pub s: ChainMap,
}

/// `(f1, f2)` with a witness `s' F1(f1) - F2(f2) s = d w + w d`.
#[derive(Clone, Debug)]
pub struct GluedMorphism {
    pub f1: ChainMap,
    pub f2: ChainMap,
    pub witness: Homotopy,
}

/// Pairs of complexes joined by a chain map `F1 A1 -> F2 A2`; morphisms are
/// pairs of homotopy classes compatible up to homotopy.
#[derive(Clone, Debug)]
pub struct GluedCategory {
    pub l1: Leg,
    pub l2: Leg,
}

impl GluedCategory {
    pub fn object(&self, a1: Complex, a2: Complex, s: ChainMap) -> Result<Glued> {
        let fa1 = self.l1.apply(&a1)?;
        let fa2 = self.l2.apply(&a2)?;
        if !s.is_chain_map(&fa1.complex, &fa2.complex) {
            return Err(Error::NotAMorphism("structure map is not a chain map".into()));
        }
        Ok(Glued { a1, a2, fa1, fa2, s })
    }

    /// `s' F1(f1)` and `F2(f2) s`.
    fn sides(&self, x: &Glued, y: &Glued, f1: &ChainMap, f2: &ChainMap) -> (ChainMap, ChainMap) {
        let (src, tgt) = (&x.fa1.complex, &y.fa2.complex);
        let left = y.s.after(&self.l1.map(f1, &x.a1, &y.a1, &x.fa1, &y.fa1), src, &y.fa1.complex, tgt);
        let right = self.l2.map(f2, &x.a2, &y.a2, &x.fa2, &y.fa2).after(&x.s, src, &x.fa2.complex, tgt);
        (left, right)
    }

    pub fn is_morphism(&self, x: &Glued, y: &Glued, m: &GluedMorphism) -> bool {
        if !m.f1.is_chain_map(&x.a1, &y.a1) || !m.f2.is_chain_map(&x.a2, &y.a2) {
            return false;
        }
        let (l, r) = self.sides(x, y, &m.f1, &m.f2);
        verify_homotopy(&l, &r, &m.witness, &x.fa1.complex, &y.fa2.complex)
    }

    pub fn identity(&self, x: &Glued) -> GluedMorphism {
        GluedMorphism {
            f1: Graded::identity(&x.a1),
            f2: Graded::identity(&x.a2),
            witness: Graded::zero(&x.fa1.complex, &x.fa2.complex, -1),
        }
    }

    /// `second ∘ first` for `first: x -> y`, `second: y -> z`.
    pub fn compose(&self, second: &GluedMorphism, first: &GluedMorphism, x: &Glued, y: &Glued, z: &Glued) -> GluedMorphism {
        let f1 = second.f1.after(&first.f1, &x.a1, &y.a1, &z.a1);
        let f2 = second.f2.after(&first.f2, &x.a2, &y.a2, &z.a2);
        // w2 F1(f1) + F2(g2) w1
        let ff1 = self.l1.map(&first.f1, &x.a1, &y.a1, &x.fa1, &y.fa1);
        let fg2 = self.l2.map(&second.f2, &y.a2, &z.a2, &y.fa2, &z.fa2);
        let (src, tgt) = (&x.fa1.complex, &z.fa2.complex);
        let a = second.witness.after(&ff1, src, &y.fa1.complex, tgt);
        let b = fg2.after(&first.witness, src, &y.fa2.complex, tgt);
        GluedMorphism { f1, f2, witness: a.add(&b, src, tgt) }
    }

    /// Basis of the morphism classes `x -> y`, each with a verified witness.
    ///
    /// One linear system in `(f1, f2, w)`: both chain conditions and the
    /// compatibility up to `d w + w d`. Solutions whose legs are both
    /// null-homotopic are factored out.
    pub fn hom(&self, x: &Glued, y: &Glued) -> Result<Vec<GluedMorphism>> {
        let f = x.a1.field();
        let m1 = MapSpace::new(&x.a1, &y.a1, 0)?;
        let m2 = MapSpace::new(&x.a2, &y.a2, 0)?;
        let (src, tgt) = (&x.fa1.complex, &y.fa2.complex);
        let ws = MapSpace::new(src, tgt, -1)?;
        let (c1, c2) = (chain_operator(&m1), chain_operator(&m2));
        let (lo, hi) = joint_range(&[src, tgt], 0);
        let r3 = flat_len(src, tgt, 0, lo, hi);
        let (r1, r2) = (c1.rows(), c2.rows());
        let left = m1.operator(r3, |g| flat_over(&self.sides(x, y, g, &Graded::zero(&x.a2, &y.a2, 0)).0, src, tgt, lo, hi));
        let right = m2.operator(r3, |g| flat_over(&self.sides(x, y, &Graded::zero(&x.a1, &y.a1, 0), g).1, src, tgt, lo, hi));
        let bw = ws.operator(r3, |h| flat_over(&h.boundary(src, tgt), src, tgt, lo, hi));
        let n12 = m1.dim + m2.dim;
        let mut sys = Mat::zeros(f, r1 + r2 + r3, n12 + ws.dim);
        sys.set_block(0, 0, &c1);
        sys.set_block(r1, m1.dim, &c2);
        sys.set_block(r1 + r2, 0, &left);
        sys.set_block(r1 + r2, m1.dim, &-&right);
        sys.set_block(r1 + r2, n12, &-&bw);
        let sol = sys.kernel();
        let (_, n1) = null_operator(&m1)?;
        let (_, n2) = null_operator(&m2)?;
        let null = Subspace::span_of_cols(&Mat::block_diag(f, &[&n1, &n2]));
        let q = null.ambient_quotient();
        let classes = &q.proj * &sol.basis().block(0, 0, n12, sol.dim());
        let mut out = Vec::new();
        for j in rref(&classes).pivots {
            let z = sol.vector(j);
            let m = GluedMorphism {
                f1: m1.assemble(&z[..m1.dim]),
                f2: m2.assemble(&z[m1.dim..n12]),
                witness: ws.assemble(&z[n12..]),
            };
            if !self.is_morphism(x, y, &m) {
                return Err(Error::NotAMorphism("solved morphism fails its own witness".into()));
            }
            out.push(m);
        }
        Ok(out)
    }
}

fn require_projective_terms(x: &Complex, which: &str) -> Result<()> {
    for n in x.degrees() {
        if is_projective(x.term(n))?.is_none() {
            return Err(Error::HypothesisRefused(format!("{which}: term in degree {n} is not projective; resolve first")));
        }
    }
    Ok(())
}

fn require_over(x: &Complex, alg: &AlgRef, which: &str) -> Result<()> {
    if !x.is_zero() && !same_algebra(x.alg(), alg) {
        return Err(Error::AlgebraMismatch(format!("{which} is a complex over the wrong ring")));
    }
    Ok(())
}

/// Derived triples: legs over `R1`, `R2`, joined by `c: R' ⊗ P1 -> R' ⊗ P2`.
pub fn triple_category(data: &PullbackData) -> Result<GluedCategory> {
    Ok(GluedCategory { l1: Leg::along(&data.pi1)?, l2: Leg::along(&data.pi2)? })
}

#[derive(Clone, Debug)]
pub struct DerivedTriple {
    pub data: Arc<PullbackData>,
    pub glued: Glued,
}

pub type DTrMorphism = GluedMorphism;

impl DerivedTriple {
    pub fn new(data: Arc<PullbackData>, p1: Complex, p2: Complex, c: ChainMap) -> Result<DerivedTriple> {
        require_over(&p1, &data.r1, "P1")?;
        require_over(&p2, &data.r2, "P2")?;
        require_projective_terms(&p1, "P1")?;
        require_projective_terms(&p2, "P2")?;
        let glued = triple_category(&data)?.object(p1, p2, c)?;
        Ok(DerivedTriple { data, glued })
    }

    pub fn zero(data: Arc<PullbackData>) -> DerivedTriple {
        let p1 = Complex::zero(data.r1.clone());
        let p2 = Complex::zero(data.r2.clone());
        let c = Graded::zero(&Complex::zero(data.rp.clone()), &Complex::zero(data.rp.clone()), 0);
        DerivedTriple::new(data, p1, p2, c).expect("zero derived triple is well formed")
    }

    pub fn p1(&self) -> &Complex {
        &self.glued.a1
    }
    pub fn p2(&self) -> &Complex {
        &self.glued.a2
    }
    /// `R' ⊗ P1`
    pub fn y1(&self) -> &Complex {
        &self.glued.fa1.complex
    }
    /// `R' ⊗ P2`
    pub fn y2(&self) -> &Complex {
        &self.glued.fa2.complex
    }
    pub fn c(&self) -> &ChainMap {
        &self.glued.s
    }

    /// `c` is a quasi-isomorphism.
    pub fn is_gluing(&self) -> Result<bool> {
        is_quasi_iso(self.c(), self.y1(), self.y2())
    }

    /// The module triple in degree `n`.
    pub fn degree(&self, n: i64) -> Result<Triple> {
        Triple::new(
            self.data.clone(),
            self.p1().term(n).clone(),
            self.p2().term(n).clone(),
            self.c().at(n, self.y1(), self.y2()),
        )
    }

    pub fn is_morphism_to(&self, other: &DerivedTriple, m: &DTrMorphism) -> Result<bool> {
        Ok(triple_category(&self.data)?.is_morphism(&self.glued, &other.glued, m))
    }
}

/// Basis of the derived-triple morphism classes `s -> t`.
pub fn dtr_hom(s: &DerivedTriple, t: &DerivedTriple) -> Result<Vec<DTrMorphism>> {
    triple_category(&s.data)?.hom(&s.glued, &t.glued)
}

/// `ind_L(P) = (R1 ⊗ P, R2 ⊗ P; can)` for a complex of projectives over `R`.
#[derive(Clone, Debug)]
pub struct DerivedInduction {
    pub source: Complex,
    /// `R1 ⊗_R P`
    pub leg1: Applied,
    /// `R2 ⊗_R P`
    pub leg2: Applied,
    pub triple: DerivedTriple,
}

/// The two legs `R_i ⊗_R -` of the derived induction.
pub(crate) fn induction_legs(data: &PullbackData) -> Result<(Leg, Leg)> {
    Ok((Leg::along(&data.i1)?, Leg::along(&data.i2)?))
}

pub fn ind_l(data: &Arc<PullbackData>, p: &Complex) -> Result<DerivedInduction> {
    require_over(p, &data.r, "P")?;
    require_projective_terms(p, "P")?;
    let (l1, l2) = induction_legs(data)?;
    let leg1 = l1.apply(p)?;
    let leg2 = l2.apply(p)?;
    let cat = triple_category(data)?;
    let y1 = cat.l1.apply(&leg1.complex)?;
    let y2 = cat.l2.apply(&leg2.complex)?;
    let mut cs = Vec::new();
    for n in p.degrees() {
        cs.push((n, ind(data, p.term(n))?.triple.c));
    }
    let f = data.r.field();
    let c = Graded::from_fn(&y1.complex, &y2.complex, 0, |n| match cs.iter().find(|(m, _)| *m == n) {
        Some((_, c)) => c.clone(),
        None => Mat::zeros(f, y2.complex.dim_at(n), y1.complex.dim_at(n)),
    });
    let triple = DerivedTriple::new(data.clone(), leg1.complex.clone(), leg2.complex.clone(), c)?;
    Ok(DerivedInduction { source: p.clone(), leg1, leg2, triple })
}

/// `ind_L(g)`; strictly compatible, so the witness is zero.
pub fn ind_l_map(src: &DerivedInduction, tgt: &DerivedInduction, g: &ChainMap) -> Result<DTrMorphism> {
    let (l1, l2) = induction_legs(&src.triple.data)?;
    let f1 = l1.map(g, &src.source, &tgt.source, &src.leg1, &tgt.leg1);
    let f2 = l2.map(g, &src.source, &tgt.source, &src.leg2, &tgt.leg2);
    let witness = Graded::zero(src.triple.y1(), tgt.triple.y2(), -1);
    let m = DTrMorphism { f1, f2, witness };
    if !src.triple.is_morphism_to(&tgt.triple, &m)? {
        return Err(Error::NotAMorphism("induced pair is not compatible with can".into()));
    }
    Ok(m)
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::exactlin::Field;
    use crate::modrep::Module;
    use crate::triples::fixtures::{e1, e3};

    fn fields() -> Vec<Field> {
        vec![Field::prime(2).unwrap(), Field::Rationals]
    }

    #[test]
    fn induced_stalk_is_the_module_triple() {
        for f in fields() {
            let d = e1(f);
            let p = Complex::stalk(&Module::regular(d.r.clone()), 0).unwrap();
            let i = ind_l(&d, &p).unwrap();
            let t = i.triple.degree(0).unwrap();
            let m = ind(&d, &Module::regular(d.r.clone())).unwrap().triple;
            assert_eq!((t.x1.dim(), t.x2.dim()), (m.x1.dim(), m.x2.dim()));
            assert_eq!(t.c, m.c);
            assert!(i.triple.is_gluing().unwrap());
        }
    }

    #[test]
    fn zero_and_contractible() {
        let d = e1(Field::Rationals);
        let z = ind_l(&d, &Complex::zero(d.r.clone())).unwrap();
        assert!(z.triple.p1().is_zero() && z.triple.p2().is_zero());
        let c = Complex::contractible(&Module::regular(d.r.clone()), 0).unwrap();
        let i = ind_l(&d, &c).unwrap();
        for leg in [i.triple.p1(), i.triple.p2()] {
            let id = Graded::identity(leg);
            assert!(crate::chaincx::null_homotopy_witness(&id, leg, leg).unwrap().is_some());
        }
        let t = DerivedTriple::zero(d.clone());
        assert!(dtr_hom(&t, &i.triple).unwrap().is_empty());
    }

    #[test]
    fn non_projective_terms_are_refused() {
        let d = e1(Field::Rationals);
        let rad = d.r.radical().unwrap().space;
        let reg = Module::regular(d.r.clone());
        let (s, _) = reg.quotient(&reg.ideal_times(&rad)).unwrap();
        let e = ind_l(&d, &Complex::stalk(&s, 0).unwrap()).unwrap_err();
        assert!(matches!(e, Error::HypothesisRefused(_)));
    }

    #[test]
    fn endomorphisms_of_induced_stalk() {
        for f in fields() {
            let d = e1(f);
            let p = Complex::stalk(&Module::regular(d.r.clone()), 0).unwrap();
            let i = ind_l(&d, &p).unwrap();
            let h = dtr_hom(&i.triple, &i.triple).unwrap();
            assert_eq!(h.len(), d.r.dim());
            // stalks in degree 0: the module triple morphisms
            let m = ind(&d, &Module::regular(d.r.clone())).unwrap().triple;
            assert_eq!(h.len(), crate::triples::hom_triples(&m, &m).unwrap().len());
        }
        let d = e3(Field::Rationals);
        let p = Complex::stalk(&Module::regular(d.r.clone()), 0).unwrap();
        let i = ind_l(&d, &p).unwrap();
        assert_eq!(dtr_hom(&i.triple, &i.triple).unwrap().len(), d.r.dim());
    }

    #[test]
    fn induced_maps_compose() {
        let d = e1(Field::prime(3).unwrap());
        let x = nilpotent(&d);
        let p = diagonal(&d, 0, &[1, 2, 1], &x);
        let i = ind_l(&d, &p).unwrap();
        let hk = crate::chaincx::homotopy_hom(&p, &p).unwrap();
        let cat = triple_category(&d).unwrap();
        for a in &hk.reps {
            for b in &hk.reps {
                let ma = ind_l_map(&i, &i, a).unwrap();
                let mb = ind_l_map(&i, &i, b).unwrap();
                let ab = ind_l_map(&i, &i, &b.after(a, &p, &p, &p)).unwrap();
                let comp = cat.compose(&mb, &ma, &i.triple.glued, &i.triple.glued, &i.triple.glued);
                assert!(cat.is_morphism(&i.triple.glued, &i.triple.glued, &comp));
                assert!(comp.f1.sub(&ab.f1, i.triple.p1(), i.triple.p1()).is_zero_map());
                assert!(comp.f2.sub(&ab.f2, i.triple.p2(), i.triple.p2()).is_zero_map());
            }
        }
    }

    #[test]
    fn twisted_two_term_triple_has_homs() {
        let d = e1(Field::Rationals);
        let x = nilpotent(&d);
        let p = diagonal(&d, 0, &[1, 1], &x);
        let i = ind_l(&d, &p).unwrap();
        let h = dtr_hom(&i.triple, &i.triple).unwrap();
        let hk = crate::chaincx::homotopy_hom(&p, &p).unwrap();
        assert_eq!(h.len(), hk.dim());
    }
}

//! Triples `(X1, X2; c)` over a pullback square, with induction `Ind` and
//! the fibre-product functor `Pb`.

mod checks;
mod counter;
mod milnor;

use std::sync::Arc;

use crate::algebra::PullbackData;
use crate::error::{Error, Result};
use crate::exactlin::{invertible_in_span, Mat, Scalar, SearchBudget, SpanSearch, Subspace};
use crate::modrep::{induce, same_algebra, Induced, IsoVerdict, Module, Side, TensorProduct};

pub use checks::{
    adjunction_check, counit_gluing_check, is_separated, lemma_suite, sample_gluing_triples, sample_modules, separated_equiv_check,
    sequence_check, AdjunctionReport, CounitGluingReport, LemmaReport, SeparatedReport,
};
pub use counter::{counterexample_demo, unit_twisted_triple, CounterexampleReport, TwistOutcome};
pub use milnor::{milnor_check, HomCheck, MilnorOptions, MilnorReport, TripleClass};

/// `X1` over `R1`, `X2` over `R2` and an `R'`-map `c: R' ⊗ X1 -> R' ⊗ X2`.
#[derive(Clone, Debug)]
pub struct Triple {
    pub data: Arc<PullbackData>,
    pub x1: Module,
    pub x2: Module,
    /// `R' ⊗_{R1} X1`
    pub y1: Induced,
    /// `R' ⊗_{R2} X2`
    pub y2: Induced,
    pub c: Mat,
}

/// A pair `(f1, f2)` of leg maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleMorphism {
    pub f1: Mat,
    pub f2: Mat,
}

impl TripleMorphism {
    pub fn is_iso(&self) -> bool {
        self.f1.is_invertible() && self.f2.is_invertible()
    }

    pub fn is_identity(&self) -> bool {
        self.f1.is_identity() && self.f2.is_identity()
    }

    /// `self ∘ first`
    pub fn after(&self, first: &TripleMorphism) -> TripleMorphism {
        TripleMorphism { f1: &self.f1 * &first.f1, f2: &self.f2 * &first.f2 }
    }

    fn flat(&self) -> Vec<Scalar> {
        let mut v = self.f1.flatten();
        v.extend(self.f2.flatten());
        v
    }
}

fn check_leg(m: &Module, alg: &crate::algebra::AlgRef, which: &str) -> Result<()> {
    if m.side() != Side::Left || !same_algebra(m.alg(), alg) {
        return Err(Error::AlgebraMismatch(format!("{which} must be a left module over {which}'s ring")));
    }
    Ok(())
}

impl Triple {
    pub fn new(data: Arc<PullbackData>, x1: Module, x2: Module, c: Mat) -> Result<Triple> {
        check_leg(&x1, &data.r1, "X1")?;
        check_leg(&x2, &data.r2, "X2")?;
        let y1 = induce(&data.pi1, &x1)?;
        let y2 = induce(&data.pi2, &x2)?;
        if c.rows() != y2.module.dim() || c.cols() != y1.module.dim() {
            return Err(Error::DimensionMismatch(format!(
                "c is {}x{}, induced modules have dims {} and {}",
                c.rows(),
                c.cols(),
                y1.module.dim(),
                y2.module.dim()
            )));
        }
        if !y1.module.is_morphism(&y2.module, &c) {
            return Err(Error::NotAMorphism("c is not R'-linear".into()));
        }
        Ok(Triple { data, x1, x2, y1, y2, c })
    }

    /// The triple whose `c` sends `1 ⊗ e_j` to `images[j]` (coordinates in `R' ⊗ X2`).
    pub fn from_generator_images(
        data: Arc<PullbackData>,
        x1: Module,
        x2: Module,
        images: &[Vec<Scalar>],
    ) -> Result<Triple> {
        check_leg(&x1, &data.r1, "X1")?;
        check_leg(&x2, &data.r2, "X2")?;
        let f = x1.field();
        let y1 = induce(&data.pi1, &x1)?;
        let y2 = induce(&data.pi2, &x2)?;
        if images.len() != x1.dim() || images.iter().any(|v| v.len() != y2.module.dim()) {
            return Err(Error::DimensionMismatch("one image in R' ⊗ X2 per basis vector of X1 is required".into()));
        }
        let dp = data.rp.dim();
        let mut plain = Mat::zeros(f, y2.module.dim(), dp * x1.dim());
        for k in 0..dp {
            for (j, img) in images.iter().enumerate() {
                let col = y2.module.act(k).mul_vec(img);
                for (row, v) in col.into_iter().enumerate() {
                    plain[(row, k * x1.dim() + j)] = v;
                }
            }
        }
        if !(&plain * y1.tp.relations.basis()).is_zero() {
            return Err(Error::NotAMorphism("images do not define a map on R' ⊗ X1".into()));
        }
        let c = &plain * &y1.tp.lift;
        Triple::new(data, x1, x2, c)
    }

    pub fn zero(data: Arc<PullbackData>) -> Triple {
        let f = data.r.field();
        let x1 = Module::zero(data.r1.clone(), Side::Left);
        let x2 = Module::zero(data.r2.clone(), Side::Left);
        Triple::new(data, x1, x2, Mat::zeros(f, 0, 0)).expect("zero triple is well formed")
    }

    /// `c` is an isomorphism.
    pub fn is_gluing(&self) -> bool {
        self.c.is_square() && self.c.is_invertible()
    }

    /// `(X1, X2; alpha ∘ c)` for an `R'`-automorphism `alpha` of `R' ⊗ X2`.
    pub fn twisted(&self, alpha: &Mat) -> Result<Triple> {
        if !self.y2.module.is_morphism(&self.y2.module, alpha) {
            return Err(Error::NotAMorphism("twist is not R'-linear".into()));
        }
        let mut t = self.clone();
        t.c = alpha * &self.c;
        Ok(t)
    }

    /// `dim X1 + dim X2 - dim R' ⊗ X2`, the dimension `Pb` has on gluing
    /// triples once `pi1` is onto.
    pub fn glued_dim(&self) -> usize {
        (self.x1.dim() + self.x2.dim()).saturating_sub(self.y2.module.dim())
    }

    pub fn is_morphism_to(&self, other: &Triple, m: &TripleMorphism) -> bool {
        self.x1.is_morphism(&other.x1, &m.f1)
            && self.x2.is_morphism(&other.x2, &m.f2)
            && &other.c * &base_change(&self.y1, &other.y1, &m.f1) == &base_change(&self.y2, &other.y2, &m.f2) * &self.c
    }
}

/// `R' ⊗ f` between two induced modules.
pub fn base_change(src: &Induced, tgt: &Induced, f: &Mat) -> Mat {
    let d = src.tp.left_dim;
    TensorProduct::map_between(&src.tp, &tgt.tp, &Mat::identity(f.field(), d), f)
}

/// `B ⊗ M -> X`, `b ⊗ m -> b g(m)` for a module `X` over `B` and a linear `g: M -> X`.
fn extend_scalars(leg: &Induced, x: &Module, g: &Mat) -> Mat {
    let f = x.field();
    let (db, dm) = (leg.tp.left_dim, leg.tp.right_dim);
    let mut plain = Mat::zeros(f, x.dim(), db * dm);
    for k in 0..db {
        let a = x.act(k) * g;
        for j in 0..dm {
            for row in 0..x.dim() {
                plain[(row, k * dm + j)] = a[(row, j)].clone();
            }
        }
    }
    &plain * &leg.tp.lift
}

/// `Ind(M) = (R1 ⊗_R M, R2 ⊗_R M; can_M)`, keeping the two inductions.
#[derive(Clone, Debug)]
pub struct Induction {
    pub module: Module,
    pub leg1: Induced,
    pub leg2: Induced,
    pub triple: Triple,
}

pub fn ind(data: &Arc<PullbackData>, m: &Module) -> Result<Induction> {
    check_leg(m, &data.r, "M")?;
    let f = m.field();
    let leg1 = induce(&data.i1, m)?;
    let leg2 = induce(&data.i2, m)?;
    let y1 = induce(&data.pi1, &leg1.module)?;
    let y2 = induce(&data.pi2, &leg2.module)?;
    // both sides are R' ⊗_R M
    let pi = data.pi1.after(&data.i1)?;
    let w = induce(&pi, m)?;
    let id = Mat::identity(f, data.rp.dim());
    let a1 = TensorProduct::map_between(&w.tp, &y1.tp, &id, &leg1.unit_map);
    let a2 = TensorProduct::map_between(&w.tp, &y2.tp, &id, &leg2.unit_map);
    let a1_inv = a1
        .inverse()
        .ok_or_else(|| Error::InvalidInput("R' ⊗ R1 ⊗ M is not identified with R' ⊗ M".into()))?;
    let c = &a2 * &a1_inv;
    let triple = Triple { data: data.clone(), x1: leg1.module.clone(), x2: leg2.module.clone(), y1, y2, c };
    Ok(Induction { module: m.clone(), leg1, leg2, triple })
}

/// `Ind` on a morphism `g: M -> N`.
pub fn ind_map(src: &Induction, tgt: &Induction, g: &Mat) -> TripleMorphism {
    let f = g.field();
    let d = |l: &Induced| Mat::identity(f, l.tp.left_dim);
    TripleMorphism {
        f1: TensorProduct::map_between(&src.leg1.tp, &tgt.leg1.tp, &d(&src.leg1), g),
        f2: TensorProduct::map_between(&src.leg2.tp, &tgt.leg2.tp, &d(&src.leg2), g),
    }
}

/// `Pb(T)` inside `X1 ⊕ X2` with its two projections.
#[derive(Clone, Debug)]
pub struct PbModule {
    pub module: Module,
    pub space: Subspace,
    pub p1: Mat,
    pub p2: Mat,
}

pub fn pb(t: &Triple) -> Result<PbModule> {
    let f = t.x1.field();
    let (d1, d2) = (t.x1.dim(), t.x2.dim());
    let xi = &t.c * &t.y1.unit_map;
    let kappa = &t.y2.unit_map;
    let map = Mat::hstack(f, t.y2.module.dim(), &[&xi, &-kappa]);
    let space = map.kernel();
    let x1r = t.x1.restrict(&t.data.i1)?;
    let x2r = t.x2.restrict(&t.data.i2)?;
    let sum = Module::direct_sum(&[&x1r, &x2r])?;
    let module = sum.module.submodule(&space)?;
    let p1 = space.basis().block(0, 0, d1, space.dim());
    let p2 = space.basis().block(d1, 0, d2, space.dim());
    Ok(PbModule { module, space, p1, p2 })
}

/// `Pb` on a triple morphism.
pub fn pb_map(src: &PbModule, tgt: &PbModule, m: &TripleMorphism) -> Result<Mat> {
    let f = m.f1.field();
    let diag = Mat::block_diag(f, &[&m.f1, &m.f2]);
    let img = &diag * src.space.basis();
    let cols = (0..img.cols())
        .map(|j| tgt.space.coords(&img.col(j)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::NotAMorphism("map does not preserve the fibre products".into()))?;
    Ok(Mat::from_cols(f, tgt.space.dim(), &cols))
}

/// `eta_M: M -> Pb Ind M`, `m -> (1 ⊗ m, 1 ⊗ m)`.
#[derive(Clone, Debug)]
pub struct Unit {
    pub pb: PbModule,
    pub eta: Mat,
}

pub fn unit(i: &Induction) -> Result<Unit> {
    let f = i.module.field();
    let pbm = pb(&i.triple)?;
    let diag_map = Mat::vstack(f, i.module.dim(), &[&i.leg1.unit_map, &i.leg2.unit_map]);
    let cols = (0..i.module.dim())
        .map(|j| pbm.space.coords(&diag_map.col(j)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidInput("(1 ⊗ m, 1 ⊗ m) is not in Pb Ind M".into()))?;
    let eta = Mat::from_cols(f, pbm.space.dim(), &cols);
    if !i.module.is_morphism(&pbm.module, &eta) {
        return Err(Error::NotAMorphism("unit is not R-linear".into()));
    }
    Ok(Unit { pb: pbm, eta })
}

/// `epsilon_T: Ind Pb T -> T`, `1 ⊗ (x1, x2) -> x_i`.
#[derive(Clone, Debug)]
pub struct Counit {
    pub pb: PbModule,
    pub ind: Induction,
    pub map: TripleMorphism,
}

pub fn counit(t: &Triple) -> Result<Counit> {
    let pbm = pb(t)?;
    let ind = ind(&t.data, &pbm.module)?;
    let map = TripleMorphism {
        f1: extend_scalars(&ind.leg1, &t.x1, &pbm.p1),
        f2: extend_scalars(&ind.leg2, &t.x2, &pbm.p2),
    };
    if !ind.triple.is_morphism_to(t, &map) {
        return Err(Error::NotAMorphism("counit is not a triple morphism".into()));
    }
    Ok(Counit { pb: pbm, ind, map })
}

/// The adjunct `(f1, f2): Ind M -> T` of `f: M -> Pb T`.
pub fn adjunct(i: &Induction, t: &Triple, pbt: &PbModule, f: &Mat) -> TripleMorphism {
    TripleMorphism {
        f1: extend_scalars(&i.leg1, &t.x1, &(&pbt.p1 * f)),
        f2: extend_scalars(&i.leg2, &t.x2, &(&pbt.p2 * f)),
    }
}

/// Basis of the triple morphisms `s -> t`.
pub fn hom_triples(s: &Triple, t: &Triple) -> Result<Vec<TripleMorphism>> {
    let f = s.x1.field();
    let h1 = s.x1.hom(&t.x1)?;
    let h2 = s.x2.hom(&t.x2)?;
    let (rows, cols) = (t.y2.module.dim(), s.y1.module.dim());
    let n = h1.len() + h2.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut eqs: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    for a in &h1 {
        eqs.push((&t.c * &base_change(&s.y1, &t.y1, a)).flatten());
    }
    for b in &h2 {
        eqs.push((-&(&base_change(&s.y2, &t.y2, b) * &s.c)).flatten());
    }
    let sys = Mat::from_cols(f, rows * cols, &eqs);
    let zero1 = Mat::zeros(f, t.x1.dim(), s.x1.dim());
    let zero2 = Mat::zeros(f, t.x2.dim(), s.x2.dim());
    Ok(sys
        .kernel()
        .vectors()
        .iter()
        .map(|v| {
            let mut f1 = zero1.clone();
            let mut f2 = zero2.clone();
            for (a, c) in h1.iter().zip(v) {
                if !c.is_zero() {
                    f1 = &f1 + &a.scale(c);
                }
            }
            for (b, c) in h2.iter().zip(&v[h1.len()..]) {
                if !c.is_zero() {
                    f2 = &f2 + &b.scale(c);
                }
            }
            TripleMorphism { f1, f2 }
        })
        .collect())
}

/// Search for an isomorphism `s -> t`; the matrix of a found one is `diag(f1, f2)`.
pub fn triple_iso(s: &Triple, t: &Triple, seed: u64) -> Result<IsoVerdict> {
    if s.x1.dim() != t.x1.dim() || s.x2.dim() != t.x2.dim() {
        return Ok(IsoVerdict::NotIsomorphic("leg dimensions differ".into()));
    }
    let f = s.x1.field();
    let n = s.x1.dim() + s.x2.dim();
    let h = hom_triples(s, t)?;
    let es = hom_triples(s, s)?.len();
    if h.len() != es || hom_triples(t, t)?.len() != es {
        return Ok(IsoVerdict::NotIsomorphic(format!("Hom dimensions obstruct: Hom = {}, End = {es}", h.len())));
    }
    let mats: Vec<Mat> = h.iter().map(|m| Mat::block_diag(f, &[&m.f1, &m.f2])).collect();
    Ok(match invertible_in_span(f, n, &mats, seed, SearchBudget::default())? {
        SpanSearch::Found { mat, .. } => IsoVerdict::Isomorphic(mat),
        SpanSearch::NoneExhaustive => IsoVerdict::NotIsomorphic("no invertible morphism after exhaustive search".into()),
        SpanSearch::NoneInconclusive => IsoVerdict::Inconclusive,
    })
}

/// Split `diag(f1, f2)` back into a triple morphism.
pub fn split_diag(m: &Mat, d1: usize) -> TripleMorphism {
    let d2 = m.rows() - d1;
    TripleMorphism { f1: m.block(0, 0, d1, d1), f2: m.block(d1, d1, d2, d2) }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::exactlin::Field;

    fn simple(data: &Arc<PullbackData>) -> Module {
        let rad = data.r.radical().unwrap().space;
        let reg = Module::regular(data.r.clone());
        let (top, _) = reg.quotient(&reg.ideal_times(&rad)).unwrap();
        assert_eq!(top.dim(), 1);
        top
    }

    #[test]
    fn induction_of_regular_and_zero() {
        for f in [Field::prime(2).unwrap(), Field::Rationals] {
            let d = e1(f);
            let i = ind(&d, &Module::regular(d.r.clone())).unwrap();
            assert_eq!((i.triple.x1.dim(), i.triple.x2.dim()), (2, 1));
            assert!(i.triple.is_gluing());
            let z = ind(&d, &Module::zero(d.r.clone(), Side::Left)).unwrap();
            assert_eq!((z.triple.x1.dim(), z.triple.x2.dim(), z.triple.c.rows()), (0, 0, 0));
        }
    }

    #[test]
    fn induction_of_simple() {
        let d = e1(Field::prime(2).unwrap());
        let i = ind(&d, &simple(&d)).unwrap();
        assert_eq!((i.triple.x1.dim(), i.triple.x2.dim()), (1, 1));
        assert_eq!(i.triple.c.rows(), 1);
        assert!(i.triple.c.is_invertible());
    }

    #[test]
    fn counterexample_pullback_is_zero() {
        let f = Field::prime(2).unwrap();
        let d = e2(f);
        assert_eq!(d.r.dim(), 1);
        let k1 = Module::regular(d.r1.clone());
        let k2 = Module::regular(d.r2.clone());
        // c(1 ⊗ 1) = (1 + t) ⊗ 1
        let probe = Triple::from_generator_images(d.clone(), k1.clone(), k2.clone(), &[vec![f.one(), f.zero()]]).unwrap();
        let img = probe.y2.tp.elem(&[f.one(), f.one()], &[f.one()]);
        let t = Triple::from_generator_images(d.clone(), k1, k2, &[img]).unwrap();
        assert!(t.is_gluing());
        assert_eq!(pb(&t).unwrap().module.dim(), 0);
        let e = counit(&t).unwrap();
        assert_eq!(e.ind.triple.x1.dim(), 0);
        assert!(!e.map.is_iso());
        // the untwisted triple glues back to k
        assert_eq!(pb(&probe).unwrap().module.dim(), 1);
    }

    #[test]
    fn unit_on_regular_is_iso() {
        for f in [Field::prime(2).unwrap(), Field::Rationals] {
            let d = e1(f);
            let i = ind(&d, &Module::regular(d.r.clone())).unwrap();
            let u = unit(&i).unwrap();
            assert_eq!(u.eta.rank(), 2);
            assert!(u.eta.is_invertible());
            let z = ind(&d, &Module::zero(d.r.clone(), Side::Left)).unwrap();
            assert_eq!(unit(&z).unwrap().eta.cols(), 0);
        }
    }

    #[test]
    fn counit_on_induced_projective_is_iso() {
        let d = e1(Field::prime(2).unwrap());
        let i = ind(&d, &Module::free(d.r.clone(), 2)).unwrap();
        let e = counit(&i.triple).unwrap();
        assert!(e.map.is_iso());
        let z = counit(&Triple::zero(d.clone())).unwrap();
        assert!(z.map.is_iso());
    }

    #[test]
    fn triple_endomorphisms_of_regular() {
        // End(Ind R) has the dimension of R
        for d in [e1(Field::prime(2).unwrap()), e3(Field::Rationals)] {
            let i = ind(&d, &Module::regular(d.r.clone())).unwrap();
            assert_eq!(hom_triples(&i.triple, &i.triple).unwrap().len(), d.r.dim());
        }
    }

    #[test]
    fn twisted_induced_triple_is_isomorphic() {
        let f = Field::Rationals;
        let d = e3(f);
        let i = ind(&d, &Module::free(d.r.clone(), 1)).unwrap();
        let two = Mat::identity(f, i.triple.y2.module.dim()).scale(&f.from_i64(2));
        let t = i.triple.twisted(&two).unwrap();
        let v = triple_iso(&i.triple, &t, 1).unwrap();
        let m = split_diag(v.iso().unwrap(), i.triple.x1.dim());
        assert!(i.triple.is_morphism_to(&t, &m));
        assert!(m.is_iso());
    }

    #[test]
    fn non_linear_c_rejected() {
        let f = Field::prime(2).unwrap();
        let d = e2(f);
        let k1 = Module::regular(d.r1.clone());
        let k2 = Module::regular(d.r2.clone());
        // swapping 1 and t is not R'-linear
        let swap = Mat::from_i64(f, &[vec![0, 1], vec![1, 0]]);
        assert!(matches!(Triple::new(d, k1, k2, swap), Err(Error::NotAMorphism(_))));
    }
}

//! The triangular ring `Γ = [[R2, R'*], [0, R1]]`, the functor `Φ` from
//! triples to `Γ`-modules and its inverse.

mod tilting;

use std::sync::Arc;

use crate::algebra::{triangular, AlgRef, PullbackData, TriangularLayout};
use crate::error::{Error, Result};
use crate::exactlin::{solve_particular, unit_vec, Mat, Scalar, Subspace};
use crate::modrep::{is_projective, same_algebra, right_dual, Bimodule, DualBimodule, Module, Side, TensorProduct};
use crate::triples::{Triple, TripleMorphism};

pub use tilting::{
    build_t, build_t_untwisted, check_phi_ind_tensor, check_short_exact, compare_gamma_prime, end_algebra,
    end_of_regular_pair, regular_pair_bimodule, twisted_regular_pair, verify_sequences, verify_tilting, verify_tilting_of, EndAlgebra, GammaPrimeReport,
    SequenceReport, TiltingModule, TiltingReport,
};

/// `Γ` together with the pieces it was assembled from.
#[derive(Debug)]
pub struct GammaRing {
    pub data: Arc<PullbackData>,
    /// `R'` as an `(R1, R2)`-bimodule through `pi1`, `pi2`.
    pub rp: Bimodule,
    /// `R'* = Hom_{R2}(R', R2)`, an `(R2, R1)`-bimodule.
    pub dual: DualBimodule,
    pub alg: AlgRef,
    pub layout: TriangularLayout,
}

pub fn gamma_ring(data: &Arc<PullbackData>) -> Result<Arc<GammaRing>> {
    let rp = Bimodule::via(&data.pi1, &data.pi2)?;
    let dual = right_dual(&rp)?;
    let names: Vec<String> = (0..dual.bimodule.dim).map(|t| format!("f{t}")).collect();
    let (alg, layout) =
        triangular(&data.r2, &data.r1, dual.bimodule.dim, &names, &dual.bimodule.lact, &dual.bimodule.ract)?;
    Ok(Arc::new(GammaRing { data: data.clone(), rp, dual, alg: Arc::new(alg), layout }))
}

impl GammaRing {
    pub fn dual_dim(&self) -> usize {
        self.dual.bimodule.dim
    }

    /// A splitting of the free cover of `R'` as a right `R2`-module, if it is projective.
    pub fn rp_right_splitting(&self) -> Result<Option<Mat>> {
        let m = Module::unchecked(self.data.r2.opposite_ref(), Side::Left, self.rp.dim, self.rp.ract.clone())?;
        is_projective(&m)
    }

    /// Refuses unless `pi1` is onto and `R'` is finitely generated projective over `R2`.
    pub fn require_hypotheses(&self) -> Result<()> {
        if !self.data.pi1_surjective() {
            return Err(Error::HypothesisRefused("pi1 is not surjective".into()));
        }
        self.require_projective_rp()
    }

    fn require_projective_rp(&self) -> Result<()> {
        if self.rp_right_splitting()?.is_none() {
            return Err(Error::HypothesisRefused("R' is not projective as a right R2-module".into()));
        }
        Ok(())
    }

    /// `f_t(b'_k)` acting on `X2`.
    fn eval_on(&self, x2: &Module, t: usize, k: usize) -> Mat {
        x2.act_elem(&self.dual.funcs[t].col(k))
    }
}

/// A `Γ`-module stored as `(X2, X1; φ: R'* ⊗_{R1} X1 -> X2)`; the assembled
/// module has coordinates `X2` first, then `X1`.
#[derive(Clone, Debug)]
pub struct GammaModule {
    pub ring: Arc<GammaRing>,
    pub x2: Module,
    pub x1: Module,
    pub phi: Mat,
    /// `R'* ⊗_{R1} X1`
    pub tp: TensorProduct,
    pub module: Module,
}

impl GammaModule {
    pub fn new(ring: &Arc<GammaRing>, x2: Module, x1: Module, phi: Mat) -> Result<GammaModule> {
        let data = &ring.data;
        if x2.side() != Side::Left || !same_algebra(x2.alg(), &data.r2) {
            return Err(Error::AlgebraMismatch("X2 must be a left R2-module".into()));
        }
        let (tmod, tp) = ring.dual.bimodule.tensor_left(&x1)?;
        if phi.rows() != x2.dim() || phi.cols() != tp.dim() {
            return Err(Error::DimensionMismatch(format!(
                "structure map is {}x{}, expected {}x{}",
                phi.rows(),
                phi.cols(),
                x2.dim(),
                tp.dim()
            )));
        }
        if !tmod.is_morphism(&x2, &phi) {
            return Err(Error::NotAMorphism("structure map is not R2-linear".into()));
        }
        let module = assemble(ring, &x2, &x1, &phi, &tp)?;
        Ok(GammaModule { ring: ring.clone(), x2, x1, phi, tp, module })
    }

    /// `(X2; X1)` with the zero structure map.
    pub fn split(ring: &Arc<GammaRing>, x2: Module, x1: Module) -> Result<GammaModule> {
        let (_, tp) = ring.dual.bimodule.tensor_left(&x1)?;
        let phi = Mat::zeros(ring.alg.field(), x2.dim(), tp.dim());
        GammaModule::new(ring, x2, x1, phi)
    }

    pub fn zero(ring: &Arc<GammaRing>) -> GammaModule {
        let x2 = Module::zero(ring.data.r2.clone(), Side::Left);
        let x1 = Module::zero(ring.data.r1.clone(), Side::Left);
        GammaModule::split(ring, x2, x1).expect("zero module is well formed")
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// `φ(f_t ⊗ -)` as a map `X1 -> X2`.
    pub fn phi_at(&self, t: usize) -> Mat {
        let f = self.module.field();
        let (d2, d1) = (self.x2.dim(), self.x1.dim());
        let nf = self.ring.dual_dim();
        let cols: Vec<Vec<Scalar>> =
            (0..d1).map(|j| self.phi.mul_vec(&self.tp.elem(&unit_vec(f, nf, t), &unit_vec(f, d1, j)))).collect();
        Mat::from_cols(f, d2, &cols)
    }

    /// Decompose a `Γ`-module by the block idempotents. The matrix sends
    /// coordinates of `m` to the `(X2, X1)` coordinates of the result.
    pub fn from_module(ring: &Arc<GammaRing>, m: &Module) -> Result<(GammaModule, Mat)> {
        if m.side() != Side::Left || !same_algebra(m.alg(), &ring.alg) {
            return Err(Error::AlgebraMismatch("expected a left Γ-module".into()));
        }
        let f = m.field();
        let lay = &ring.layout;
        let e2 = m.act_elem(&lay.top_idempotent(&ring.data.r2));
        let e1 = m.act_elem(&lay.bottom_idempotent(&ring.data.r1));
        let s2 = Subspace::span_of_cols(&e2);
        let s1 = Subspace::span_of_cols(&e1);
        let restrict = |s: &Subspace, range: std::ops::Range<usize>| -> Vec<Mat> {
            range.map(|i| &(&s.coord_matrix() * m.act(i)) * s.basis()).collect()
        };
        let x2 = Module::new(ring.data.r2.clone(), Side::Left, s2.dim(), restrict(&s2, lay.b.clone()))?;
        let x1 = Module::new(ring.data.r1.clone(), Side::Left, s1.dim(), restrict(&s1, lay.a.clone()))?;
        let (_, tp) = ring.dual.bimodule.tensor_left(&x1)?;
        let nf = ring.dual_dim();
        let mut plain = Mat::zeros(f, x2.dim(), nf * x1.dim());
        for t in 0..nf {
            let blk = &(&s2.coord_matrix() * m.act(lay.m.start + t)) * s1.basis();
            plain.set_block(0, t * x1.dim(), &blk);
        }
        if !(&plain * tp.relations.basis()).is_zero() {
            return Err(Error::InvalidModule("functional action is not balanced over R1".into()));
        }
        let phi = &plain * &tp.lift;
        let g = GammaModule::new(ring, x2, x1, phi)?;
        let change = Mat::vstack(f, m.dim(), &[&(&s2.coord_matrix() * &e2), &(&s1.coord_matrix() * &e1)]);
        if !m.is_morphism(&g.module, &change) || !change.is_invertible() {
            return Err(Error::InvalidModule("block decomposition does not recover the module".into()));
        }
        Ok((g, change))
    }

    /// A `Γ`-map given by its two blocks `g2: X2 -> Y2`, `g1: X1 -> Y1`.
    pub fn block_map(g2: &Mat, g1: &Mat) -> Mat {
        Mat::block_diag(g2.field(), &[g2, g1])
    }
}

fn assemble(ring: &GammaRing, x2: &Module, x1: &Module, phi: &Mat, tp: &TensorProduct) -> Result<Module> {
    let f = ring.alg.field();
    let (d2, d1) = (x2.dim(), x1.dim());
    let n = d2 + d1;
    let lay = &ring.layout;
    let nf = ring.dual_dim();
    let mut act = Vec::with_capacity(lay.dim());
    for k in lay.b.clone() {
        let mut a = Mat::zeros(f, n, n);
        a.set_block(0, 0, x2.act(k));
        act.push(a);
    }
    for t in 0..nf {
        let cols: Vec<Vec<Scalar>> =
            (0..d1).map(|j| phi.mul_vec(&tp.elem(&unit_vec(f, nf, t), &unit_vec(f, d1, j)))).collect();
        let mut a = Mat::zeros(f, n, n);
        a.set_block(0, d2, &Mat::from_cols(f, d2, &cols));
        act.push(a);
    }
    for k in 0..lay.a.len() {
        let mut a = Mat::zeros(f, n, n);
        a.set_block(d2, d2, x1.act(k));
        act.push(a);
    }
    Module::new(ring.alg.clone(), Side::Left, n, act)
}

/// `Φ(X1, X2; c) = (X2, X1; φ)` with `φ(f ⊗ x1) = Σ f(a'_i) y_i` where
/// `c(1 ⊗ x1) = Σ a'_i ⊗ y_i`.
pub fn phi(ring: &Arc<GammaRing>, t: &Triple) -> Result<GammaModule> {
    let f = t.x1.field();
    let (d2, d1) = (t.x2.dim(), t.x1.dim());
    let (_, tp) = ring.dual.bimodule.tensor_left(&t.x1)?;
    let nf = ring.dual_dim();
    let dp = ring.rp.dim;
    let mut plain = Mat::zeros(f, d2, nf * d1);
    for j in 0..d1 {
        let y = t.c.mul_vec(&t.y1.unit_map.col(j));
        let v = t.y2.tp.lift.mul_vec(&y);
        for tt in 0..nf {
            let mut out = vec![f.zero(); d2];
            for k in 0..dp {
                let ev = ring.eval_on(&t.x2, tt, k);
                for l in 0..d2 {
                    let c = &v[k * d2 + l];
                    if !c.is_zero() {
                        crate::exactlin::axpy(&mut out, c, &ev.col(l));
                    }
                }
            }
            for (r, x) in out.into_iter().enumerate() {
                plain[(r, tt * d1 + j)] = x;
            }
        }
    }
    if !(&plain * tp.relations.basis()).is_zero() {
        return Err(Error::NotAMorphism("structure map does not descend to the tensor product".into()));
    }
    GammaModule::new(ring, t.x2.clone(), t.x1.clone(), &plain * &tp.lift)
}

/// `Φ` on a triple morphism.
pub fn phi_map(m: &TripleMorphism) -> Mat {
    GammaModule::block_map(&m.f2, &m.f1)
}

/// `θ: R' ⊗_{R2} X2 -> Hom_k(R'*, X2)`, `a' ⊗ x -> (f -> f(a') x)`, with
/// values flattened functional by functional.
fn theta(ring: &GammaRing, t: &Triple) -> Mat {
    let f = t.x2.field();
    let d2 = t.x2.dim();
    let nf = ring.dual_dim();
    let dp = ring.rp.dim;
    let mut plain = Mat::zeros(f, nf * d2, dp * d2);
    for k in 0..dp {
        for tt in 0..nf {
            let ev = ring.eval_on(&t.x2, tt, k);
            plain.set_block(tt * d2, k * d2, &ev);
        }
    }
    &plain * &t.y2.tp.lift
}

/// Recovers the triple of a `Γ`-module through
/// `Hom_{R'}(R' ⊗ X1, R' ⊗ X2) = Hom_{R1}(X1, R' ⊗ X2) = Hom_{R1}(X1, Hom_{R2}(R'*, X2))`.
pub fn phi_inverse(g: &GammaModule) -> Result<Triple> {
    let ring = &g.ring;
    ring.require_projective_rp()?;
    let data = ring.data.clone();
    let f = g.x1.field();
    let y1 = crate::modrep::induce(&data.pi1, &g.x1)?;
    let y2 = crate::modrep::induce(&data.pi2, &g.x2)?;
    let zero = Mat::zeros(f, y2.module.dim(), y1.module.dim());
    let scaffold = Triple::new(data.clone(), g.x1.clone(), g.x2.clone(), zero)?;
    if g.x1.dim() == 0 {
        return Ok(scaffold);
    }
    let th = theta(ring, &scaffold);
    if th.rank() != th.cols() {
        return Err(Error::HypothesisRefused("R' ⊗ X2 -> Hom(R'*, X2) is not injective".into()));
    }
    let nf = ring.dual_dim();
    let images = (0..g.x1.dim())
        .map(|j| {
            let mut target = Vec::with_capacity(nf * g.x2.dim());
            for t in 0..nf {
                target.extend(g.phi_at(t).col(j));
            }
            solve_particular(&th, &target)
                .ok_or_else(|| Error::HypothesisRefused("structure map is not of the form f(a') y".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Triple::from_generator_images(data, g.x1.clone(), g.x2.clone(), &images)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::exactlin::Field;
    use crate::triples::fixtures::{e1, e3};
    use crate::triples::{hom_triples, ind, sample_gluing_triples};

    fn fields() -> Vec<Field> {
        vec![Field::prime(2).unwrap(), Field::Rationals, Field::prime(101).unwrap()]
    }

    #[test]
    fn gamma_of_e1_has_dim_four() {
        for f in fields() {
            let ring = gamma_ring(&e1(f)).unwrap();
            assert_eq!(ring.dual_dim(), 1);
            assert_eq!(ring.alg.dim(), 4);
            assert!(ring.rp_right_splitting().unwrap().is_some());
            ring.require_hypotheses().unwrap();
        }
    }

    #[test]
    fn phi_of_regular_induction_is_psi() {
        for f in fields() {
            let data = e1(f);
            let ring = gamma_ring(&data).unwrap();
            let g = phi(&ring, &ind(&data, &Module::regular(data.r.clone())).unwrap().triple).unwrap();
            assert_eq!((g.x2.dim(), g.x1.dim()), (1, 2));
            // f ⊗ 1 -> f(1) = 1, f ⊗ x -> f(π1(x)) = 0, after the identifications
            let m0 = g.phi_at(0);
            assert_eq!(m0.rank(), 1);
            assert!(g.module.validate().ok());
        }
    }

    #[test]
    fn phi_of_zero_is_zero() {
        let data = e1(Field::Rationals);
        let ring = gamma_ring(&data).unwrap();
        let g = phi(&ring, &Triple::zero(data.clone())).unwrap();
        assert_eq!(g.dim(), 0);
        let back = phi_inverse(&g).unwrap();
        assert_eq!(back.x1.dim() + back.x2.dim(), 0);
    }

    #[test]
    fn simple_gluing_triple_gives_two_dim_module() {
        let f = Field::prime(2).unwrap();
        let data = e1(f);
        let ring = gamma_ring(&data).unwrap();
        // X1 = k (x acts by 0), X2 = k, c = 1
        let x1 = Module::new(data.r1.clone(), Side::Left, 1, vec![Mat::identity(f, 1), Mat::zeros(f, 1, 1)]).unwrap();
        let x2 = Module::regular(data.r2.clone());
        let t = Triple::from_generator_images(data.clone(), x1, x2, &[vec![f.one()]]).unwrap();
        let g = phi(&ring, &t).unwrap();
        assert_eq!(g.dim(), 2);
        let lay = &ring.layout;
        // the functional moves the bottom basis vector onto the top one
        assert_eq!(g.module.act(lay.m.start), &Mat::from_i64(f, &[vec![0, 1], vec![0, 0]]));
        assert_eq!(g.module.act(lay.a.start), &Mat::from_i64(f, &[vec![0, 0], vec![0, 1]]));
        assert_eq!(g.module.act(lay.a.start + 1), &Mat::zeros(f, 2, 2));
    }

    #[test]
    fn round_trips_on_samples() {
        for (f, data) in [(Field::prime(2).unwrap(), e1(Field::prime(2).unwrap())), (Field::Rationals, e3(Field::Rationals))]
        {
            let ring = gamma_ring(&data).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for t in sample_gluing_triples(&data, &mut rng, 4, 4).unwrap() {
                let g = phi(&ring, &t).unwrap();
                let back = phi_inverse(&g).unwrap();
                assert_eq!(back.c, t.c, "triple round trip over {f:?}");
                let again = phi(&ring, &back).unwrap();
                let id = Mat::identity(f, g.dim());
                assert!(g.module.is_morphism(&again.module, &id));
                let (h, change) = GammaModule::from_module(&ring, &g.module).unwrap();
                assert!(g.module.is_morphism(&h.module, &change));
            }
        }
    }

    #[test]
    fn phi_is_functorial_and_faithful() {
        let f = Field::Rationals;
        let data = e1(f);
        let ring = gamma_ring(&data).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let ts = sample_gluing_triples(&data, &mut rng, 3, 3).unwrap();
        for s in &ts {
            for t in &ts {
                let (gs, gt) = (phi(&ring, s).unwrap(), phi(&ring, t).unwrap());
                for m in hom_triples(s, t).unwrap() {
                    let pm = phi_map(&m);
                    assert!(gs.module.is_morphism(&gt.module, &pm));
                    assert_eq!(pm.is_zero(), m.f1.is_zero() && m.f2.is_zero());
                }
            }
            let id = TripleMorphism { f1: Mat::identity(f, s.x1.dim()), f2: Mat::identity(f, s.x2.dim()) };
            assert!(phi_map(&id).is_identity());
        }
    }
}

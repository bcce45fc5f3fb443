use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use super::{phi, phi_map, GammaModule, GammaRing};
use crate::algebra::{gamma_prime, Algebra};
use crate::diag::Diagnostics;
use crate::error::{Error, Result};
use crate::exactlin::{unit_vec, Mat, Scalar, Subspace};
use crate::modrep::{ext1, free_cover, is_projective, pd_at_most, Bimodule, DirectSum, Module, Side};
use crate::triples::{ind, ind_map, sample_modules};

/// `T = T0 ⊕ T1` with `T0 = (R2; R1)` and `T1 = (0; R1)`.
#[derive(Clone, Debug)]
pub struct TiltingModule {
    pub t0: GammaModule,
    pub t1: GammaModule,
    pub sum: DirectSum,
}

impl TiltingModule {
    pub fn module(&self) -> &Module {
        &self.sum.module
    }
}

/// `(R2; R1)` with `f ⊗ a -> f(pi1(a))`, or with the zero structure map.
fn regular_pair(ring: &Arc<GammaRing>, twisted: bool) -> Result<GammaModule> {
    let data = &ring.data;
    let f = data.r.field();
    let x2 = Module::regular(data.r2.clone());
    let x1 = Module::regular(data.r1.clone());
    if !twisted {
        return GammaModule::split(ring, x2, x1);
    }
    let (_, tp) = ring.dual.bimodule.tensor_left(&x1)?;
    let (nf, d1) = (ring.dual_dim(), x1.dim());
    let mut plain = Mat::zeros(f, x2.dim(), nf * d1);
    for t in 0..nf {
        for k in 0..d1 {
            let v = ring.dual.funcs[t].mul_vec(&data.pi1.mat.col(k));
            for (r, x) in v.into_iter().enumerate() {
                plain[(r, t * d1 + k)] = x;
            }
        }
    }
    if !(&plain * tp.relations.basis()).is_zero() {
        return Err(Error::InvalidModule("evaluation at 1 is not balanced".into()));
    }
    GammaModule::new(ring, x2, x1, &plain * &tp.lift)
}

fn bottom(ring: &Arc<GammaRing>) -> Result<GammaModule> {
    GammaModule::split(ring, Module::zero(ring.data.r2.clone(), Side::Left), Module::regular(ring.data.r1.clone()))
}

fn assemble_t(t0: GammaModule, t1: GammaModule) -> Result<TiltingModule> {
    let sum = Module::direct_sum(&[&t0.module, &t1.module])?;
    Ok(TiltingModule { t0, t1, sum })
}

/// `(R2; R1)` with `f ⊗ a -> f(pi1(a))`.
pub fn twisted_regular_pair(ring: &Arc<GammaRing>) -> Result<GammaModule> {
    regular_pair(ring, true)
}

pub fn build_t(ring: &Arc<GammaRing>) -> Result<TiltingModule> {
    assemble_t(regular_pair(ring, true)?, bottom(ring)?)
}

/// `T` with the structure map of `T0` replaced by zero; not tilting in general.
pub fn build_t_untwisted(ring: &Arc<GammaRing>) -> Result<TiltingModule> {
    assemble_t(regular_pair(ring, false)?, bottom(ring)?)
}

/// The modules appearing in the two short exact sequences.
struct Pieces {
    /// `(R'*; 0)`
    dual_top: GammaModule,
    /// `(R'*; R1)`
    dual_col: GammaModule,
    /// `(R2; 0)`
    reg_top: GammaModule,
    t0: GammaModule,
    t1: GammaModule,
}

fn pieces(ring: &Arc<GammaRing>) -> Result<Pieces> {
    let data = &ring.data;
    let f = data.r.field();
    let dual_mod = ring.dual.bimodule.as_left()?;
    let zero1 = Module::zero(data.r1.clone(), Side::Left);
    let dual_top = GammaModule::split(ring, dual_mod.clone(), zero1.clone())?;
    let x1 = Module::regular(data.r1.clone());
    let (_, tp) = ring.dual.bimodule.tensor_left(&x1)?;
    let (nf, d1) = (ring.dual_dim(), x1.dim());
    let mut plain = Mat::zeros(f, nf, nf * d1);
    for t in 0..nf {
        for k in 0..d1 {
            let v = ring.dual.bimodule.ract[k].col(t);
            for (r, x) in v.into_iter().enumerate() {
                plain[(r, t * d1 + k)] = x;
            }
        }
    }
    let dual_col = GammaModule::new(ring, dual_mod, x1, &plain * &tp.lift)?;
    let reg_top = GammaModule::split(ring, Module::regular(data.r2.clone()), zero1)?;
    Ok(Pieces { dual_top, dual_col, reg_top, t0: regular_pair(ring, true)?, t1: bottom(ring)? })
}

/// `(X2; 0) -> (X2; X1)` and `(X2; X1) -> (0; X1)`.
fn top_inclusion(a: &GammaModule, b: &GammaModule) -> Mat {
    let f = a.module.field();
    let mut m = Mat::zeros(f, b.dim(), a.dim());
    m.set_block(0, 0, &Mat::identity(f, a.x2.dim()));
    m
}

fn bottom_projection(b: &GammaModule, c: &GammaModule) -> Mat {
    let f = b.module.field();
    let mut m = Mat::zeros(f, c.dim(), b.dim());
    m.set_block(0, b.x2.dim(), &Mat::identity(f, c.x1.dim()));
    m
}

/// `0 -> A -f-> B -g-> C -> 0` is an exact sequence of modules.
pub fn check_short_exact(d: &mut Diagnostics, name: &str, a: &Module, b: &Module, c: &Module, f: &Mat, g: &Mat) {
    d.check(a.is_morphism(b, f), || format!("{name}: first map is not a module map"));
    d.check(b.is_morphism(c, g), || format!("{name}: second map is not a module map"));
    if !d.ok() {
        return;
    }
    d.check((g * f).is_zero(), || format!("{name}: composite is not zero"));
    d.check(f.rank() == a.dim(), || format!("{name}: not injective on the left"));
    d.check(g.rank() == c.dim(), || format!("{name}: not surjective on the right"));
    d.check(f.rank() + g.rank() == b.dim(), || format!("{name}: not exact in the middle"));
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceReport {
    /// Dimensions of `(R'*; 0), (R'*; R1), (0; R1)`.
    pub dual_dims: [usize; 3],
    /// Dimensions of `(R2; 0), (R2; R1), (0; R1)`.
    pub regular_dims: [usize; 3],
    pub diag: Diagnostics,
}

impl SequenceReport {
    pub fn ok(&self) -> bool {
        self.diag.ok()
    }
}

pub fn verify_sequences(ring: &Arc<GammaRing>) -> Result<SequenceReport> {
    ring.require_hypotheses()?;
    let p = pieces(ring)?;
    let mut d = Diagnostics::new();
    let (f, g) = (top_inclusion(&p.dual_top, &p.dual_col), bottom_projection(&p.dual_col, &p.t1));
    check_short_exact(&mut d, "dual sequence", &p.dual_top.module, &p.dual_col.module, &p.t1.module, &f, &g);
    let (f, g) = (top_inclusion(&p.reg_top, &p.t0), bottom_projection(&p.t0, &p.t1));
    check_short_exact(&mut d, "regular sequence", &p.reg_top.module, &p.t0.module, &p.t1.module, &f, &g);
    d.check(is_projective(&p.dual_top.module)?.is_some(), || "(R'*; 0) is not projective".into());
    d.check(is_projective(&p.dual_col.module)?.is_some(), || "(R'*; R1) is not projective".into());
    Ok(SequenceReport {
        dual_dims: [p.dual_top.dim(), p.dual_col.dim(), p.t1.dim()],
        regular_dims: [p.reg_top.dim(), p.t0.dim(), p.t1.dim()],
        diag: d,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TiltingReport {
    pub dim: usize,
    pub pd_at_most_one: bool,
    pub syzygy_dims: Vec<usize>,
    pub ext1_dim: usize,
    /// Every witness that the regular module lies in the closure of `T` checked out.
    pub generates: bool,
    pub diag: Diagnostics,
}

impl TiltingReport {
    pub fn ok(&self) -> bool {
        self.pd_at_most_one && self.ext1_dim == 0 && self.generates && self.diag.ok()
    }
}

/// Checks `pd T <= 1`, `Ext^1(T, T) = 0` and the explicit witnesses that `Γ`
/// is built from `add T` by kernels of epimorphisms, extensions and summands.
pub fn verify_tilting(ring: &Arc<GammaRing>) -> Result<TiltingReport> {
    let t = build_t(ring)?;
    verify_tilting_of(ring, &t)
}

pub fn verify_tilting_of(ring: &Arc<GammaRing>, t: &TiltingModule) -> Result<TiltingReport> {
    ring.require_hypotheses()?;
    let m = t.module();
    let mut d = Diagnostics::new();
    let pd = pd_at_most(m, 1)?;
    d.check(pd.holds, || "projective dimension exceeds one".into());
    let e = ext1(m, m)?;
    d.check(e.dim == 0, || format!("Ext^1(T, T) has dimension {}", e.dim));
    let mut w = Diagnostics::new();
    generation_witnesses(ring, t, &mut w)?;
    let generates = w.ok();
    d.absorb("generation", w);
    Ok(TiltingReport {
        dim: m.dim(),
        pd_at_most_one: pd.holds,
        syzygy_dims: pd.syzygy_dims,
        ext1_dim: e.dim,
        generates,
        diag: d,
    })
}

fn generation_witnesses(ring: &Arc<GammaRing>, t: &TiltingModule, d: &mut Diagnostics) -> Result<()> {
    let f = ring.alg.field();
    let m = t.module();
    // both parts are summands of T
    for (k, part) in [&t.t0, &t.t1].into_iter().enumerate() {
        let (inj, proj) = (&t.sum.inj[k], &t.sum.proj[k]);
        d.check(part.module.is_morphism(m, inj) && m.is_morphism(&part.module, proj), || {
            format!("summand {k} maps are not module maps")
        });
        d.check((proj * inj).is_identity(), || format!("summand {k} does not split off"));
    }
    let p = pieces(ring)?;
    // (R2; 0) is the kernel of the epimorphism T0 -> T1
    let (inc, pr) = (top_inclusion(&p.reg_top, &p.t0), bottom_projection(&p.t0, &p.t1));
    check_short_exact(d, "kernel witness", &p.reg_top.module, &p.t0.module, &p.t1.module, &inc, &pr);
    // (R'*; 0) is a summand of (R2; 0)^n
    let dual_mod = &p.dual_top.x2;
    let cover = free_cover(dual_mod)?;
    match is_projective(dual_mod)? {
        None => d.fail("R'* is not projective over R2"),
        Some(s) => {
            let free = GammaModule::split(ring, cover.free.clone(), Module::zero(ring.data.r1.clone(), Side::Left))?;
            let empty = Mat::zeros(f, 0, 0);
            let (sg, rg) = (GammaModule::block_map(&s, &empty), GammaModule::block_map(&cover.map, &empty));
            d.check(p.dual_top.module.is_morphism(&free.module, &sg), || "splitting is not a module map".into());
            d.check(free.module.is_morphism(&p.dual_top.module, &rg), || "retraction is not a module map".into());
            d.check((&rg * &sg).is_identity(), || "(R'*; 0) does not split off (R2; 0)^n".into());
        }
    }
    // (R'*; R1) is an extension of T1 by (R'*; 0)
    let (inc, pr) = (top_inclusion(&p.dual_top, &p.dual_col), bottom_projection(&p.dual_col, &p.t1));
    check_short_exact(d, "extension witness", &p.dual_top.module, &p.dual_col.module, &p.t1.module, &inc, &pr);
    // Γ = (R2; 0) ⊕ (R'*; R1) in the block coordinates
    let sum = Module::direct_sum(&[&p.reg_top.module, &p.dual_col.module])?;
    let reg = Module::regular(ring.alg.clone());
    let id = Mat::identity(f, reg.dim());
    d.check(sum.module.dim() == reg.dim() && sum.module.is_morphism(&reg, &id), || {
        "regular module is not (R2; 0) ⊕ (R'*; R1)".into()
    });
    Ok(())
}

/// `End(M)^op` with its basis of endomorphisms; `x * y` is `y ∘ x`.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub alg: Algebra,
    pub basis: Vec<Mat>,
}

pub fn end_algebra(m: &Module) -> Result<EndAlgebra> {
    let f = m.field();
    let n = m.dim();
    let basis = m.hom(m)?;
    let flat: Vec<Vec<Scalar>> = basis.iter().map(|h| h.flatten()).collect();
    let space = Subspace::span_of_vectors(f, n * n, &flat);
    if space.dim() != basis.len() {
        return Err(Error::InvalidInput("endomorphism basis is not independent".into()));
    }
    // express in the given basis, not the reduced one
    let to_basis = Mat::from_cols(f, space.dim(), &flat.iter().map(|v| space.coords_unchecked(v)).collect::<Vec<_>>())
        .inverse()
        .ok_or_else(|| Error::InvalidInput("endomorphism basis is degenerate".into()))?;
    let coords = |h: &Mat| -> Result<Vec<Scalar>> {
        let c = space.coords(&h.flatten()).ok_or_else(|| Error::NotAMorphism("composite left End(M)".into()))?;
        Ok(to_basis.mul_vec(&c))
    };
    let unit = if n == 0 { Vec::new() } else { coords(&Mat::identity(f, n))? };
    let mut table = vec![vec![Vec::new(); basis.len()]; basis.len()];
    for (i, hi) in basis.iter().enumerate() {
        for (j, hj) in basis.iter().enumerate() {
            table[i][j] = coords(&(hj * hi))?;
        }
    }
    let names = (0..basis.len()).map(|i| format!("h{i}")).collect();
    let alg = Algebra::from_products(f, names, unit, |i, j| table[i][j].clone());
    let diag = alg.validate();
    if let Some(fail) = diag.first_failure() {
        return Err(Error::InvalidAlgebra(format!("endomorphism ring: {fail}")));
    }
    Ok(EndAlgebra { alg, basis })
}

/// `r -> (x2, x1) -> (x2 i2(r), x1 i1(r))` on `(R2; R1)`.
fn right_action(ring: &GammaRing, r: &[Scalar]) -> Mat {
    let data = &ring.data;
    GammaModule::block_map(
        &data.r2.right_mult_matrix(&data.i2.apply(r)),
        &data.r1.right_mult_matrix(&data.i1.apply(r)),
    )
}

/// Checks that right multiplication identifies `R` with `End_Γ((R2; R1))^op`.
pub fn end_of_regular_pair(ring: &Arc<GammaRing>) -> Result<Diagnostics> {
    let data = &ring.data;
    let r = &data.r;
    let f = r.field();
    let t0 = regular_pair(ring, true)?;
    let ends = t0.module.hom(&t0.module)?;
    let mut d = Diagnostics::new();
    let images: Vec<Mat> = (0..r.dim()).map(|i| right_action(ring, &r.basis_vec(i))).collect();
    for (i, m) in images.iter().enumerate() {
        d.check(t0.module.is_morphism(&t0.module, m), || format!("right action of {} is not Γ-linear", r.names()[i]));
    }
    let flat: Vec<Vec<Scalar>> = images.iter().map(|m| m.flatten()).collect();
    let rank = Subspace::span_of_vectors(f, t0.dim() * t0.dim(), &flat).dim();
    d.check(rank == r.dim(), || format!("right action has rank {rank} on R of dim {}", r.dim()));
    d.check(ends.len() == r.dim(), || format!("End has dim {}, R has dim {}", ends.len(), r.dim()));
    d.check(right_action(ring, r.unit()).is_identity(), || "unit does not act as the identity".into());
    for i in 0..r.dim() {
        for j in 0..r.dim() {
            let lhs = right_action(ring, &r.sc(i, j));
            d.check(lhs == &images[j] * &images[i], || format!("right action not multiplicative on ({i},{j})"));
        }
    }
    Ok(d)
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaPrimeReport {
    pub end_dim: usize,
    pub gamma_prime_dim: usize,
    /// `dim R + 2 dim R1 + dim ker pi1`
    pub block_formula: usize,
    /// The blockwise map is an algebra isomorphism onto `End_Γ(T)^op`.
    pub iso: bool,
    pub diag: Diagnostics,
}

impl GammaPrimeReport {
    pub fn ok(&self) -> bool {
        self.iso && self.diag.ok()
    }
}

/// Compares `End_Γ(T)^op` with `[[R, R1], [I1, R1]]` through the blockwise map
/// `[[r, a], [i, b]] -> [[ρ(r), x -> x i], [x -> x a, x -> x b]]`.
pub fn compare_gamma_prime(ring: &Arc<GammaRing>) -> Result<GammaPrimeReport> {
    let data = &ring.data;
    let f = data.r.field();
    let (gp, lay) = gamma_prime(data)?;
    let t = build_t(ring)?;
    let end = end_algebra(t.module())?;
    let (d2, d1) = (data.r2.dim(), data.r1.dim());
    let block_formula = data.r.dim() + 2 * d1 + lay.kernel.dim();
    let mut d = Diagnostics::new();
    d.check(end.alg.dim() == gp.dim(), || format!("End(T) has dim {}, expected {}", end.alg.dim(), gp.dim()));
    d.check(gp.dim() == block_formula, || "block formula disagrees with the matrix ring".into());
    let n = t.module().dim();
    let theta = |x: &[Scalar]| -> Mat {
        let r = &x[lay.r.clone()];
        let a = &x[lay.upper.clone()];
        let i = lay.kernel.basis().mul_vec(&x[lay.lower.clone()]);
        let b = &x[lay.corner.clone()];
        let mut m = Mat::zeros(f, n, n);
        m.set_block(0, 0, &right_action(ring, r));
        m.set_block(d2 + d1, d2, &data.r1.right_mult_matrix(a));
        m.set_block(d2, d2 + d1, &data.r1.right_mult_matrix(&i));
        m.set_block(d2 + d1, d2 + d1, &data.r1.right_mult_matrix(b));
        m
    };
    let images: Vec<Mat> = (0..gp.dim()).map(|k| theta(&unit_vec(f, gp.dim(), k))).collect();
    for (k, m) in images.iter().enumerate() {
        d.check(t.module().is_morphism(t.module(), m), || format!("image of {} is not Γ-linear", gp.names()[k]));
    }
    let flat: Vec<Vec<Scalar>> = images.iter().map(|m| m.flatten()).collect();
    let rank = Subspace::span_of_vectors(f, n * n, &flat).dim();
    d.check(rank == gp.dim() && rank == end.alg.dim(), || format!("blockwise map has rank {rank}"));
    d.check(theta(gp.unit()).is_identity(), || "unit does not go to the identity".into());
    for k in 0..gp.dim() {
        for l in 0..gp.dim() {
            d.check(theta(&gp.sc(k, l)) == &images[l] * &images[k], || {
                format!("blockwise map not multiplicative on ({}, {})", gp.names()[k], gp.names()[l])
            });
        }
    }
    d.note("isomorphism is the blockwise natural map");
    Ok(GammaPrimeReport {
        end_dim: end.alg.dim(),
        gamma_prime_dim: gp.dim(),
        block_formula,
        iso: d.ok(),
        diag: d,
    })
}

/// `(R2; R1)` as a `(Γ, R)`-bimodule.
pub fn regular_pair_bimodule(ring: &Arc<GammaRing>, t0: &GammaModule) -> Result<Bimodule> {
    let r = &ring.data.r;
    let ract = (0..r.dim()).map(|j| right_action(ring, &r.basis_vec(j))).collect();
    Bimodule::new(ring.alg.clone(), r.clone(), t0.dim(), t0.module.acts().to_vec(), ract)
}

/// Checks that `(x2, x1) ⊗ m -> (x2 ⊗ m, x1 ⊗ m)` is an isomorphism
/// `(R2; R1) ⊗_R M -> Φ(Ind M)`, natural in `M`, on `R`, `0` and sampled modules.
pub fn check_phi_ind_tensor(
    ring: &Arc<GammaRing>,
    rng: &mut impl Rng,
    samples: usize,
    max_dim: usize,
) -> Result<Diagnostics> {
    let data = &ring.data;
    let f = data.r.field();
    let t0 = regular_pair(ring, true)?;
    let bim = regular_pair_bimodule(ring, &t0)?;
    let mut mods = vec![Module::regular(data.r.clone()), Module::zero(data.r.clone(), Side::Left)];
    mods.extend(sample_modules(&data.r, rng, samples, max_dim)?);
    let d2 = data.r2.dim();
    let mut d = Diagnostics::new();
    let mut built = Vec::new();
    for (idx, m) in mods.iter().enumerate() {
        let i = ind(data, m)?;
        let g = phi(ring, &i.triple)?;
        let (tm, tp) = bim.tensor_left(m)?;
        let dm = m.dim();
        let mut plain = Mat::zeros(f, g.dim(), t0.dim() * dm);
        for s in 0..t0.dim() {
            for j in 0..dm {
                let e = unit_vec(f, dm, j);
                let v = if s < d2 {
                    let mut v = i.leg2.tp.elem(&unit_vec(f, d2, s), &e);
                    v.extend(vec![f.zero(); g.x1.dim()]);
                    v
                } else {
                    let mut v = vec![f.zero(); g.x2.dim()];
                    v.extend(i.leg1.tp.elem(&unit_vec(f, t0.dim() - d2, s - d2), &e));
                    v
                };
                for (row, x) in v.into_iter().enumerate() {
                    plain[(row, s * dm + j)] = x;
                }
            }
        }
        let can = &plain * &tp.lift;
        d.check(tm.is_morphism(&g.module, &can), || format!("module {idx}: canonical map is not Γ-linear"));
        d.check(can.is_square() && can.is_invertible(), || format!("module {idx}: canonical map is not invertible"));
        built.push((i, g, tp, can));
    }
    // naturality along maps between consecutive samples
    for w in 0..built.len().saturating_sub(1) {
        let (src, tgt) = (&mods[w], &mods[w + 1]);
        for g in src.hom(tgt)?.into_iter().take(3) {
            let (si, _, stp, scan) = &built[w];
            let (ti, _, ttp, tcan) = &built[w + 1];
            let left = crate::modrep::TensorProduct::map_between(stp, ttp, &Mat::identity(f, t0.dim()), &g);
            let right = phi_map(&ind_map(si, ti, &g));
            d.check(tcan * &left == &right * scan, || format!("naturality fails between samples {w} and {}", w + 1));
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::super::gamma_ring;
    use super::*;
    use crate::exactlin::Field;
    use crate::triples::fixtures::{e1, e3};

    fn fields() -> Vec<Field> {
        vec![Field::prime(2).unwrap(), Field::Rationals, Field::prime(101).unwrap()]
    }

    #[test]
    fn t_has_expected_shape() {
        for f in fields() {
            let ring = gamma_ring(&e1(f)).unwrap();
            let t = build_t(&ring).unwrap();
            assert_eq!(t.module().dim(), 5);
            assert!(t.t1.phi.is_zero());
            assert!(t.module().validate().ok());
        }
    }

    #[test]
    fn sequences_are_exact() {
        for f in fields() {
            let ring = gamma_ring(&e1(f)).unwrap();
            let rep = verify_sequences(&ring).unwrap();
            assert!(rep.ok(), "{:?}", rep.diag);
            assert_eq!(rep.dual_dims, [1, 3, 2]);
            assert_eq!(rep.regular_dims, [1, 3, 2]);
        }
        let ring = gamma_ring(&e3(Field::Rationals)).unwrap();
        assert!(verify_sequences(&ring).unwrap().ok());
    }

    #[test]
    fn t_is_tilting() {
        for data in [e1(Field::prime(2).unwrap()), e1(Field::Rationals), e3(Field::Rationals)] {
            let ring = gamma_ring(&data).unwrap();
            let rep = verify_tilting(&ring).unwrap();
            assert!(rep.ok(), "{:?}", rep);
        }
    }

    #[test]
    fn untwisted_t_has_self_extensions() {
        for f in fields() {
            let ring = gamma_ring(&e1(f)).unwrap();
            let t = build_t_untwisted(&ring).unwrap();
            let rep = verify_tilting_of(&ring, &t).unwrap();
            assert!(rep.ext1_dim > 0);
            assert!(!rep.ok());
        }
    }

    #[test]
    fn end_of_zero_is_zero() {
        let ring = gamma_ring(&e1(Field::Rationals)).unwrap();
        let z = GammaModule::zero(&ring);
        assert_eq!(end_algebra(&z.module).unwrap().alg.dim(), 0);
    }

    #[test]
    fn end_of_t_matches_block_ring() {
        for f in fields() {
            let ring = gamma_ring(&e1(f)).unwrap();
            let t = build_t(&ring).unwrap();
            assert_eq!(end_algebra(t.module()).unwrap().alg.dim(), 7);
            let rep = compare_gamma_prime(&ring).unwrap();
            assert!(rep.ok(), "{:?}", rep.diag);
            assert_eq!((rep.end_dim, rep.gamma_prime_dim, rep.block_formula), (7, 7, 7));
            assert!(end_of_regular_pair(&ring).unwrap().ok());
        }
        let ring = gamma_ring(&e3(Field::Rationals)).unwrap();
        let rep = compare_gamma_prime(&ring).unwrap();
        assert!(rep.ok(), "{:?}", rep.diag);
        // R = k × k, R1 = k × k, I1 = k
        assert_eq!(rep.block_formula, 2 + 4 + 1);
    }

    #[test]
    fn induction_then_phi_is_tensoring() {
        for f in [Field::prime(2).unwrap(), Field::Rationals] {
            let ring = gamma_ring(&e1(f)).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            let d = check_phi_ind_tensor(&ring, &mut rng, 4, 4).unwrap();
            assert!(d.ok(), "{d:?}");
        }
    }
}

use std::sync::Arc;

use serde::Serialize;

use super::{Module, Side};
use crate::algebra::AlgRef;
use crate::error::{Error, Result};
use crate::exactlin::{solve_particular, unit_vec, Mat, Scalar, Subspace};

/// `A^g -> M` sending the `j`-th free generator to the `j`-th greedy generator of `M`.
#[derive(Clone, Debug)]
pub struct FreeCover {
    pub free: Module,
    pub map: Mat,
}

pub fn free_cover(m: &Module) -> Result<FreeCover> {
    if m.side() != Side::Left {
        return Err(Error::InvalidModule("free covers are built for left modules".into()));
    }
    let pres = m.presentation();
    Ok(FreeCover { free: Module::free(m.alg().clone(), pres.gens.len()), map: pres.cover.clone() })
}

/// A module section of the free cover, if `m` is projective.
pub fn is_projective(m: &Module) -> Result<Option<Mat>> {
    let f = m.field();
    if m.dim() == 0 {
        return Ok(Some(Mat::zeros(f, 0, 0)));
    }
    let cover = free_cover(m)?;
    if let Ok(cat) = projective_catalog(m.alg()) {
        let pc = projective_cover(&cat, m)?;
        if pc.p.dim() != m.dim() {
            return Ok(None);
        }
        return section_through_cover(&cat, &pc, &cover).map(Some);
    }
    let pres = m.presentation();
    let (r, nf) = (pres.gens.len(), cover.free.dim());
    // images y_j in the free module: relations hold and the cover sends y_j back to g_j
    let rel = super::relation_equations(m, &cover.free);
    let mut back = Mat::zeros(f, r * m.dim(), r * nf);
    for j in 0..r {
        back.set_block(j * m.dim(), j * nf, &cover.map);
    }
    let sys = Mat::vstack(f, r * nf, &[&rel, &back]);
    let mut target = vec![f.zero(); rel.rows()];
    for g in &pres.gens {
        target.extend(g.iter().cloned());
    }
    Ok(solve_particular(&sys, &target).map(|y| super::from_generator_images(m, &cover.free, &y)))
}

/// For `M` isomorphic to its projective cover `P = ⊕ A e_s`: lift each
/// generator `e_s` into `e_s F` along the free cover `F -> M`.
fn section_through_cover(cat: &ProjectiveCatalog, pc: &ProjectiveCover, cover: &FreeCover) -> Result<Mat> {
    let f = cover.map.field();
    let inv = pc.map.inverse().ok_or_else(|| Error::InvalidModule("projective cover map is not invertible".into()))?;
    let free = &cover.free;
    let mut s_mat = Mat::zeros(f, free.dim(), pc.p.dim());
    for (s, &c) in pc.summands.iter().enumerate() {
        let cls = &cat.classes[c];
        let e_coords = cls.basis.coords(&cls.idem).expect("idempotent lies in its projective");
        let mut pv = vec![f.zero(); pc.p.dim()];
        pv[pc.offsets[s]..pc.offsets[s] + cls.basis.dim()].clone_from_slice(&e_coords);
        let gen = pc.map.mul_vec(&pv);
        let z = solve_particular(&cover.map, &gen)
            .ok_or_else(|| Error::InvalidModule("free cover is not onto".into()))?;
        let y = free.act_elem(&cls.idem).mul_vec(&z);
        for (t, a) in cls.basis.vectors().iter().enumerate() {
            let col = free.act_elem(a).mul_vec(&y);
            for (row, v) in col.into_iter().enumerate() {
                s_mat[(row, pc.offsets[s] + t)] = v;
            }
        }
    }
    Ok(&s_mat * &inv)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PdVerdict {
    pub holds: bool,
    /// Dimensions of the successive kernels `K_1, K_2, ..`.
    pub syzygy_dims: Vec<usize>,
}

/// Whether the `n`-th kernel of iterated free covers is projective.
pub fn pd_at_most(m: &Module, n: usize) -> Result<PdVerdict> {
    let mut cur = m.clone();
    let mut dims = Vec::new();
    for _ in 0..n {
        if is_projective(&cur)?.is_some() {
            return Ok(PdVerdict { holds: true, syzygy_dims: dims });
        }
        let cover = free_cover(&cur)?;
        let (k, _) = cover.free.kernel_of(&cover.map)?;
        dims.push(k.dim());
        cur = k;
    }
    Ok(PdVerdict { holds: is_projective(&cur)?.is_some(), syzygy_dims: dims })
}

/// `Ext^1(M, N)` from the free cover of `M`.
#[derive(Clone, Debug)]
pub struct Ext1 {
    pub dim: usize,
    /// Representatives `K -> N` of a basis of `Ext^1`.
    pub reps: Vec<Mat>,
    /// The kernel `K` of the free cover, with its inclusion.
    pub syzygy: Module,
    pub inclusion: Mat,
}

pub fn ext1(m: &Module, n: &Module) -> Result<Ext1> {
    if m.side() != Side::Left || n.side() != Side::Left || !super::same_algebra(m.alg(), n.alg()) {
        return Err(Error::AlgebraMismatch("Ext needs left modules over one algebra".into()));
    }
    let f = m.field();
    let cover = free_cover(m)?;
    let (k, inc) = cover.free.kernel_of(&cover.map)?;
    let homs = k.hom(n)?;
    let flat: Vec<Vec<Scalar>> = homs.iter().map(|h| h.flatten()).collect();
    let hspace = Subspace::span_of_vectors(f, n.dim() * k.dim(), &flat);
    // maps F -> N are tuples of images of the free generators
    let da = m.alg().dim();
    let mut images = Vec::new();
    for c in 0..cover.free.dim() / da.max(1) {
        for t in 0..n.dim() {
            let y = unit_vec(f, n.dim(), t);
            let mut phi = Mat::zeros(f, n.dim(), cover.free.dim());
            for i in 0..da {
                let col = n.act(i).mul_vec(&y);
                for (r, v) in col.into_iter().enumerate() {
                    phi[(r, c * da + i)] = v;
                }
            }
            let restricted = &phi * &inc;
            let coords = hspace
                .coords(&restricted.flatten())
                .ok_or_else(|| Error::NotAMorphism("restriction is not a module map".into()))?;
            images.push(coords);
        }
    }
    let im = Subspace::span_of_vectors(f, hspace.dim(), &images);
    let q = im.ambient_quotient();
    let reps = (0..q.dim())
        .map(|s| Mat::unflatten(f, n.dim(), k.dim(), &hspace.basis().mul_vec(&q.lift.col(s))))
        .collect();
    Ok(Ext1 { dim: q.dim(), reps, syzygy: k, inclusion: inc })
}

/// An indecomposable projective `A e` for one isomorphism class of
/// primitive idempotents.
#[derive(Clone, Debug)]
pub struct IndecProjective {
    pub idem: Vec<Scalar>,
    /// `A e` inside `A`.
    pub basis: Subspace,
    pub module: Module,
    /// `dim e (A/J) e`.
    pub top_end_dim: usize,
    /// Indices of the primitive idempotents in this class.
    pub members: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ProjectiveCatalog {
    pub alg: AlgRef,
    pub rad: Subspace,
    pub idems: Vec<Vec<Scalar>>,
    pub classes: Vec<IndecProjective>,
}

pub fn projective_catalog(alg: &AlgRef) -> Result<ProjectiveCatalog> {
    let rad = alg.radical()?.space;
    let idems = alg.primitive_idempotents()?;
    let n = idems.len();
    let mut class_of: Vec<Option<usize>> = vec![None; n];
    let mut classes: Vec<IndecProjective> = Vec::new();
    let regular = Module::regular(alg.clone());
    for i in 0..n {
        if class_of[i].is_some() {
            continue;
        }
        let c = classes.len();
        let mut members = vec![i];
        class_of[i] = Some(c);
        for j in i + 1..n {
            if class_of[j].is_none() && !rad.contains_subspace(&alg.corner(&idems[i], &idems[j])) {
                class_of[j] = Some(c);
                members.push(j);
            }
        }
        let e = &idems[i];
        let basis = alg.right_mult_matrix(e).image();
        let module = regular.submodule(&basis)?;
        let corner = alg.corner(e, e);
        let top_end_dim = corner.dim() - corner.intersection(&rad).dim();
        classes.push(IndecProjective { idem: e.clone(), basis, module, top_end_dim, members });
    }
    Ok(ProjectiveCatalog { alg: alg.clone(), rad, idems, classes })
}

/// A projective cover `P -> M`, `P` a sum of catalogue projectives.
#[derive(Clone, Debug)]
pub struct ProjectiveCover {
    pub p: Module,
    pub map: Mat,
    /// Catalogue class of each summand, in order.
    pub summands: Vec<usize>,
    pub offsets: Vec<usize>,
}

pub fn projective_cover(cat: &ProjectiveCatalog, m: &Module) -> Result<ProjectiveCover> {
    if m.side() != Side::Left || !super::same_algebra(m.alg(), &cat.alg) {
        return Err(Error::AlgebraMismatch("cover needs a left module over the catalogue algebra".into()));
    }
    let f = m.field();
    let jm = m.ideal_times(&cat.rad);
    let (top, q) = m.quotient(&jm)?;
    let mut summands = Vec::new();
    let mut gens: Vec<Vec<Scalar>> = Vec::new();
    for (c, cls) in cat.classes.iter().enumerate() {
        let e_top = top.act_elem(&cls.idem);
        let part = e_top.image();
        if part.dim() % cls.top_end_dim != 0 {
            return Err(Error::InvalidAlgebra("top multiplicity is not an integer; idempotent data is wrong".into()));
        }
        let mult = part.dim() / cls.top_end_dim;
        let corner = cat.alg.corner(&cls.idem, &cls.idem);
        let corner_acts: Vec<Mat> = corner.vectors().iter().map(|x| top.act_elem(x)).collect();
        let mut chosen: Vec<Vec<Scalar>> = Vec::new();
        let mut span = Subspace::zero(f, top.dim());
        for t in part.vectors() {
            if chosen.len() == mult {
                break;
            }
            if span.contains(&t) {
                continue;
            }
            chosen.push(t);
            let vs: Vec<Vec<Scalar>> =
                chosen.iter().flat_map(|v| corner_acts.iter().map(move |a| a.mul_vec(v))).collect();
            span = Subspace::span_of_vectors(f, top.dim(), &vs);
        }
        if chosen.len() != mult {
            return Err(Error::InvalidAlgebra("could not choose top generators".into()));
        }
        let lift_e = m.act_elem(&cls.idem);
        for t in chosen {
            gens.push(lift_e.mul_vec(&q.lift.mul_vec(&t)));
            summands.push(c);
        }
    }
    let mods: Vec<&Module> = summands.iter().map(|&c| &cat.classes[c].module).collect();
    let (p, offsets) = if mods.is_empty() {
        (Module::zero(cat.alg.clone(), Side::Left), Vec::new())
    } else {
        let ds = Module::direct_sum(&mods)?;
        (ds.module, ds.offsets)
    };
    let mut cols = Vec::with_capacity(p.dim());
    for (s, &c) in summands.iter().enumerate() {
        for v in cat.classes[c].basis.vectors() {
            cols.push(m.act_elem(&v).mul_vec(&gens[s]));
        }
    }
    let map = Mat::from_cols(f, m.dim(), &cols);
    if !p.is_morphism(m, &map) || map.rank() != m.dim() {
        return Err(Error::InvalidAlgebra("cover map is not a surjective module map".into()));
    }
    let rad_p = p.ideal_times(&cat.rad);
    if !rad_p.contains_subspace(&map.kernel()) {
        return Err(Error::InvalidAlgebra("cover kernel is not contained in rad P".into()));
    }
    Ok(ProjectiveCover { p, map, summands, offsets })
}

impl ProjectiveCatalog {
    pub fn shared_alg(&self) -> AlgRef {
        Arc::clone(&self.alg)
    }

    /// `⊕ P_c^{mults[c]}`.
    pub fn sum(&self, mults: &[usize]) -> Result<Module> {
        if mults.len() != self.classes.len() {
            return Err(Error::DimensionMismatch(format!("{} multiplicities for {} classes", mults.len(), self.classes.len())));
        }
        let mods: Vec<&Module> =
            mults.iter().zip(&self.classes).flat_map(|(&k, c)| std::iter::repeat_n(&c.module, k)).collect();
        if mods.is_empty() {
            return Ok(Module::zero(self.alg.clone(), Side::Left));
        }
        Ok(Module::direct_sum(&mods)?.module)
    }

    pub fn sum_dim(&self, mults: &[usize]) -> usize {
        mults.iter().zip(&self.classes).map(|(&k, c)| k * c.basis.dim()).sum()
    }

    /// All multiplicity vectors whose projective has dimension at most `bound`,
    /// in lexicographic order.
    pub fn multiplicities_up_to(&self, bound: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = vec![0; self.classes.len()];
        self.extend_mults(0, bound, &mut cur, &mut out);
        out
    }

    fn extend_mults(&self, c: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if c == self.classes.len() {
            out.push(cur.clone());
            return;
        }
        let d = self.classes[c].basis.dim();
        let mut k = 0;
        while k * d <= left {
            cur[c] = k;
            self.extend_mults(c + 1, left - k * d, cur, out);
            k += 1;
        }
        cur[c] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::exactlin::Field;

    fn dual(f: Field) -> AlgRef {
        Arc::new(Algebra::truncated_polynomial(f, "x", 2).with_computed_idempotents().unwrap())
    }

    fn simple(a: &AlgRef) -> Module {
        let f = a.field();
        Module::new(a.clone(), Side::Left, 1, vec![Mat::identity(f, 1), Mat::zeros(f, 1, 1)]).unwrap()
    }

    #[test]
    fn projectivity() {
        let f = Field::Rationals;
        let a = dual(f);
        assert!(is_projective(&Module::free(a.clone(), 2)).unwrap().is_some());
        assert!(is_projective(&simple(&a)).unwrap().is_none());
        assert!(is_projective(&Module::zero(a.clone(), Side::Left)).unwrap().is_some());
        let s = is_projective(&Module::regular(a.clone())).unwrap().unwrap();
        let cover = free_cover(&Module::regular(a.clone())).unwrap();
        assert!((&cover.map * &s).is_identity());
    }

    #[test]
    fn sections_of_non_free_projectives() {
        let f = Field::prime(5).unwrap();
        let a = Arc::new(Algebra::split_semisimple(f, 2).with_computed_idempotents().unwrap());
        let first = Module::new(a.clone(), Side::Left, 1, vec![Mat::identity(f, 1), Mat::zeros(f, 1, 1)]).unwrap();
        let m = Module::direct_sum(&[&first, &Module::regular(a.clone())]).unwrap().module;
        let s = is_projective(&m).unwrap().unwrap();
        let cover = free_cover(&m).unwrap();
        assert!((&cover.map * &s).is_identity());
        assert!(m.is_morphism(&cover.free, &s));
    }

    #[test]
    fn ext_of_simple_over_dual_numbers() {
        let f = Field::Rationals;
        let a = dual(f);
        let s = simple(&a);
        assert_eq!(ext1(&s, &s).unwrap().dim, 1);
        assert_eq!(ext1(&Module::regular(a.clone()), &s).unwrap().dim, 0);
    }

    #[test]
    fn pd_examples() {
        let f = Field::prime(3).unwrap();
        let a = Arc::new(Algebra::truncated_polynomial(f, "x", 2));
        let s = simple(&a);
        assert!(pd_at_most(&Module::regular(a.clone()), 0).unwrap().holds);
        let v = pd_at_most(&s, 5).unwrap();
        assert!(!v.holds);
        assert_eq!(v.syzygy_dims, vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn cover_of_simple_is_regular() {
        let f = Field::prime(2).unwrap();
        let a = Arc::new(
            Algebra::truncated_polynomial(f, "x", 2)
                .with_supplied_radical(Subspace::span_of_vectors(f, 2, &[vec![f.zero(), f.one()]]))
                .unwrap()
                .with_computed_idempotents()
                .unwrap(),
        );
        let cat = projective_catalog(&a).unwrap();
        assert_eq!(cat.classes.len(), 1);
        let c = projective_cover(&cat, &simple(&a)).unwrap();
        assert_eq!(c.p.dim(), 2);
        let reg = Module::regular(a.clone());
        let c = projective_cover(&cat, &reg).unwrap();
        assert!(c.map.is_invertible());
        let z = projective_cover(&cat, &Module::zero(a.clone(), Side::Left)).unwrap();
        assert_eq!(z.p.dim(), 0);
    }

    #[test]
    fn cover_over_matrix_algebra_counts_multiplicity() {
        // M_2(k): one class of primitive idempotents, simple module of dim 2
        let f = Field::Rationals;
        let m2 = Algebra::matrix_algebra(f, 2);
        let es = vec![m2.basis_vec(0), m2.basis_vec(3)];
        let a = Arc::new(m2.with_computed_radical().unwrap().with_idempotents(es).unwrap());
        let cat = projective_catalog(&a).unwrap();
        assert_eq!(cat.classes.len(), 1);
        assert_eq!(cat.classes[0].members, vec![0, 1]);
        let reg = Module::regular(a.clone());
        let c = projective_cover(&cat, &reg).unwrap();
        assert_eq!(c.summands.len(), 2);
        assert!(c.map.is_invertible());
    }
}

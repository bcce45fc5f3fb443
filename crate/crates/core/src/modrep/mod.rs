//! Finite-dimensional modules as matrix representations.

mod bimodule;
mod iso;
mod proj;
mod sample;

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::algebra::{AlgRef, Algebra, AlgebraMorphism};
use crate::diag::Diagnostics;
use crate::error::{Error, Result};
use crate::exactlin::{Field, Mat, Scalar, Subspace};

pub use bimodule::{evaluation, induce, right_dual, tensor_space, Bimodule, DualBimodule, Induced, TensorProduct};
pub use iso::{iso_test, IsoKind, IsoVerdict};
pub use sample::{random_invertible, random_module};
pub use proj::{
    ext1, free_cover, is_projective, pd_at_most, projective_catalog, projective_cover, Ext1, FreeCover, IndecProjective,
    PdVerdict, ProjectiveCatalog, ProjectiveCover,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A module over an algebra. `act[i]` is the matrix of `b_i` acting on
/// column vectors: `m -> b_i m` for left modules, `m -> m b_i` for right ones.
#[derive(Clone)]
pub struct Module {
    alg: AlgRef,
    side: Side,
    dim: usize,
    act: Vec<Mat>,
    pres: OnceLock<Arc<Presentation>>,
}

pub type ModRef = Arc<Module>;

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        self.side == other.side && self.act == other.act && same_algebra(&self.alg, &other.alg)
    }
}
impl Eq for Module {}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module({:?}, dim {} over algebra of dim {})", self.side, self.dim, self.alg.dim())
    }
}

pub(crate) fn same_algebra(a: &AlgRef, b: &AlgRef) -> bool {
    Arc::ptr_eq(a, b) || a.as_ref() == b.as_ref()
}

/// A presentation `A^r -> M` from a greedy generating set.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub gens: Vec<Vec<Scalar>>,
    /// `dim M x (dim A * r)`; column `j * dim A + i` is `b_i g_j`.
    pub cover: Mat,
    /// A linear right inverse of `cover`.
    pub section: Mat,
    pub relations: Subspace,
}

impl Module {
    pub fn new(alg: AlgRef, side: Side, dim: usize, act: Vec<Mat>) -> Result<Module> {
        let m = Module::unchecked(alg, side, dim, act)?;
        let d = m.validate();
        match d.first_failure() {
            None => Ok(m),
            Some(f) => Err(Error::InvalidModule(f.to_string())),
        }
    }

    pub fn unchecked(alg: AlgRef, side: Side, dim: usize, act: Vec<Mat>) -> Result<Module> {
        if act.len() != alg.dim() {
            return Err(Error::InvalidModule(format!(
                "{} action matrices for an algebra of dimension {}",
                act.len(),
                alg.dim()
            )));
        }
        for a in &act {
            if a.rows() != dim || a.cols() != dim || a.field() != alg.field() {
                return Err(Error::DimensionMismatch(format!("action matrix is {}x{}, module has dim {dim}", a.rows(), a.cols())));
            }
        }
        Ok(Module { alg, side, dim, act, pres: OnceLock::new() })
    }

    pub fn validate(&self) -> Diagnostics {
        let mut diag = Diagnostics::new();
        diag.check(self.act_elem(self.alg.unit()).is_identity(), || "unit does not act as the identity".into());
        let d = self.alg.dim();
        for i in 0..d {
            for j in 0..d {
                let prod = match self.side {
                    Side::Left => &self.act[i] * &self.act[j],
                    Side::Right => &self.act[j] * &self.act[i],
                };
                if prod != self.act_elem(&self.alg.sc(i, j)) {
                    diag.fail(format!(
                        "action is not multiplicative on ({}, {})",
                        self.alg.names()[i],
                        self.alg.names()[j]
                    ));
                }
            }
        }
        diag
    }

    /// `A` acting on itself by left multiplication.
    pub fn regular(alg: AlgRef) -> Module {
        let act = (0..alg.dim()).map(|i| alg.lmul(i).clone()).collect();
        let d = alg.dim();
        Module { alg, side: Side::Left, dim: d, act, pres: OnceLock::new() }
    }

    /// `A` acting on itself by right multiplication.
    pub fn regular_right(alg: AlgRef) -> Module {
        let act = (0..alg.dim()).map(|i| alg.rmul(i).clone()).collect();
        let d = alg.dim();
        Module { alg, side: Side::Right, dim: d, act, pres: OnceLock::new() }
    }

    /// `A^n`, block `j` holding the `j`-th copy.
    pub fn free(alg: AlgRef, n: usize) -> Module {
        let f = alg.field();
        let act = (0..alg.dim())
            .map(|i| {
                let blocks: Vec<&Mat> = (0..n).map(|_| alg.lmul(i)).collect();
                Mat::block_diag(f, &blocks)
            })
            .collect();
        let d = alg.dim() * n;
        Module { alg, side: Side::Left, dim: d, act, pres: OnceLock::new() }
    }

    pub fn zero(alg: AlgRef, side: Side) -> Module {
        let f = alg.field();
        let act = (0..alg.dim()).map(|_| Mat::zeros(f, 0, 0)).collect();
        Module { alg, side, dim: 0, act, pres: OnceLock::new() }
    }

    /// Restriction of scalars along `phi: A -> B` for a module over `B`.
    pub fn restrict(&self, phi: &AlgebraMorphism) -> Result<Module> {
        if !same_algebra(&phi.target, &self.alg) {
            return Err(Error::AlgebraMismatch("restriction along a map into a different algebra".into()));
        }
        let act = (0..phi.source.dim()).map(|i| self.act_elem(&phi.mat.col(i))).collect();
        Ok(Module { alg: phi.source.clone(), side: self.side, dim: self.dim, act, pres: OnceLock::new() })
    }

    pub fn alg(&self) -> &AlgRef {
        &self.alg
    }
    pub fn field(&self) -> Field {
        self.alg.field()
    }
    pub fn side(&self) -> Side {
        self.side
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn act(&self, i: usize) -> &Mat {
        &self.act[i]
    }
    pub fn acts(&self) -> &[Mat] {
        &self.act
    }

    /// Matrix of an algebra element.
    pub fn act_elem(&self, x: &[Scalar]) -> Mat {
        let f = self.field();
        let mut out = Mat::zeros(f, self.dim, self.dim);
        for (c, a) in x.iter().zip(&self.act) {
            if !c.is_zero() {
                out = &out + &a.scale(c);
            }
        }
        out
    }

    /// The algebra over which this is a left module (`A^op` for right modules).
    pub fn left_alg(&self) -> AlgRef {
        match self.side {
            Side::Left => self.alg.clone(),
            Side::Right => self.alg.opposite_ref(),
        }
    }

    fn compatible(&self, other: &Module) -> Result<()> {
        if self.side != other.side || !same_algebra(&self.alg, &other.alg) {
            return Err(Error::AlgebraMismatch("modules over different algebras or sides".into()));
        }
        Ok(())
    }

    /// The submodule generated by some vectors.
    pub fn generated(&self, vs: &[Vec<Scalar>]) -> Subspace {
        let mut all = Vec::with_capacity(vs.len() * self.act.len());
        for v in vs {
            for a in &self.act {
                all.push(a.mul_vec(v));
            }
        }
        Subspace::span_of_vectors(self.field(), self.dim, &all)
    }

    pub fn is_submodule(&self, s: &Subspace) -> bool {
        let gens = self.alg.generators();
        s.vectors().iter().all(|v| gens.iter().all(|&g| s.contains(&self.act[g].mul_vec(v))))
    }

    /// Greedy presentation, computed once.
    pub fn presentation(&self) -> Arc<Presentation> {
        self.pres
            .get_or_init(|| {
                let f = self.field();
                let da = self.alg.dim();
                let mut gens: Vec<Vec<Scalar>> = Vec::new();
                let mut span = Subspace::zero(f, self.dim);
                for j in 0..self.dim {
                    if span.dim() == self.dim {
                        break;
                    }
                    let e = crate::exactlin::unit_vec(f, self.dim, j);
                    if !span.contains(&e) {
                        gens.push(e);
                        span = self.generated(&gens);
                    }
                }
                let cols: Vec<Vec<Scalar>> =
                    gens.iter().flat_map(|g| self.act.iter().map(move |a| a.mul_vec(g))).collect();
                let cover = Mat::from_cols(f, self.dim, &cols);
                let section = crate::exactlin::right_inverse(&cover).expect("generators span the module");
                debug_assert_eq!(cover.cols(), da * gens.len());
                let relations = cover.kernel();
                Arc::new(Presentation { gens, cover, section, relations })
            })
            .clone()
    }

    /// Action on a subspace that is a submodule (coordinates in its basis).
    pub fn submodule(&self, s: &Subspace) -> Result<Module> {
        if !self.is_submodule(s) {
            return Err(Error::InvalidModule("subspace is not a submodule".into()));
        }
        let coord = s.coord_matrix();
        let act = self.act.iter().map(|a| &(&coord * a) * s.basis()).collect();
        Ok(Module { alg: self.alg.clone(), side: self.side, dim: s.dim(), act, pres: OnceLock::new() })
    }

    /// `M / S` with the quotient map.
    pub fn quotient(&self, s: &Subspace) -> Result<(Module, crate::exactlin::Quotient)> {
        if !self.is_submodule(s) {
            return Err(Error::InvalidModule("subspace is not a submodule".into()));
        }
        let q = s.ambient_quotient();
        let act = self.act.iter().map(|a| &(&q.proj * a) * &q.lift).collect();
        Ok((Module { alg: self.alg.clone(), side: self.side, dim: q.dim(), act, pres: OnceLock::new() }, q))
    }

    /// `J M` for a subspace `J` of the algebra.
    pub fn ideal_times(&self, j: &Subspace) -> Subspace {
        let mats: Vec<Mat> = j.vectors().iter().map(|v| self.act_elem(v)).collect();
        let mut vs = Vec::new();
        for m in &mats {
            for c in 0..self.dim {
                vs.push(m.col(c));
            }
        }
        Subspace::span_of_vectors(self.field(), self.dim, &vs)
    }

    /// Direct sum with injections and projections.
    pub fn direct_sum(mods: &[&Module]) -> Result<DirectSum> {
        let first = mods.first().ok_or_else(|| Error::InvalidInput("empty direct sum".into()))?;
        for m in mods {
            first.compatible(m)?;
        }
        let f = first.field();
        let act = (0..first.alg.dim())
            .map(|i| {
                let blocks: Vec<&Mat> = mods.iter().map(|m| &m.act[i]).collect();
                Mat::block_diag(f, &blocks)
            })
            .collect();
        let total: usize = mods.iter().map(|m| m.dim).sum();
        let mut offsets = Vec::new();
        let mut o = 0;
        for m in mods {
            offsets.push(o);
            o += m.dim;
        }
        let module = Module { alg: first.alg.clone(), side: first.side, dim: total, act, pres: OnceLock::new() };
        let inj = mods
            .iter()
            .zip(&offsets)
            .map(|(m, &o)| {
                let mut e = Mat::zeros(f, total, m.dim);
                e.set_block(o, 0, &Mat::identity(f, m.dim));
                e
            })
            .collect::<Vec<_>>();
        let proj = inj.iter().map(|e| e.transpose()).collect();
        Ok(DirectSum { module, inj, proj, offsets })
    }

    /// Reduced basis of `Hom_A(self, other)`.
    pub fn hom(&self, other: &Module) -> Result<Vec<Mat>> {
        self.compatible(other)?;
        Ok(hom_basis(self, other))
    }

    pub fn is_morphism(&self, other: &Module, f: &Mat) -> bool {
        f.rows() == other.dim
            && f.cols() == self.dim
            && self.act.iter().zip(&other.act).all(|(a, b)| f * a == b * f)
    }

    /// Kernel of a morphism as a submodule.
    pub fn kernel_of(&self, f: &Mat) -> Result<(Module, Mat)> {
        let k = f.kernel();
        Ok((self.submodule(&k)?, k.basis().clone()))
    }
}

/// Linear conditions on images `y_j` of the generators of `m` in `n`:
/// relation `k` of `A^r` gives `sum_j act_N(k_j) y_j = 0`.
pub(crate) fn relation_equations(m: &Module, n: &Module) -> Mat {
    let f = m.field();
    let pres = m.presentation();
    let da = m.alg.dim();
    let r = pres.gens.len();
    let dn = n.dim;
    let rels = pres.relations.vectors();
    let mut eq = Mat::zeros(f, rels.len() * dn, r * dn);
    for (t, k) in rels.iter().enumerate() {
        for j in 0..r {
            let kj = &k[j * da..(j + 1) * da];
            if kj.iter().all(Scalar::is_zero) {
                continue;
            }
            eq.set_block(t * dn, j * dn, &n.act_elem(kj));
        }
    }
    eq
}

/// The module map `m -> n` sending the `j`-th generator of `m` to `y_j`
/// (stacked in `y`); the images must satisfy the relations.
pub(crate) fn from_generator_images(m: &Module, n: &Module, y: &[Scalar]) -> Mat {
    let f = m.field();
    let pres = m.presentation();
    let da = m.alg.dim();
    let r = pres.gens.len();
    let dn = n.dim;
    // A^r -> N, column (j, i) = act_N(b_i) y_j
    let mut phi = Mat::zeros(f, dn, da * r);
    for j in 0..r {
        let yj = &y[j * dn..(j + 1) * dn];
        for i in 0..da {
            let col = n.act[i].mul_vec(yj);
            for (row, v) in col.into_iter().enumerate() {
                phi[(row, j * da + i)] = v;
            }
        }
    }
    &phi * &pres.section
}

/// Hom via the presentation of the source: a map is a tuple of images of
/// the generators killing every relation.
fn hom_basis(m: &Module, n: &Module) -> Vec<Mat> {
    let f = m.field();
    if m.dim == 0 || n.dim == 0 {
        return Vec::new();
    }
    let dn = n.dim;
    let eq = relation_equations(m, n);
    let sols = eq.kernel();
    let flat: Vec<Vec<Scalar>> = sols.vectors().iter().map(|y| from_generator_images(m, n, y).flatten()).collect();
    let canon = Subspace::span_of_vectors(f, dn * m.dim, &flat);
    canon.vectors().iter().map(|v| Mat::unflatten(f, dn, m.dim, v)).collect()
}

#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: Module,
    pub inj: Vec<Mat>,
    pub proj: Vec<Mat>,
    pub offsets: Vec<usize>,
}

/// A morphism of modules over the same algebra and side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMorphism {
    pub source: ModRef,
    pub target: ModRef,
    pub mat: Mat,
}

impl ModuleMorphism {
    pub fn new(source: ModRef, target: ModRef, mat: Mat) -> Result<ModuleMorphism> {
        source.compatible(&target)?;
        if !source.is_morphism(&target, &mat) {
            return Err(Error::NotAMorphism("matrix does not commute with the action".into()));
        }
        Ok(ModuleMorphism { source, target, mat })
    }

    pub fn identity(m: ModRef) -> ModuleMorphism {
        let mat = Mat::identity(m.field(), m.dim());
        ModuleMorphism { source: m.clone(), target: m, mat }
    }

    pub fn kernel(&self) -> Result<(Module, Mat)> {
        self.source.kernel_of(&self.mat)
    }

    pub fn image(&self) -> Result<(Module, Mat)> {
        let im = self.mat.image();
        Ok((self.target.submodule(&im)?, im.basis().clone()))
    }

    pub fn cokernel(&self) -> Result<(Module, Mat)> {
        let (q, quo) = self.target.quotient(&self.mat.image())?;
        Ok((q, quo.proj))
    }

    pub fn is_iso(&self) -> bool {
        self.mat.is_invertible()
    }
}

/// Hom over `A` between the plain algebra regarded as a left module and `N` is `N`.
pub fn hom_from_regular(n: &Module) -> Vec<Mat> {
    let f = n.field();
    (0..n.dim())
        .map(|c| {
            let y = crate::exactlin::unit_vec(f, n.dim(), c);
            Mat::from_cols(f, n.dim(), &(0..n.alg.dim()).map(|i| n.act[i].mul_vec(&y)).collect::<Vec<_>>())
        })
        .collect()
}

/// Shorthand for a left module over an algebra given as a value.
pub fn left_module(alg: &Algebra, dim: usize, act: Vec<Mat>) -> Result<Module> {
    Module::new(Arc::new(alg.clone()), Side::Left, dim, act)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dual(f: Field) -> AlgRef {
        Arc::new(Algebra::truncated_polynomial(f, "x", 2))
    }

    fn simple(a: &AlgRef) -> Module {
        let f = a.field();
        Module::new(a.clone(), Side::Left, 1, vec![Mat::identity(f, 1), Mat::zeros(f, 1, 1)]).unwrap()
    }

    #[test]
    fn hom_examples() {
        let f = Field::prime(2).unwrap();
        let k = Arc::new(Algebra::ground(f));
        let kk = Module::regular(k.clone());
        assert_eq!(kk.hom(&kk).unwrap().len(), 1);
        let a = dual(f);
        let reg = Module::regular(a.clone());
        let s = simple(&a);
        let h = reg.hom(&s).unwrap();
        // hand solve: f(1) = c, f(x) = x f(1) = 0
        assert_eq!(h, vec![Mat::from_i64(f, &[vec![1, 0]])]);
        assert!(reg.hom(&Module::zero(a.clone(), Side::Left)).unwrap().is_empty());
        assert_eq!(reg.hom(&reg).unwrap().len(), 2);
        assert_eq!(hom_from_regular(&reg).len(), 2);
    }

    #[test]
    fn hom_matches_brute_force_commutation() {
        let f = Field::Rationals;
        let a = dual(f);
        let reg = Module::regular(a.clone());
        let s = simple(&a);
        let m = Module::direct_sum(&[&reg, &s]).unwrap().module;
        // brute force: kernel of F act_M - act_N F over all basis elements
        let (dm, dn) = (m.dim(), m.dim());
        let mut rows = Vec::new();
        for i in 0..a.dim() {
            let (am, an) = (m.act(i), m.act(i));
            for r in 0..dn {
                for c in 0..dm {
                    let mut row = vec![f.zero(); dn * dm];
                    for k in 0..dm {
                        row[r * dm + k] = &row[r * dm + k] + &am[(k, c)];
                    }
                    for k in 0..dn {
                        row[k * dm + c] = &row[k * dm + c] - &an[(r, k)];
                    }
                    rows.push(row);
                }
            }
        }
        let brute = Mat::from_rows(f, dn * dm, &rows).kernel();
        let ours = m.hom(&m).unwrap();
        assert_eq!(ours.len(), brute.dim());
        for h in &ours {
            assert!(brute.contains(&h.flatten()));
        }
    }

    #[test]
    fn right_modules_validate() {
        let f = Field::Rationals;
        let m = Algebra::matrix_algebra(f, 2);
        let r = Module::regular_right(Arc::new(m));
        assert!(r.validate().ok());
        assert_eq!(r.hom(&r).unwrap().len(), 4);
    }

    #[test]
    fn kernel_cokernel_image() {
        let f = Field::Rationals;
        let a = dual(f);
        let reg = Arc::new(Module::regular(a.clone()));
        let id = ModuleMorphism::identity(reg.clone());
        assert_eq!(id.kernel().unwrap().0.dim(), 0);
        let zero_mod = Arc::new(Module::zero(a.clone(), Side::Left));
        let z = ModuleMorphism::new(zero_mod, reg.clone(), Mat::zeros(f, 2, 0)).unwrap();
        assert_eq!(z.cokernel().unwrap().0.dim(), 2);
        // multiplication by x
        let x = ModuleMorphism::new(reg.clone(), reg.clone(), a.rmul(1).clone()).unwrap();
        assert_eq!(x.image().unwrap().0.dim(), 1);
        assert_eq!(x.kernel().unwrap().0.dim(), 1);
    }

    #[test]
    fn rejects_bad_action() {
        let f = Field::Rationals;
        let a = dual(f);
        assert!(Module::new(a, Side::Left, 1, vec![Mat::identity(f, 1), Mat::identity(f, 1)]).is_err());
    }
}

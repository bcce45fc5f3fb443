
use super::{same_algebra, Module, Side};
use crate::algebra::{AlgRef, AlgebraMorphism};
use crate::diag::Diagnostics;
use crate::error::{Error, Result};
use crate::exactlin::{Field, Mat, Scalar, Subspace};

/// A space with commuting left `C`- and right `D`-actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    pub left: AlgRef,
    pub right: AlgRef,
    pub dim: usize,
    pub lact: Vec<Mat>,
    /// `ract[j]` is `m -> m d_j` on column vectors.
    pub ract: Vec<Mat>,
}

impl Bimodule {
    pub fn new(left: AlgRef, right: AlgRef, dim: usize, lact: Vec<Mat>, ract: Vec<Mat>) -> Result<Bimodule> {
        let b = Bimodule { left, right, dim, lact, ract };
        let d = b.validate();
        match d.first_failure() {
            None => Ok(b),
            Some(f) => Err(Error::InvalidModule(f.to_string())),
        }
    }

    pub fn validate(&self) -> Diagnostics {
        let mut d = Diagnostics::new();
        match (self.as_left(), self.as_right()) {
            (Ok(l), Ok(r)) => {
                d.absorb("left action", l.validate());
                d.absorb("right action", r.validate());
            }
            _ => {
                d.fail("action matrices have the wrong shape or count");
                return d;
            }
        }
        for (i, l) in self.lact.iter().enumerate() {
            for (j, r) in self.ract.iter().enumerate() {
                if l * r != r * l {
                    d.fail(format!(
                        "actions do not commute on ({}, {})",
                        self.left.names()[i],
                        self.right.names()[j]
                    ));
                }
            }
        }
        d
    }

    /// `C` as a bimodule over `A` and `B` through `left: A -> C` and `right: B -> C`.
    pub fn via(left: &AlgebraMorphism, right: &AlgebraMorphism) -> Result<Bimodule> {
        if !same_algebra(&left.target, &right.target) {
            return Err(Error::AlgebraMismatch("maps have different targets".into()));
        }
        let c = &left.target;
        let lact = (0..left.source.dim()).map(|i| c.left_mult_matrix(&left.mat.col(i))).collect();
        let ract = (0..right.source.dim()).map(|j| c.right_mult_matrix(&right.mat.col(j))).collect();
        Ok(Bimodule { left: left.source.clone(), right: right.source.clone(), dim: c.dim(), lact, ract })
    }

    pub fn regular(a: AlgRef) -> Bimodule {
        let id = AlgebraMorphism::identity(a);
        Bimodule::via(&id, &id).expect("identity maps share a target")
    }

    pub fn field(&self) -> Field {
        self.left.field()
    }

    pub fn as_left(&self) -> Result<Module> {
        Module::unchecked(self.left.clone(), Side::Left, self.dim, self.lact.clone())
    }

    pub fn as_right(&self) -> Result<Module> {
        Module::unchecked(self.right.clone(), Side::Right, self.dim, self.ract.clone())
    }

    /// `self ⊗_D N` for a left `D`-module `N`, a left `C`-module.
    pub fn tensor_left(&self, n: &Module) -> Result<(Module, TensorProduct)> {
        if n.side() != Side::Left || !same_algebra(&self.right, n.alg()) {
            return Err(Error::AlgebraMismatch("tensor needs a left module over the right algebra".into()));
        }
        let tp = tensor_space(&self.right, self.dim, &self.ract, n.dim(), n.acts());
        let id = Mat::identity(self.field(), n.dim());
        let act = self.lact.iter().map(|l| tp.outer(&l.kron(&id))).collect();
        Ok((Module::unchecked(self.left.clone(), Side::Left, tp.dim(), act)?, tp))
    }

    /// `M ⊗_C self` for a right `C`-module `M`, a right `D`-module.
    pub fn tensor_right(&self, m: &Module) -> Result<(Module, TensorProduct)> {
        if m.side() != Side::Right || !same_algebra(&self.left, m.alg()) {
            return Err(Error::AlgebraMismatch("tensor needs a right module over the left algebra".into()));
        }
        let tp = tensor_space(&self.left, m.dim(), m.acts(), self.dim, &self.lact);
        let id = Mat::identity(self.field(), m.dim());
        let act = self.ract.iter().map(|r| tp.outer(&id.kron(r))).collect();
        Ok((Module::unchecked(self.right.clone(), Side::Right, tp.dim(), act)?, tp))
    }

    /// `self ⊗_D other`.
    pub fn tensor_bimodule(&self, other: &Bimodule) -> Result<(Bimodule, TensorProduct)> {
        if !same_algebra(&self.right, &other.left) {
            return Err(Error::AlgebraMismatch("inner algebras differ".into()));
        }
        let f = self.field();
        let tp = tensor_space(&self.right, self.dim, &self.ract, other.dim, &other.lact);
        let (i1, i2) = (Mat::identity(f, self.dim), Mat::identity(f, other.dim));
        let lact = self.lact.iter().map(|l| tp.outer(&l.kron(&i2))).collect();
        let ract = other.ract.iter().map(|r| tp.outer(&i1.kron(r))).collect();
        Ok((Bimodule { left: self.left.clone(), right: other.right.clone(), dim: tp.dim(), lact, ract }, tp))
    }
}

/// `M ⊗_A N` as a quotient of `M ⊗_k N`; plain index of `(m, n)` is `m * dim N + n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorProduct {
    pub left_dim: usize,
    pub right_dim: usize,
    pub relations: Subspace,
    /// Plain tensor -> quotient.
    pub proj: Mat,
    /// A section of `proj`.
    pub lift: Mat,
}

impl TensorProduct {
    pub fn dim(&self) -> usize {
        self.proj.rows()
    }

    /// The class of `x ⊗ y`.
    pub fn elem(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let f = self.proj.field();
        let xv = Mat::column_vector(f, x);
        let yv = Mat::column_vector(f, y);
        self.proj.mul_vec(&xv.kron(&yv).col(0))
    }

    /// Descend an endomorphism of the plain tensor product.
    pub fn outer(&self, m: &Mat) -> Mat {
        &(&self.proj * m) * &self.lift
    }

    /// `F ⊗ G` from `src` to `tgt`.
    pub fn map_between(src: &TensorProduct, tgt: &TensorProduct, f: &Mat, g: &Mat) -> Mat {
        &(&tgt.proj * &f.kron(g)) * &src.lift
    }
}

/// Tensor over `a` of a right module (`m_act`) and a left module (`n_act`).
pub fn tensor_space(a: &AlgRef, m_dim: usize, m_act: &[Mat], n_dim: usize, n_act: &[Mat]) -> TensorProduct {
    let f = a.field();
    let (im, in_) = (Mat::identity(f, m_dim), Mat::identity(f, n_dim));
    let blocks: Vec<Mat> = a
        .generators()
        .iter()
        .map(|&g| &m_act[g].kron(&in_) - &im.kron(&n_act[g]))
        .collect();
    let refs: Vec<&Mat> = blocks.iter().collect();
    let rel = Subspace::span_of_cols(&Mat::hstack(f, m_dim * n_dim, &refs));
    let q = rel.ambient_quotient();
    TensorProduct { left_dim: m_dim, right_dim: n_dim, relations: rel, proj: q.proj, lift: q.lift }
}

/// `B ⊗_A M` along `phi: A -> B` with the unit map `m -> 1 ⊗ m`.
#[derive(Clone, Debug)]
pub struct Induced {
    pub module: Module,
    pub tp: TensorProduct,
    pub unit_map: Mat,
}

pub fn induce(phi: &AlgebraMorphism, m: &Module) -> Result<Induced> {
    if m.side() != Side::Left {
        return Err(Error::AlgebraMismatch("induction needs a left module".into()));
    }
    let b = Bimodule::via(&AlgebraMorphism::identity(phi.target.clone()), phi)?;
    let (module, tp) = b.tensor_left(m)?;
    let f = m.field();
    let unit = phi.target.unit().to_vec();
    let cols: Vec<Vec<Scalar>> =
        (0..m.dim()).map(|j| tp.elem(&unit, &crate::exactlin::unit_vec(f, m.dim(), j))).collect();
    let unit_map = Mat::from_cols(f, tp.dim(), &cols);
    Ok(Induced { module, tp, unit_map })
}

/// `Hom_{D^op}(B, D)` for a `(C, D)`-bimodule `B`, a `(D, C)`-bimodule.
#[derive(Clone, Debug)]
pub struct DualBimodule {
    pub bimodule: Bimodule,
    /// Basis functionals, each a `dim D x dim B` matrix.
    pub funcs: Vec<Mat>,
    coords: Subspace,
}

impl DualBimodule {
    /// Coordinates of a right-linear functional in the basis `funcs`.
    pub fn coords_of(&self, f: &Mat) -> Option<Vec<Scalar>> {
        self.coords.coords(&f.flatten())
    }
}

pub fn right_dual(b: &Bimodule) -> Result<DualBimodule> {
    let f = b.field();
    let d = &b.right;
    let (dd, db) = (d.dim(), b.dim);
    // F ract_B(g) = R^D_g F for generators g; F is dd x db, row-major unknowns
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for &g in d.generators() {
        let a = &b.ract[g];
        let rm = d.rmul(g);
        for r in 0..dd {
            for c in 0..db {
                let mut row = vec![f.zero(); dd * db];
                for k in 0..db {
                    if !a[(k, c)].is_zero() {
                        row[r * db + k] = &row[r * db + k] + &a[(k, c)];
                    }
                }
                for k in 0..dd {
                    if !rm[(r, k)].is_zero() {
                        row[k * db + c] = &row[k * db + c] - &rm[(r, k)];
                    }
                }
                rows.push(row);
            }
        }
    }
    let sol = if rows.is_empty() {
        Subspace::full(f, dd * db)
    } else {
        Mat::from_rows(f, dd * db, &rows).kernel()
    };
    let funcs: Vec<Mat> = sol.vectors().iter().map(|v| Mat::unflatten(f, dd, db, v)).collect();
    let n = funcs.len();
    let express = |m: &Mat| -> Result<Vec<Scalar>> {
        sol.coords(&m.flatten()).ok_or_else(|| Error::InvalidModule("dual action leaves the functional space".into()))
    };
    let mut lact = Vec::with_capacity(dd);
    for i in 0..dd {
        let cols = funcs.iter().map(|fm| express(&(d.lmul(i) * fm))).collect::<Result<Vec<_>>>()?;
        lact.push(Mat::from_cols(f, n, &cols));
    }
    let mut ract = Vec::with_capacity(b.left.dim());
    for l in &b.lact {
        let cols = funcs.iter().map(|fm| express(&(fm * l))).collect::<Result<Vec<_>>>()?;
        ract.push(Mat::from_cols(f, n, &cols));
    }
    let bimodule = Bimodule::new(d.clone(), b.left.clone(), n, lact, ract)?;
    Ok(DualBimodule { bimodule, funcs, coords: sol })
}

/// `ev: B* ⊗_C B -> D`, `f ⊗ x -> f(x)`, verified as a `D`-bimodule map.
pub fn evaluation(dual: &DualBimodule, b: &Bimodule) -> Result<(Mat, TensorProduct)> {
    let f = b.field();
    let bd = &dual.bimodule;
    if !same_algebra(&bd.right, &b.left) || dual.funcs.first().is_some_and(|m| m.cols() != b.dim) {
        return Err(Error::AlgebraMismatch("dual does not match the bimodule".into()));
    }
    let tp = tensor_space(&b.left, bd.dim, &bd.ract, b.dim, &b.lact);
    let dd = b.right.dim();
    let mut plain = Mat::zeros(f, dd, bd.dim * b.dim);
    for (t, fm) in dual.funcs.iter().enumerate() {
        for x in 0..b.dim {
            for r in 0..dd {
                plain[(r, t * b.dim + x)] = fm[(r, x)].clone();
            }
        }
    }
    if !(&plain * tp.relations.basis()).is_zero() {
        return Err(Error::InvalidModule("evaluation does not vanish on tensor relations".into()));
    }
    let ev = &plain * &tp.lift;
    let d = &b.right;
    let (i1, i2) = (Mat::identity(f, bd.dim), Mat::identity(f, b.dim));
    for g in 0..dd {
        let l_src = tp.outer(&bd.lact[g].kron(&i2));
        let r_src = tp.outer(&i1.kron(&b.ract[g]));
        if &ev * &l_src != d.lmul(g) * &ev || &ev * &r_src != d.rmul(g) * &ev {
            return Err(Error::NotAMorphism("evaluation is not a bimodule map".into()));
        }
    }
    Ok((ev, tp))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::Algebra;

    fn e1(f: Field) -> (AlgRef, AlgRef, AlgebraMorphism) {
        let r1 = Arc::new(Algebra::truncated_polynomial(f, "x", 2));
        let k = Arc::new(Algebra::ground(f));
        let pi1 = AlgebraMorphism::new(r1.clone(), k.clone(), Mat::from_i64(f, &[vec![1, 0]])).unwrap();
        (r1, k, pi1)
    }

    #[test]
    fn ground_tensor() {
        let f = Field::prime(2).unwrap();
        let k = Arc::new(Algebra::ground(f));
        let b = Bimodule::regular(k.clone());
        let (m, _) = b.tensor_left(&Module::regular(k)).unwrap();
        assert_eq!(m.dim(), 1);
    }

    #[test]
    fn rprime_tensor_examples() {
        let f = Field::prime(2).unwrap();
        let (r1, k, pi1) = e1(f);
        // R' as (k, R1)-bimodule
        let rp = Bimodule::via(&AlgebraMorphism::identity(k.clone()), &pi1).unwrap();
        let (m, _) = rp.tensor_left(&Module::regular(r1.clone())).unwrap();
        assert_eq!(m.dim(), 1);
        let simple = Module::new(r1.clone(), Side::Left, 1, vec![Mat::identity(f, 1), Mat::zeros(f, 1, 1)]).unwrap();
        let (m, tp) = rp.tensor_left(&simple).unwrap();
        assert_eq!(m.dim(), 1);
        assert!(tp.relations.dim() == 0);
    }

    #[test]
    fn induction_along_identity_and_epimorphism() {
        let f = Field::Rationals;
        let (r1, _, pi1) = e1(f);
        let reg = Module::regular(r1.clone());
        let ind = induce(&AlgebraMorphism::identity(r1.clone()), &reg).unwrap();
        assert_eq!(ind.module.dim(), 2);
        assert!(ind.unit_map.is_invertible());
        let ind = induce(&pi1, &reg).unwrap();
        assert_eq!(ind.module.dim(), 1);
        assert!(ind.module.validate().ok());
    }

    #[test]
    fn dual_of_rprime() {
        let f = Field::prime(2).unwrap();
        let (_, k, pi1) = e1(f);
        // R' as (R1, R2)-bimodule with R2 = k
        let b = Bimodule::via(&pi1, &AlgebraMorphism::identity(k.clone())).unwrap();
        let dual = right_dual(&b).unwrap();
        assert_eq!(dual.bimodule.dim, 1);
        // R1 acts on the dual through pi1: x acts by zero
        assert!(dual.bimodule.ract[1].is_zero());
        let (ev, tp) = evaluation(&dual, &b).unwrap();
        assert_eq!(tp.dim(), 1);
        assert_eq!(ev, Mat::identity(f, 1));
    }

    #[test]
    fn dual_of_regular_and_zero() {
        let f = Field::Rationals;
        let k = Arc::new(Algebra::ground(f));
        let dual = right_dual(&Bimodule::regular(k.clone())).unwrap();
        assert_eq!(dual.bimodule.dim, 1);
        let zero = Bimodule::new(k.clone(), k.clone(), 0, vec![Mat::zeros(f, 0, 0)], vec![Mat::zeros(f, 0, 0)]).unwrap();
        assert_eq!(right_dual(&zero).unwrap().bimodule.dim, 0);
    }

    #[test]
    fn tensor_dimension_is_basis_independent() {
        // k ⊗_A A with A = k[x]/x^3 acting on k through evaluation at 0,
        // against the same tensor with A's regular module in a permuted basis
        let f = Field::Rationals;
        let a = Arc::new(Algebra::truncated_polynomial(f, "x", 3));
        let k = Arc::new(Algebra::ground(f));
        let ev = AlgebraMorphism::new(a.clone(), k.clone(), Mat::from_i64(f, &[vec![1, 0, 0]])).unwrap();
        let b = Bimodule::via(&AlgebraMorphism::identity(k), &ev).unwrap();
        let m = Module::regular(a.clone());
        let p = Mat::from_i64(f, &[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
        let pinv = p.inverse().unwrap();
        let permuted = Module::new(a, Side::Left, 3, m.acts().iter().map(|x| &(&p * x) * &pinv).collect()).unwrap();
        let (t1, tp1) = b.tensor_left(&m).unwrap();
        let (t2, tp2) = b.tensor_left(&permuted).unwrap();
        assert_eq!(t1.dim(), 1);
        assert_eq!(t2.dim(), t1.dim());
        for tp in [tp1, tp2] {
            assert!((&tp.proj * tp.relations.basis()).is_zero());
        }
    }
}

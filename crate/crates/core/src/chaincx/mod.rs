//! Bounded cochain complexes of modules (differentials raise degree), chain
//! maps, homotopies, homology and degreewise tensor products.

mod homotopy;
mod minimize;
mod resolve;

use crate::algebra::AlgRef;
use crate::error::{Error, Result};
use crate::exactlin::{Field, Mat, Subspace};
use crate::modrep::{same_algebra, Bimodule, Module, Side, TensorProduct};

pub(crate) use homotopy::{chain_operator, flat_len, flat_over, null_operator};
pub use homotopy::{homotopy_hom, homotopy_inverse, null_homotopy_witness, HomK, HomotopyInverse, MapSpace};
pub use minimize::{is_minimal, minimize, Minimization};
pub use resolve::{resolve_bounded, resolve_truncated, Resolution};

/// A bounded complex `X^lo -> ... -> X^hi`; terms outside are zero.
#[derive(Clone, Debug)]
pub struct Complex {
    alg: AlgRef,
    lo: i64,
    terms: Vec<Module>,
    /// `diffs[i]` is `d^{lo+i}: X^{lo+i} -> X^{lo+i+1}`.
    diffs: Vec<Mat>,
    zero: Module,
    /// Cut off below `lo` rather than ending there.
    pub truncated: bool,
}

impl Complex {
    pub fn new(alg: AlgRef, lo: i64, terms: Vec<Module>, diffs: Vec<Mat>) -> Result<Complex> {
        if diffs.len() + 1 != terms.len() && !(terms.is_empty() && diffs.is_empty()) {
            return Err(Error::DimensionMismatch("one differential between consecutive terms is required".into()));
        }
        for t in &terms {
            if t.side() != Side::Left || !same_algebra(t.alg(), &alg) {
                return Err(Error::AlgebraMismatch("terms must be left modules over one algebra".into()));
            }
        }
        for (i, d) in diffs.iter().enumerate() {
            if !terms[i].is_morphism(&terms[i + 1], d) {
                return Err(Error::NotAMorphism(format!("d^{} is not a module map", lo + i as i64)));
            }
            if i > 0 && !(d * &diffs[i - 1]).is_zero() {
                return Err(Error::InvalidModule(format!("d^{} d^{} is not zero", lo + i as i64, lo + i as i64 - 1)));
            }
        }
        let zero = Module::zero(alg.clone(), Side::Left);
        Ok(Complex { alg, lo, terms, diffs, zero, truncated: false }.trimmed())
    }

    fn trimmed(mut self) -> Complex {
        while self.terms.last().is_some_and(|t| t.dim() == 0) {
            self.terms.pop();
            self.diffs.pop();
        }
        while self.terms.first().is_some_and(|t| t.dim() == 0) {
            self.terms.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.lo += 1;
        }
        if self.terms.is_empty() {
            self.diffs.clear();
            self.lo = 0;
        }
        self
    }

    pub fn zero(alg: AlgRef) -> Complex {
        Complex::new(alg, 0, Vec::new(), Vec::new()).expect("empty complex is valid")
    }

    /// `M` concentrated in degree `deg`.
    pub fn stalk(m: &Module, deg: i64) -> Result<Complex> {
        Complex::new(m.alg().clone(), deg, vec![m.clone()], Vec::new())
    }

    /// Builds a complex from degree `lo` with terms and differentials given by closures.
    pub fn from_parts(alg: AlgRef, lo: i64, terms: Vec<Module>, diffs: Vec<Mat>) -> Result<Complex> {
        Complex::new(alg, lo, terms, diffs)
    }

    pub fn alg(&self) -> &AlgRef {
        &self.alg
    }
    pub fn field(&self) -> Field {
        self.alg.field()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn lo(&self) -> i64 {
        self.lo
    }
    /// Last nonzero degree; `lo - 1` for the zero complex.
    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }
    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }
    pub fn term(&self, n: i64) -> &Module {
        if n < self.lo || n > self.hi() {
            &self.zero
        } else {
            &self.terms[(n - self.lo) as usize]
        }
    }
    pub fn terms(&self) -> &[Module] {
        &self.terms
    }
    pub fn dim_at(&self, n: i64) -> usize {
        self.term(n).dim()
    }
    pub fn total_dim(&self) -> usize {
        self.terms.iter().map(Module::dim).sum()
    }
    /// `d^n: X^n -> X^{n+1}`.
    pub fn diff(&self, n: i64) -> Mat {
        if n >= self.lo && n < self.hi() {
            self.diffs[(n - self.lo) as usize].clone()
        } else {
            Mat::zeros(self.field(), self.dim_at(n + 1), self.dim_at(n))
        }
    }

    pub fn validate(&self) -> crate::diag::Diagnostics {
        let mut d = crate::diag::Diagnostics::new();
        for n in self.degrees() {
            d.absorb(&format!("term {n}"), self.term(n).validate());
            d.check(self.term(n).is_morphism(self.term(n + 1), &self.diff(n)), || format!("d^{n} is not a module map"));
            d.check((&self.diff(n + 1) * &self.diff(n)).is_zero(), || format!("d^{} d^{n} is not zero", n + 1));
        }
        d
    }

    pub fn direct_sum(&self, other: &Complex) -> Result<Complex> {
        let (lo, hi) = joint_range(&[self, other], 0);
        let f = self.field();
        let terms = (lo..=hi)
            .map(|n| Ok(Module::direct_sum(&[self.term(n), other.term(n)])?.module))
            .collect::<Result<Vec<_>>>()?;
        let diffs = (lo..hi).map(|n| Mat::block_diag(f, &[&self.diff(n), &other.diff(n)])).collect();
        Complex::new(self.alg.clone(), lo, terms, diffs)
    }

    /// `X[k]`: degree `n` holds `X^{n+k}`, differentials negated for odd `k`.
    pub fn shift(&self, k: i64) -> Complex {
        let sign = if k.rem_euclid(2) == 1 { -1 } else { 1 };
        let diffs = self.diffs.iter().map(|d| if sign < 0 { -d } else { d.clone() }).collect();
        Complex { lo: self.lo - k, diffs, ..self.clone() }
    }

    /// `H^n = ker d^n / im d^{n-1}`.
    pub fn homology(&self, n: i64) -> Result<Module> {
        let (k, inc) = self.term(n).kernel_of(&self.diff(n))?;
        let ks = Subspace::span_of_cols(&inc);
        let b = Subspace::span_of_cols(&self.diff(n - 1));
        let bk = Subspace::span_of_vectors(
            self.field(),
            k.dim(),
            &b.vectors().iter().map(|v| ks.coords(v).expect("boundaries are cycles")).collect::<Vec<_>>(),
        );
        Ok(k.quotient(&bk)?.0)
    }

    pub fn homology_dims(&self) -> Result<Vec<(i64, usize)>> {
        self.degrees().map(|n| Ok((n, self.homology(n)?.dim()))).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.degrees().all(|n| self.diff(n).rank() + self.diff(n - 1).rank() == self.dim_at(n))
    }

    /// The identity complex `M -> M` in degrees `deg, deg + 1`.
    pub fn contractible(m: &Module, deg: i64) -> Result<Complex> {
        Complex::new(m.alg().clone(), deg, vec![m.clone(), m.clone()], vec![Mat::identity(m.field(), m.dim())])
    }
}

/// Smallest range containing every support, shifted by `shift` for the
/// second complex onwards.
pub(crate) fn joint_range(cs: &[&Complex], shift: i64) -> (i64, i64) {
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    for (i, c) in cs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let s = if i == 0 { 0 } else { shift };
        lo = lo.min(c.lo() + s);
        hi = hi.max(c.hi() + s);
    }
    if lo > hi {
        (0, -1)
    } else {
        (lo, hi)
    }
}

/// A family of maps `X^n -> Y^{n+shift}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graded {
    pub lo: i64,
    pub shift: i64,
    pub comps: Vec<Mat>,
}

/// A chain map: `shift = 0`.
pub type ChainMap = Graded;
/// A homotopy `h^n: X^n -> Y^{n-1}`: `shift = -1`.
pub type Homotopy = Graded;

impl Graded {
    pub fn from_fn(x: &Complex, y: &Complex, shift: i64, mut comp: impl FnMut(i64) -> Mat) -> Graded {
        let (lo, hi) = joint_range(&[x, y], -shift);
        Graded { lo, shift, comps: (lo..=hi).map(&mut comp).collect() }
    }

    pub fn zero(x: &Complex, y: &Complex, shift: i64) -> Graded {
        let f = x.field();
        Graded::from_fn(x, y, shift, |n| Mat::zeros(f, y.dim_at(n + shift), x.dim_at(n)))
    }

    pub fn identity(x: &Complex) -> ChainMap {
        Graded::from_fn(x, x, 0, |n| Mat::identity(x.field(), x.dim_at(n)))
    }

    /// Component at degree `n`, zero of the right shape outside the stored range.
    pub fn at(&self, n: i64, x: &Complex, y: &Complex) -> Mat {
        let i = n - self.lo;
        if i >= 0 && (i as usize) < self.comps.len() {
            self.comps[i as usize].clone()
        } else {
            Mat::zeros(x.field(), y.dim_at(n + self.shift), x.dim_at(n))
        }
    }

    fn well_shaped(&self, x: &Complex, y: &Complex) -> bool {
        self.comps.iter().enumerate().all(|(i, m)| {
            let n = self.lo + i as i64;
            m.rows() == y.dim_at(n + self.shift) && m.cols() == x.dim_at(n)
        })
    }

    fn covers(&self, x: &Complex) -> bool {
        x.degrees().all(|n| {
            let i = n - self.lo;
            (i >= 0 && (i as usize) < self.comps.len()) || x.dim_at(n) == 0
        })
    }

    /// Degreewise module maps commuting with the differentials (up to the sign `(-1)^shift`).
    pub fn is_chain_map(&self, x: &Complex, y: &Complex) -> bool {
        if !self.covers(x) || !self.well_shaped(x, y) {
            return false;
        }
        let (lo, hi) = joint_range(&[x, y], -self.shift);
        (lo - 1..=hi).all(|n| {
            let f = self.at(n, x, y);
            let ok_mod = x.term(n).is_morphism(y.term(n + self.shift), &f);
            let lhs = &y.diff(n + self.shift) * &f;
            let rhs = &self.at(n + 1, x, y) * &x.diff(n);
            ok_mod && if self.shift % 2 == 0 { lhs == rhs } else { lhs == -&rhs }
        })
    }

    /// Degreewise module maps (no commutation asked).
    pub fn is_graded_morphism(&self, x: &Complex, y: &Complex) -> bool {
        self.covers(x)
            && (x.lo()..=x.hi()).all(|n| x.term(n).is_morphism(y.term(n + self.shift), &self.at(n, x, y)))
    }

    /// `self ∘ first` for `first: X -> Y`, `self: Y -> Z`.
    pub fn after(&self, first: &Graded, x: &Complex, y: &Complex, z: &Complex) -> Graded {
        let shift = self.shift + first.shift;
        Graded::from_fn(x, z, shift, |n| &self.at(n + first.shift, y, z) * &first.at(n, x, y))
    }

    pub fn add(&self, other: &Graded, x: &Complex, y: &Complex) -> Graded {
        Graded::from_fn(x, y, self.shift, |n| &self.at(n, x, y) + &other.at(n, x, y))
    }

    pub fn sub(&self, other: &Graded, x: &Complex, y: &Complex) -> Graded {
        Graded::from_fn(x, y, self.shift, |n| &self.at(n, x, y) - &other.at(n, x, y))
    }

    pub fn scale(&self, s: &crate::exactlin::Scalar) -> Graded {
        Graded { comps: self.comps.iter().map(|m| m.scale(s)).collect(), ..self.clone() }
    }

    pub fn is_zero_map(&self) -> bool {
        self.comps.iter().all(Mat::is_zero)
    }

    /// `d_Y h + h d_X` for a homotopy `h`.
    pub fn boundary(&self, x: &Complex, y: &Complex) -> ChainMap {
        debug_assert_eq!(self.shift, -1);
        Graded::from_fn(x, y, 0, |n| &(&y.diff(n - 1) * &self.at(n, x, y)) + &(&self.at(n + 1, x, y) * &x.diff(n)))
    }

    /// Every component invertible.
    pub fn is_degreewise_iso(&self, x: &Complex, y: &Complex) -> bool {
        let (lo, hi) = joint_range(&[x, y], 0);
        (lo..=hi).all(|n| {
            let m = self.at(n, x, y);
            m.is_square() && m.is_invertible()
        })
    }

    /// Inverse of a degreewise invertible chain map.
    pub fn inverse(&self, x: &Complex, y: &Complex) -> Option<ChainMap> {
        let (lo, hi) = joint_range(&[x, y], 0);
        let comps = (lo..=hi).map(|n| self.at(n, x, y).inverse()).collect::<Option<Vec<_>>>()?;
        Some(Graded { lo, shift: 0, comps })
    }
}

/// `f - g = d h + h d`.
pub fn verify_homotopy(f: &ChainMap, g: &ChainMap, h: &Homotopy, x: &Complex, y: &Complex) -> bool {
    h.shift == -1 && h.is_graded_morphism(x, y) && f.sub(g, x, y).sub(&h.boundary(x, y), x, y).is_zero_map()
}

/// `cone(f)^n = X^{n+1} ⊕ Y^n`, `d(x, y) = (-d x, f x + d y)`.
pub fn cone(f: &ChainMap, x: &Complex, y: &Complex) -> Result<Complex> {
    let fl = x.field();
    let (lo, hi) = joint_range(&[&x.shift(1), y], 0);
    if lo > hi {
        return Ok(Complex::zero(x.alg().clone()));
    }
    let terms = (lo..=hi)
        .map(|n| Ok(Module::direct_sum(&[x.term(n + 1), y.term(n)])?.module))
        .collect::<Result<Vec<_>>>()?;
    let diffs = (lo..hi)
        .map(|n| {
            let (a0, b0, a1, b1) = (x.dim_at(n + 1), y.dim_at(n), x.dim_at(n + 2), y.dim_at(n + 1));
            let mut d = Mat::zeros(fl, a1 + b1, a0 + b0);
            d.set_block(0, 0, &-&x.diff(n + 1));
            d.set_block(a1, 0, &f.at(n + 1, x, y));
            d.set_block(a1, a0, &y.diff(n));
            d
        })
        .collect();
    Complex::new(x.alg().clone(), lo, terms, diffs)
}

/// The map induced on `H^n`.
pub fn homology_map(f: &ChainMap, x: &Complex, y: &Complex, n: i64) -> Result<Mat> {
    let fl = x.field();
    let cycles = |c: &Complex| Subspace::kernel_of(&c.diff(n));
    let (zx, zy) = (cycles(x), cycles(y));
    let (bx, by) = (Subspace::span_of_cols(&x.diff(n - 1)), Subspace::span_of_cols(&y.diff(n - 1)));
    let in_z = |z: &Subspace, b: &Subspace| {
        Subspace::span_of_vectors(fl, z.dim(), &b.vectors().iter().map(|v| z.coords_unchecked(v)).collect::<Vec<_>>())
    };
    let qx = in_z(&zx, &bx).ambient_quotient();
    let qy = in_z(&zy, &by).ambient_quotient();
    let fn_ = f.at(n, x, y);
    let cols = (0..qx.dim())
        .map(|s| {
            let v = zx.basis().mul_vec(&qx.lift.col(s));
            let w = fn_.mul_vec(&v);
            let c = zy.coords(&w).ok_or_else(|| Error::NotAMorphism("map does not preserve cycles".into()))?;
            Ok(qy.proj.mul_vec(&c))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Mat::from_cols(fl, qy.dim(), &cols))
}

/// Induced maps on homology are isomorphisms in every degree.
pub fn is_quasi_iso(f: &ChainMap, x: &Complex, y: &Complex) -> Result<bool> {
    let (lo, hi) = joint_range(&[x, y], 0);
    for n in lo..=hi {
        let h = homology_map(f, x, y, n)?;
        if !(h.is_square() && h.is_invertible()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `B ⊗ X` degreewise, with the tensor coordinates of each degree.
#[derive(Clone, Debug)]
pub struct TensoredComplex {
    pub complex: Complex,
    /// Tensor data for degrees `src_lo ..`.
    pub src_lo: i64,
    pub tps: Vec<TensorProduct>,
}

impl TensoredComplex {
    pub fn tp(&self, n: i64) -> Option<&TensorProduct> {
        let i = n - self.src_lo;
        (i >= 0).then(|| self.tps.get(i as usize)).flatten()
    }
}

pub fn tensor_complex(b: &Bimodule, x: &Complex) -> Result<TensoredComplex> {
    let f = x.field();
    let mut terms = Vec::new();
    let mut tps = Vec::new();
    for n in x.degrees() {
        let (m, tp) = b.tensor_left(x.term(n))?;
        terms.push(m);
        tps.push(tp);
    }
    let id = Mat::identity(f, b.dim);
    let diffs = (x.lo()..x.hi())
        .map(|n| {
            let i = (n - x.lo()) as usize;
            TensorProduct::map_between(&tps[i], &tps[i + 1], &id, &x.diff(n))
        })
        .collect();
    if x.is_zero() {
        return Ok(TensoredComplex { complex: Complex::zero(b.left.clone()), src_lo: 0, tps });
    }
    // keep zero terms aligned with tps; trimming only drops zero-dimensional ends
    let complex = Complex::new(b.left.clone(), x.lo(), terms, diffs)?;
    Ok(TensoredComplex { complex, src_lo: x.lo(), tps })
}

/// `B ⊗ f` for a graded map between complexes tensored by the same bimodule.
pub fn tensor_map(b: &Bimodule, g: &Graded, x: &Complex, y: &Complex, tx: &TensoredComplex, ty: &TensoredComplex) -> Graded {
    let f = x.field();
    let id = Mat::identity(f, b.dim);
    Graded::from_fn(&tx.complex, &ty.complex, g.shift, |n| match (tx.tp(n), ty.tp(n + g.shift)) {
        (Some(s), Some(t)) => TensorProduct::map_between(s, t, &id, &g.at(n, x, y)),
        _ => Mat::zeros(f, ty.complex.dim_at(n + g.shift), tx.complex.dim_at(n)),
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use std::sync::Arc;

    use super::*;

    pub fn dual_numbers(f: Field) -> AlgRef {
        Arc::new(crate::triples::fixtures::dual_numbers(f))
    }

    pub fn simple(a: &AlgRef) -> Module {
        let f = a.field();
        Module::new(a.clone(), Side::Left, 1, vec![Mat::identity(f, 1), Mat::zeros(f, 1, 1)]).unwrap()
    }

    /// Multiplication by `x` on `A = k[x]/x^2`.
    pub fn times_x(a: &AlgRef) -> Mat {
        a.right_mult_matrix(&a.basis_vec(1))
    }

    /// `A -x-> A -x-> ... ` with `len` terms starting at `lo`.
    pub fn periodic(a: &AlgRef, lo: i64, len: usize) -> Complex {
        let terms = vec![Module::regular(a.clone()); len];
        let diffs = vec![times_x(a); len.saturating_sub(1)];
        Complex::new(a.clone(), lo, terms, diffs).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn contractible_has_no_homology() {
        let f = Field::Rationals;
        let a = dual_numbers(f);
        let c = Complex::contractible(&Module::regular(a), 0).unwrap();
        assert!(c.homology_dims().unwrap().iter().all(|&(_, d)| d == 0));
        assert!(c.is_acyclic());
    }

    #[test]
    fn stalk_homology() {
        let f = Field::prime(3).unwrap();
        let a = dual_numbers(f);
        let c = Complex::stalk(&Module::regular(a), 2).unwrap();
        assert_eq!(c.homology(2).unwrap().dim(), 2);
        assert_eq!(c.homology(1).unwrap().dim(), 0);
        assert_eq!(c.homology(3).unwrap().dim(), 0);
    }

    #[test]
    fn truncated_resolution_homology() {
        // A -x-> A in degrees -1, 0: H^0 = k, H^-1 = k (the kernel x A)
        let f = Field::Rationals;
        let a = dual_numbers(f);
        let c = periodic(&a, -1, 2);
        assert_eq!(c.homology_dims().unwrap(), vec![(-1, 1), (0, 1)]);
        let c3 = periodic(&a, -2, 3);
        assert_eq!(c3.homology_dims().unwrap(), vec![(-2, 1), (-1, 0), (0, 1)]);
    }

    #[test]
    fn bad_differentials_rejected() {
        let f = Field::Rationals;
        let a = dual_numbers(f);
        let r = Module::regular(a.clone());
        assert!(Complex::new(a.clone(), 0, vec![r.clone(), r.clone(), r.clone()], vec![Mat::identity(f, 2); 2]).is_err());
        let not_linear = Mat::from_i64(f, &[vec![0, 1], vec![0, 0]]).transpose();
        let ok = Complex::new(a.clone(), 0, vec![r.clone(), r.clone()], vec![not_linear.clone()]);
        assert_eq!(ok.is_ok(), Module::regular(a).is_morphism(&r, &not_linear));
    }

    #[test]
    fn quasi_iso_matches_cone() {
        let f = Field::prime(2).unwrap();
        let a = dual_numbers(f);
        let x = periodic(&a, -1, 2);
        let s = Complex::stalk(&simple(&a), 0).unwrap();
        // the augmentation A -> k in degree 0
        let aug = Graded::from_fn(&x, &s, 0, |n| {
            if n == 0 {
                Mat::from_i64(f, &[vec![1, 0]])
            } else {
                Mat::zeros(f, s.dim_at(n), x.dim_at(n))
            }
        });
        assert!(aug.is_chain_map(&x, &s));
        // H^-1 of x is nonzero, so not a quasi-isomorphism
        assert!(!is_quasi_iso(&aug, &x, &s).unwrap());
        assert!(!cone(&aug, &x, &s).unwrap().is_acyclic());
        let id = Graded::identity(&x);
        assert!(is_quasi_iso(&id, &x, &x).unwrap());
        assert!(cone(&id, &x, &x).unwrap().is_acyclic());
        let z = Graded::zero(&s, &s, 0);
        assert!(!is_quasi_iso(&z, &s, &s).unwrap());
        assert!(!cone(&z, &s, &s).unwrap().is_acyclic());
    }

    #[test]
    fn tensoring() {
        let f = Field::Rationals;
        let a = dual_numbers(f);
        let x = periodic(&a, 0, 3);
        let reg = Bimodule::regular(a.clone());
        let t = tensor_complex(&reg, &x).unwrap();
        assert_eq!(t.complex.total_dim(), x.total_dim());
        assert_eq!(t.complex.homology_dims().unwrap(), x.homology_dims().unwrap());
        // k ⊗_A - through A -> k halves the dimensions
        let k = std::sync::Arc::new(crate::algebra::Algebra::ground(f));
        let pi = crate::algebra::AlgebraMorphism::new(a.clone(), k.clone(), Mat::from_i64(f, &[vec![1, 0]])).unwrap();
        let b = Bimodule::via(&crate::algebra::AlgebraMorphism::identity(k.clone()), &pi).unwrap();
        let t = tensor_complex(&b, &x).unwrap();
        assert_eq!((0..3).map(|n| t.complex.dim_at(n)).collect::<Vec<_>>(), vec![1, 1, 1]);
        let zero_b = Bimodule::new(k.clone(), a.clone(), 0, vec![Mat::zeros(f, 0, 0)], vec![Mat::zeros(f, 0, 0); 2]).unwrap();
        assert!(tensor_complex(&zero_b, &x).unwrap().complex.is_zero());
    }
}

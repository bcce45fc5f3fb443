use super::mat::{rref, Mat};
use super::scalar::{Field, Scalar};

/// A subspace of `k^n` stored by a pivot-normalised column basis: basis
/// column `t` has a 1 in row `pivots[t]` and 0 in every other pivot row.
/// Coordinates of a member are therefore read off at the pivot rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: Mat,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { basis: Mat::zeros(field, ambient, 0), pivots: Vec::new() }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace { basis: Mat::identity(field, ambient), pivots: (0..ambient).collect() }
    }

    /// Reduced kernel basis: one vector per free column of the RREF.
    pub fn kernel_of(a: &Mat) -> Subspace {
        let field = a.field();
        let n = a.cols();
        let r = rref(a);
        let mut is_pivot = vec![false; n];
        for &c in &r.pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut basis = Mat::zeros(field, n, free.len());
        for (t, &f) in free.iter().enumerate() {
            basis[(f, t)] = field.one();
            for (k, &c) in r.pivots.iter().enumerate() {
                let v = &r.mat[(k, f)];
                if !v.is_zero() {
                    basis[(c, t)] = -v;
                }
            }
        }
        Subspace { basis, pivots: free }
    }

    /// Span of the columns of `s`; the basis is the transposed RREF of `s^T`.
    pub fn span_of_cols(s: &Mat) -> Subspace {
        let r = rref(&s.transpose());
        let k = r.pivots.len();
        let basis = r.mat.block(0, 0, k, s.rows()).transpose();
        Subspace { basis, pivots: r.pivots }
    }

    pub fn span_of_vectors(field: Field, ambient: usize, vs: &[Vec<Scalar>]) -> Subspace {
        Subspace::span_of_cols(&Mat::from_cols(field, ambient, vs))
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }
    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }
    pub fn basis(&self) -> &Mat {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn vector(&self, t: usize) -> Vec<Scalar> {
        self.basis.col(t)
    }
    pub fn vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim()).map(|t| self.vector(t)).collect()
    }

    /// Coordinates of `v`, assuming `v` lies in the subspace.
    pub fn coords_unchecked(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    /// Coordinates of `v`, or `None` if `v` is not a member.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let c = self.coords_unchecked(v);
        if self.basis.mul_vec(&c) == v {
            Some(c)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coords(v).is_some()
    }

    /// Matrix reading coordinates (rows at the pivots).
    pub fn coord_matrix(&self) -> Mat {
        let n = self.ambient();
        let f = self.field();
        Mat::from_fn(f, self.dim(), n, |t, j| if self.pivots[t] == j { f.one() } else { f.zero() })
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.vectors().iter().all(|v| self.contains(v))
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let f = self.field();
        Subspace::span_of_cols(&Mat::hstack(f, self.ambient(), &[&self.basis, &other.basis]))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let f = self.field();
        let joint = Mat::hstack(f, self.ambient(), &[&self.basis, &-&other.basis]);
        let k = joint.kernel();
        let a = k.basis().block(0, 0, self.dim(), k.dim());
        Subspace::span_of_cols(&(&self.basis * &a))
    }

    /// Image of the subspace under a linear map.
    pub fn map(&self, m: &Mat) -> Subspace {
        Subspace::span_of_cols(&(m * &self.basis))
    }

    /// The quotient `k^n / self`, with complement coordinates at the
    /// non-pivot rows.
    pub fn ambient_quotient(&self) -> Quotient {
        let f = self.field();
        let n = self.ambient();
        let mut is_pivot = vec![false; n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let comp: Vec<usize> = (0..n).filter(|&i| !is_pivot[i]).collect();
        let q = comp.len();
        let mut proj = Mat::zeros(f, q, n);
        for (s, &c) in comp.iter().enumerate() {
            proj[(s, c)] = f.one();
            for (t, &p) in self.pivots.iter().enumerate() {
                let b = &self.basis[(c, t)];
                if !b.is_zero() {
                    proj[(s, p)] = -b;
                }
            }
        }
        let mut lift = Mat::zeros(f, n, q);
        for (s, &c) in comp.iter().enumerate() {
            lift[(c, s)] = f.one();
        }
        Quotient { proj, lift }
    }

    /// The quotient `self / sub` for a subspace `sub` of `self`; the
    /// projection accepts ambient vectors lying in `self`.
    pub fn quotient_by(&self, sub: &Subspace) -> Quotient {
        let f = self.field();
        let sub_coords: Vec<Vec<Scalar>> = sub
            .vectors()
            .iter()
            .map(|v| self.coords(v).expect("quotient_by: not a subspace"))
            .collect();
        let inner = Subspace::span_of_vectors(f, self.dim(), &sub_coords).ambient_quotient();
        Quotient { proj: &inner.proj * &self.coord_matrix(), lift: &self.basis * &inner.lift }
    }
}

/// A quotient map with a chosen section: `proj * lift = id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub proj: Mat,
    pub lift: Mat,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.proj.rows()
    }
}

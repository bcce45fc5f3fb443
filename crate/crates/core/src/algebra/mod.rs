//! Finite-dimensional associative algebras given by structure constants.

mod idempotents;
mod matrix_rings;
mod morphism;
mod pullback;
mod radical;

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::diag::Diagnostics;
use crate::error::{Error, Result};
use crate::exactlin::{axpy, is_zero_vec, unit_vec, zero_vec, Field, Mat, Scalar, Subspace};

pub use idempotents::{lift_idempotents, primitivity, split_commutative_semisimple, Primitivity};
pub use matrix_rings::{gamma_prime, triangular, GammaPrimeLayout, TriangularLayout};
pub use morphism::AlgebraMorphism;
pub use pullback::{pullback, PullbackData};
pub use radical::{
    is_nilpotent_ideal, superfluity_verdict, trace_form_radical, trace_form_valid, verify_radical, Maximality,
    RadicalReport, SuperfluityVerdict,
};

/// How a radical attached to an algebra was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadicalSource {
    /// Given in the input; only nilpotency and two-sidedness are checked.
    Supplied,
    /// Kernel of the trace form.
    TraceForm,
    /// Known from the way the algebra was built, with a semisimple quotient.
    Structural,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Radical {
    pub space: Subspace,
    pub source: RadicalSource,
}

/// An associative unital algebra with a chosen basis `b_0, .., b_{d-1}`.
///
/// `lmul[i]` is the matrix of left multiplication by `b_i`; its column `j`
/// holds the coordinates of `b_i b_j`.
#[derive(Clone)]
pub struct Algebra {
    field: Field,
    names: Vec<String>,
    lmul: Vec<Mat>,
    rmul: Vec<Mat>,
    unit: Vec<Scalar>,
    rad: Option<Radical>,
    idems: Option<Vec<Vec<Scalar>>>,
    gens: Vec<usize>,
    op: OnceLock<Arc<Algebra>>,
}

/// Equality of the multiplication tables; attached data is ignored.
impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.unit == other.unit && self.lmul == other.lmul
    }
}
impl Eq for Algebra {}

pub type AlgRef = Arc<Algebra>;

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra(dim {} over {}, basis {:?})", self.dim(), self.field, self.names)
    }
}

impl Algebra {
    /// Build from a product rule on basis vectors. No validation is done.
    pub fn from_products(
        field: Field,
        names: Vec<String>,
        unit: Vec<Scalar>,
        mut product: impl FnMut(usize, usize) -> Vec<Scalar>,
    ) -> Algebra {
        let d = names.len();
        let mut lmul = vec![Mat::zeros(field, d, d); d];
        for (i, l) in lmul.iter_mut().enumerate() {
            for j in 0..d {
                let v = product(i, j);
                for (k, x) in v.into_iter().enumerate() {
                    if !x.is_zero() {
                        l[(k, j)] = x;
                    }
                }
            }
        }
        Algebra::from_left_mult(field, names, unit, lmul)
    }

    /// Build from sparse triples `(i, j, k, c)` meaning `b_i b_j` has `c` at `b_k`.
    pub fn from_triples(
        field: Field,
        names: Vec<String>,
        unit: Vec<Scalar>,
        triples: &[(usize, usize, usize, Scalar)],
    ) -> Result<Algebra> {
        let d = names.len();
        let mut lmul = vec![Mat::zeros(field, d, d); d];
        for (i, j, k, c) in triples {
            if *i >= d || *j >= d || *k >= d {
                return Err(Error::InvalidAlgebra(format!("structure constant index ({i},{j},{k}) out of range")));
            }
            let cur = lmul[*i][(*k, *j)].clone();
            lmul[*i][(*k, *j)] = &cur + c;
        }
        if unit.len() != d {
            return Err(Error::InvalidAlgebra(format!("unit has {} coordinates, basis has {d}", unit.len())));
        }
        Ok(Algebra::from_left_mult(field, names, unit, lmul))
    }

    fn from_left_mult(field: Field, names: Vec<String>, unit: Vec<Scalar>, lmul: Vec<Mat>) -> Algebra {
        let d = names.len();
        let rmul = (0..d)
            .map(|j| Mat::from_fn(field, d, d, |k, i| lmul[i][(k, j)].clone()))
            .collect();
        let mut a = Algebra { field, names, lmul, rmul, unit, rad: None, idems: None, gens: Vec::new(), op: OnceLock::new() };
        a.gens = a.greedy_generators();
        a
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground(field: Field) -> Algebra {
        Algebra::from_products(field, vec!["1".into()], vec![field.one()], |_, _| vec![field.one()])
    }

    /// `k[x]/(x^n)` with basis `1, x, .., x^{n-1}`.
    pub fn truncated_polynomial(field: Field, var: &str, n: usize) -> Algebra {
        assert!(n >= 1);
        let names = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            })
            .collect();
        Algebra::from_products(field, names, unit_vec(field, n, 0), |i, j| {
            if i + j < n {
                unit_vec(field, n, i + j)
            } else {
                zero_vec(field, n)
            }
        })
    }

    /// `k^n` with componentwise multiplication.
    pub fn split_semisimple(field: Field, n: usize) -> Algebra {
        let names = (0..n).map(|i| format!("e{i}")).collect();
        Algebra::from_products(field, names, vec![field.one(); n], |i, j| {
            if i == j {
                unit_vec(field, n, i)
            } else {
                zero_vec(field, n)
            }
        })
    }

    /// Full matrix algebra with basis the matrix units `E_ij` (row-major).
    pub fn matrix_algebra(field: Field, n: usize) -> Algebra {
        let d = n * n;
        let names = (0..d).map(|t| format!("E{}{}", t / n, t % n)).collect();
        let mut unit = zero_vec(field, d);
        for i in 0..n {
            unit[i * n + i] = field.one();
        }
        Algebra::from_products(field, names, unit, |s, t| {
            let (i, j) = (s / n, s % n);
            let (k, l) = (t / n, t % n);
            if j == k {
                unit_vec(field, d, i * n + l)
            } else {
                zero_vec(field, d)
            }
        })
    }

    /// Direct product `A x B` with basis `A ⊎ B`.
    pub fn product(a: &Algebra, b: &Algebra) -> Algebra {
        let f = a.field;
        let (da, db) = (a.dim(), b.dim());
        let names = a
            .names
            .iter()
            .map(|n| format!("({n},0)"))
            .chain(b.names.iter().map(|n| format!("(0,{n})")))
            .collect();
        let unit = a.unit.iter().chain(b.unit.iter()).cloned().collect();
        let mut out = Algebra::from_products(f, names, unit, |i, j| {
            let mut v = zero_vec(f, da + db);
            if i < da && j < da {
                v[..da].clone_from_slice(&a.lmul[i].col(j));
            } else if i >= da && j >= da {
                v[da..].clone_from_slice(&b.lmul[i - da].col(j - da));
            }
            v
        });
        if let (Some(ra), Some(rb)) = (&a.rad, &b.rad) {
            let mut vs: Vec<Vec<Scalar>> = ra.space.vectors().into_iter().map(|v| [v, zero_vec(f, db)].concat()).collect();
            vs.extend(rb.space.vectors().into_iter().map(|v| [zero_vec(f, da), v].concat()));
            let source = if ra.source == RadicalSource::Supplied || rb.source == RadicalSource::Supplied {
                RadicalSource::Supplied
            } else {
                RadicalSource::Structural
            };
            out.rad = Some(Radical { space: Subspace::span_of_vectors(f, da + db, &vs), source });
        }
        if let (Some(ia), Some(ib)) = (&a.idems, &b.idems) {
            let mut es: Vec<Vec<Scalar>> = ia.iter().map(|v| [v.clone(), zero_vec(f, db)].concat()).collect();
            es.extend(ib.iter().map(|v| [zero_vec(f, da), v.clone()].concat()));
            out.idems = Some(es);
        }
        out
    }

    /// The opposite algebra, same basis.
    pub fn opposite(&self) -> Algebra {
        let mut out = Algebra::from_products(self.field, self.names.clone(), self.unit.clone(), |i, j| {
            self.lmul[j].col(i)
        });
        out.rad = self.rad.clone();
        out.idems = self.idems.clone();
        out
    }

    /// Shared opposite algebra, built once.
    pub fn opposite_ref(&self) -> AlgRef {
        self.op.get_or_init(|| Arc::new(self.opposite())).clone()
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn dim(&self) -> usize {
        self.names.len()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }
    pub fn basis_vec(&self, i: usize) -> Vec<Scalar> {
        unit_vec(self.field, self.dim(), i)
    }
    pub fn zero_elem(&self) -> Vec<Scalar> {
        zero_vec(self.field, self.dim())
    }
    /// Left multiplication by `b_i`.
    pub fn lmul(&self, i: usize) -> &Mat {
        &self.lmul[i]
    }
    /// Right multiplication by `b_j`.
    pub fn rmul(&self, j: usize) -> &Mat {
        &self.rmul[j]
    }
    /// Basis indices generating the algebra.
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    /// Coordinates of `b_i b_j`.
    pub fn sc(&self, i: usize, j: usize) -> Vec<Scalar> {
        self.lmul[i].col(j)
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.zero_elem();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let ly = self.lmul[i].mul_vec(y);
            axpy(&mut out, xi, &ly);
        }
        out
    }

    /// Matrix of `y -> x y`.
    pub fn left_mult_matrix(&self, x: &[Scalar]) -> Mat {
        self.combine(&self.lmul, x)
    }

    /// Matrix of `y -> y x`.
    pub fn right_mult_matrix(&self, x: &[Scalar]) -> Mat {
        self.combine(&self.rmul, x)
    }

    fn combine(&self, mats: &[Mat], x: &[Scalar]) -> Mat {
        let d = self.dim();
        let mut out = Mat::zeros(self.field, d, d);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                out = &out + &mats[i].scale(xi);
            }
        }
        out
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| self.lmul[i] == self.rmul[i])
    }

    /// Check associativity and the unit laws, naming every failing identity.
    pub fn validate(&self) -> Diagnostics {
        let mut diag = Diagnostics::new();
        let d = self.dim();
        for l in &self.lmul {
            if l.rows() != d || l.cols() != d || l.field() != self.field {
                diag.fail("structure constants have inconsistent shape");
                return diag;
            }
        }
        if self.unit.len() != d {
            diag.fail("unit vector has wrong length");
            return diag;
        }
        // (b_i b_j) b_m = b_i (b_j b_m), compared coordinate k
        'outer: for i in 0..d {
            for j in 0..d {
                let lhs = self.left_mult_matrix(&self.sc(i, j));
                let rhs = &self.lmul[i] * &self.lmul[j];
                if lhs != rhs {
                    for m in 0..d {
                        for k in 0..d {
                            if lhs[(k, m)] != rhs[(k, m)] {
                                diag.fail(format!(
                                    "associativity fails at (i,j,m,k) = ({i},{j},{m},{k}): ({}*{})*{} has {} at {}, {}*({}*{}) has {}",
                                    self.names[i], self.names[j], self.names[m], lhs[(k, m)], self.names[k],
                                    self.names[i], self.names[j], self.names[m], rhs[(k, m)]
                                ));
                                if diag.failures.len() >= 16 {
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
        }
        for j in 0..d {
            let e = self.basis_vec(j);
            if self.mul(&self.unit, &e) != e {
                diag.fail(format!("unit law fails: unit*{} != {}", self.names[j], self.names[j]));
            }
            if self.mul(&e, &self.unit) != e {
                diag.fail(format!("unit law fails: {}*unit != {}", self.names[j], self.names[j]));
            }
        }
        if let Some(r) = &self.rad {
            if !self.is_two_sided_ideal(&r.space) {
                diag.fail("radical is not a two-sided ideal");
            } else if is_nilpotent_ideal(self, &r.space).is_none() {
                diag.fail("radical is not nilpotent");
            }
        }
        if let Some(es) = &self.idems {
            diag.absorb("idempotents", self.check_complete_orthogonal(es));
        }
        diag
    }

    pub fn validated(self) -> Result<Algebra> {
        let d = self.validate();
        match d.first_failure() {
            None => Ok(self),
            Some(f) => Err(Error::InvalidAlgebra(f.to_string())),
        }
    }

    /// Check pairwise orthogonal idempotents summing to the unit.
    pub fn check_complete_orthogonal(&self, es: &[Vec<Scalar>]) -> Diagnostics {
        let mut diag = Diagnostics::new();
        let mut sum = self.zero_elem();
        for (i, e) in es.iter().enumerate() {
            if e.len() != self.dim() {
                diag.fail(format!("idempotent {i} has wrong length"));
                return diag;
            }
            sum = crate::exactlin::add_vec(&sum, e);
            for (j, f) in es.iter().enumerate() {
                let p = self.mul(e, f);
                if i == j {
                    diag.check(p == *e, || format!("e{i}^2 != e{i}"));
                    diag.check(!is_zero_vec(e), || format!("e{i} is zero"));
                } else {
                    diag.check(is_zero_vec(&p), || format!("e{i}*e{j} != 0"));
                }
            }
        }
        diag.check(sum == self.unit, || "idempotents do not sum to the unit".to_string());
        diag
    }

    /// Attach a supplied radical after checking it is a nilpotent two-sided ideal.
    pub fn with_supplied_radical(self, space: Subspace) -> Result<Algebra> {
        self.with_radical(Radical { space, source: RadicalSource::Supplied })
    }

    pub(crate) fn with_radical(mut self, rad: Radical) -> Result<Algebra> {
        if rad.space.ambient() != self.dim() {
            return Err(Error::DimensionMismatch("radical lives in the wrong space".into()));
        }
        if !self.is_two_sided_ideal(&rad.space) {
            return Err(Error::InvalidAlgebra("supplied radical is not a two-sided ideal".into()));
        }
        if is_nilpotent_ideal(&self, &rad.space).is_none() {
            return Err(Error::InvalidAlgebra("supplied radical is not nilpotent".into()));
        }
        self.rad = Some(rad);
        Ok(self)
    }

    /// Attach a complete list of orthogonal idempotents.
    pub fn with_idempotents(mut self, es: Vec<Vec<Scalar>>) -> Result<Algebra> {
        let d = self.check_complete_orthogonal(&es);
        if let Some(f) = d.first_failure() {
            return Err(Error::InvalidAlgebra(f.to_string()));
        }
        self.idems = Some(es);
        Ok(self)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Algebra {
        assert_eq!(names.len(), self.dim());
        self.names = names;
        self
    }

    pub fn radical_info(&self) -> Option<&Radical> {
        self.rad.as_ref()
    }

    pub fn supplied_idempotents(&self) -> Option<&[Vec<Scalar>]> {
        self.idems.as_deref()
    }

    /// The Jacobson radical: the attached one, or the trace-form kernel when that is valid.
    pub fn radical(&self) -> Result<Radical> {
        if let Some(r) = &self.rad {
            return Ok(r.clone());
        }
        if !trace_form_valid(self) {
            return Err(Error::MissingData(format!(
                "radical of a {}-dimensional algebra over {} needs to be supplied (trace form criterion needs characteristic 0 or p > dimension)",
                self.dim(),
                self.field
            )));
        }
        let space = trace_form_radical(self)?;
        Ok(Radical { space, source: RadicalSource::TraceForm })
    }

    /// Attach the radical computed by [`Algebra::radical`], if available.
    pub fn with_computed_radical(self) -> Result<Algebra> {
        if self.rad.is_some() {
            return Ok(self);
        }
        let r = self.radical()?;
        self.with_radical(r)
    }

    /// A complete list of orthogonal primitive idempotents.
    pub fn primitive_idempotents(&self) -> Result<Vec<Vec<Scalar>>> {
        if let Some(es) = &self.idems {
            return Ok(es.clone());
        }
        idempotents::automatic_primitive_idempotents(self)
    }

    /// Attach automatically computed primitive idempotents (and radical).
    pub fn with_computed_idempotents(self) -> Result<Algebra> {
        let a = self.with_computed_radical()?;
        if a.idems.is_some() {
            return Ok(a);
        }
        let es = a.primitive_idempotents()?;
        a.with_idempotents(es)
    }

    pub fn is_two_sided_ideal(&self, j: &Subspace) -> bool {
        j.vectors().iter().all(|v| {
            (0..self.dim()).all(|i| j.contains(&self.lmul[i].mul_vec(v)) && j.contains(&self.rmul[i].mul_vec(v)))
        })
    }

    /// `span { x y : x in X, y in Y }`.
    pub fn subspace_product(&self, x: &Subspace, y: &Subspace) -> Subspace {
        let mut vs = Vec::new();
        for u in x.vectors() {
            for v in y.vectors() {
                vs.push(self.mul(&u, &v));
            }
        }
        Subspace::span_of_vectors(self.field, self.dim(), &vs)
    }

    /// `span { x b : x in X, b in S }`
    fn extend_by_right(&self, x: &Subspace, s: &[usize]) -> Subspace {
        let mut vs = x.vectors();
        for u in x.vectors() {
            for &g in s {
                vs.push(self.rmul[g].mul_vec(&u));
            }
        }
        Subspace::span_of_vectors(self.field, self.dim(), &vs)
    }

    /// The subalgebra generated by the basis vectors with the given indices.
    pub fn generated_subalgebra(&self, gens: &[usize]) -> Subspace {
        let mut cur = Subspace::span_of_vectors(self.field, self.dim(), std::slice::from_ref(&self.unit));
        loop {
            let next = self.extend_by_right(&cur, gens);
            if next.dim() == cur.dim() {
                return cur;
            }
            cur = next;
        }
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let d = self.dim();
        let mut gens = Vec::new();
        let mut span = Subspace::span_of_vectors(self.field, d, std::slice::from_ref(&self.unit));
        for i in 0..d {
            if span.dim() == d {
                break;
            }
            if !span.contains(&self.basis_vec(i)) {
                gens.push(i);
                span = self.generated_subalgebra(&gens);
            }
        }
        gens
    }

    /// `A / J` for a two-sided ideal `J`, with the quotient map.
    pub fn quotient_algebra(&self, j: &Subspace) -> (Algebra, crate::exactlin::Quotient) {
        let q = j.ambient_quotient();
        let n = q.dim();
        let lifts: Vec<Vec<Scalar>> = (0..n).map(|s| q.lift.col(s)).collect();
        let names = (0..n).map(|s| format!("[{}]", self.names[q.lift.col(s).iter().position(|x| !x.is_zero()).unwrap()])).collect();
        let unit = q.proj.mul_vec(&self.unit);
        let a = Algebra::from_products(self.field, names, unit, |s, t| q.proj.mul_vec(&self.mul(&lifts[s], &lifts[t])));
        (a, q)
    }

    /// The subspace `e A f`.
    pub fn corner(&self, e: &[Scalar], f: &[Scalar]) -> Subspace {
        let vs: Vec<Vec<Scalar>> = (0..self.dim()).map(|i| self.mul(&self.mul(e, &self.basis_vec(i)), f)).collect();
        Subspace::span_of_vectors(self.field, self.dim(), &vs)
    }

    /// Render an element as a linear combination of basis names.
    pub fn format_elem(&self, x: &[Scalar]) -> String {
        let terms: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| if c.is_one() { self.names[i].clone() } else { format!("{c}*{}", self.names[i]) })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_numbers_validate() {
        for f in [Field::prime(2).unwrap(), Field::Rationals] {
            let a = Algebra::truncated_polynomial(f, "x", 2);
            assert!(a.validate().ok());
            assert!(a.is_commutative());
            assert_eq!(a.generators(), &[1]);
        }
    }

    #[test]
    fn hand_checked_associativity_of_dual_numbers() {
        // the 8 identities (b_i b_j) b_m = b_i (b_j b_m) for i,j,m in {1,x}
        let f = Field::prime(2).unwrap();
        let a = Algebra::truncated_polynomial(f, "x", 2);
        let b = [a.basis_vec(0), a.basis_vec(1)];
        let x2 = a.mul(&b[1], &b[1]);
        assert!(is_zero_vec(&x2));
        for i in 0..2 {
            for j in 0..2 {
                for m in 0..2 {
                    let lhs = a.mul(&a.mul(&b[i], &b[j]), &b[m]);
                    let rhs = a.mul(&b[i], &a.mul(&b[j], &b[m]));
                    let expected = if i + j + m < 2 { a.basis_vec(i + j + m) } else { a.zero_elem() };
                    assert_eq!(lhs, expected);
                    assert_eq!(rhs, expected);
                }
            }
        }
    }

    #[test]
    fn zeroed_unit_column_fails_unit_law() {
        let f = Field::Rationals;
        let a = Algebra::truncated_polynomial(f, "x", 2);
        let broken = Algebra::from_products(f, a.names().to_vec(), a.unit().to_vec(), |i, j| {
            if i == 0 {
                a.zero_elem()
            } else {
                a.sc(i, j)
            }
        });
        let d = broken.validate();
        assert!(!d.ok());
        assert!(d.failures.iter().any(|s| s.contains("unit law")));
    }

    #[test]
    fn broken_associativity_names_indices() {
        let f = Field::Rationals;
        // b1*b1 = b2, b2*b1 = 0, b1*b2 = b1 : not associative
        let names: Vec<String> = ["1", "u", "v"].iter().map(|s| s.to_string()).collect();
        let triples = vec![
            (0, 0, 0, f.one()),
            (0, 1, 1, f.one()),
            (0, 2, 2, f.one()),
            (1, 0, 1, f.one()),
            (2, 0, 2, f.one()),
            (1, 1, 2, f.one()),
            (1, 2, 1, f.one()),
        ];
        let a = Algebra::from_triples(f, names, unit_vec(f, 3, 0), &triples).unwrap();
        let d = a.validate();
        assert!(d.failures.iter().any(|s| s.contains("(i,j,m,k)")));
    }

    #[test]
    fn matrix_algebra_and_products() {
        let f = Field::prime(3).unwrap();
        let m = Algebra::matrix_algebra(f, 2);
        assert!(m.validate().ok());
        assert!(!m.is_commutative());
        let p = Algebra::product(&m, &Algebra::truncated_polynomial(f, "x", 3));
        assert!(p.validate().ok());
        assert_eq!(p.dim(), 7);
        assert!(m.opposite().validate().ok());
    }

    #[test]
    fn quotient_by_radical() {
        let f = Field::Rationals;
        let a = Algebra::truncated_polynomial(f, "x", 3);
        let j = Subspace::span_of_vectors(f, 3, &[a.basis_vec(1), a.basis_vec(2)]);
        assert!(a.is_two_sided_ideal(&j));
        let (q, _) = a.quotient_algebra(&j);
        assert_eq!(q.dim(), 1);
        assert!(q.validate().ok());
    }
}

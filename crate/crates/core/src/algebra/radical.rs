use serde::Serialize;

use super::Algebra;
use crate::error::{Error, Result};
use crate::exactlin::{fma, Field, Mat, Subspace};

/// The trace form detects the radical in characteristic 0 and for `p > dim`.
pub fn trace_form_valid(a: &Algebra) -> bool {
    match a.field() {
        Field::Rationals => true,
        Field::Prime(p) => p > a.dim() as u64,
    }
}

/// Gram matrix of `(x, y) -> tr(L_{xy})` on the basis.
fn trace_form(a: &Algebra) -> Mat {
    let d = a.dim();
    let f = a.field();
    let mut g = Mat::zeros(f, d, d);
    for i in 0..d {
        for j in i..d {
            let (li, lj) = (a.lmul(i), a.lmul(j));
            let mut t = f.zero();
            for k in 0..d {
                for l in 0..d {
                    let x = &li[(k, l)];
                    if !x.is_zero() {
                        fma(&mut t, x, &lj[(l, k)]);
                    }
                }
            }
            g[(j, i)] = t.clone();
            g[(i, j)] = t;
        }
    }
    g
}

/// Kernel of the trace form, post-verified as a nilpotent two-sided ideal
/// with semisimple quotient.
pub fn trace_form_radical(a: &Algebra) -> Result<Subspace> {
    if !trace_form_valid(a) {
        return Err(Error::MissingData(format!(
            "trace form criterion needs characteristic 0 or p > {}",
            a.dim()
        )));
    }
    let j = trace_form(a).kernel();
    if !a.is_two_sided_ideal(&j) {
        return Err(Error::InvalidAlgebra("trace form kernel is not a two-sided ideal".into()));
    }
    if is_nilpotent_ideal(a, &j).is_none() {
        return Err(Error::InvalidAlgebra("trace form kernel is not nilpotent".into()));
    }
    let (q, _) = a.quotient_algebra(&j);
    if trace_form(&q).rank() != q.dim() {
        return Err(Error::InvalidAlgebra("quotient by the trace form kernel is not semisimple".into()));
    }
    Ok(j)
}

/// Smallest `n` with `J^n = 0`, or `None` if `J` is not nilpotent.
pub fn is_nilpotent_ideal(a: &Algebra, j: &Subspace) -> Option<usize> {
    let mut power = j.clone();
    let mut n = 1;
    while power.dim() > 0 {
        let next = a.subspace_product(&power, j);
        if next.dim() == power.dim() {
            return None;
        }
        power = next;
        n += 1;
    }
    Some(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Maximality {
    /// The quotient has a nondegenerate trace form.
    TraceForm,
    /// Nilpotent ideal, maximality asserted by input.
    AssertedByInput,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadicalReport {
    pub dim: usize,
    pub nilpotency_index: usize,
    pub maximality: Maximality,
}

impl RadicalReport {
    pub fn verdict(&self) -> &'static str {
        match self.maximality {
            Maximality::TraceForm => "radical (trace form)",
            Maximality::AssertedByInput => "nilpotent ideal, maximality asserted by input",
        }
    }
}

pub fn verify_radical(a: &Algebra, j: &Subspace) -> Result<RadicalReport> {
    if !a.is_two_sided_ideal(j) {
        return Err(Error::InvalidAlgebra("not a two-sided ideal".into()));
    }
    let Some(index) = is_nilpotent_ideal(a, j) else {
        return Err(Error::InvalidAlgebra("ideal is not nilpotent".into()));
    };
    let maximality = if trace_form_valid(a) {
        let (q, _) = a.quotient_algebra(j);
        if trace_form(&q).rank() != q.dim() {
            return Err(Error::InvalidAlgebra("nilpotent ideal is not the radical: quotient is not semisimple".into()));
        }
        Maximality::TraceForm
    } else {
        Maximality::AssertedByInput
    };
    Ok(RadicalReport { dim: j.dim(), nilpotency_index: index, maximality })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "reason", rename_all = "lowercase")]
pub enum SuperfluityVerdict {
    True(String),
    Unknown,
}

/// Sufficient test for an ideal to be universally superfluous.
pub fn superfluity_verdict(a: &Algebra, j: &Subspace) -> SuperfluityVerdict {
    if let Some(n) = is_nilpotent_ideal(a, j) {
        return SuperfluityVerdict::True(format!("nilpotent of index {n}"));
    }
    if let Ok(r) = a.radical() {
        if r.space.contains_subspace(j) {
            return SuperfluityVerdict::True("contained in the radical".into());
        }
    }
    SuperfluityVerdict::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Scalar;

    #[test]
    fn ground_field_radical_is_zero() {
        for f in [Field::Rationals, Field::prime(2).unwrap(), Field::prime(7).unwrap()] {
            assert_eq!(Algebra::ground(f).radical().unwrap().space.dim(), 0);
        }
    }

    #[test]
    fn dual_numbers_over_q() {
        let f = Field::Rationals;
        let a = Algebra::truncated_polynomial(f, "x", 2);
        let r = a.radical().unwrap();
        assert_eq!(r.space.vectors(), vec![a.basis_vec(1)]);
        assert_eq!(is_nilpotent_ideal(&a, &r.space), Some(2));
    }

    #[test]
    fn small_characteristic_needs_supplied_radical() {
        let f = Field::prime(2).unwrap();
        let a = Algebra::truncated_polynomial(f, "x", 2);
        assert!(matches!(a.radical(), Err(Error::MissingData(_))));
        let j = Subspace::span_of_vectors(f, 2, &[a.basis_vec(1)]);
        let rep = verify_radical(&a, &j).unwrap();
        assert_eq!(rep.maximality, Maximality::AssertedByInput);
        assert_eq!(rep.nilpotency_index, 2);
        let a = a.with_supplied_radical(j).unwrap();
        assert_eq!(a.radical().unwrap().space.dim(), 1);
    }

    #[test]
    fn whole_algebra_is_not_a_radical() {
        let f = Field::Rationals;
        let a = Algebra::truncated_polynomial(f, "x", 2);
        assert!(verify_radical(&a, &Subspace::full(f, 2)).is_err());
        assert_eq!(is_nilpotent_ideal(&a, &Subspace::full(f, 2)), None);
    }

    #[test]
    fn zero_ideal() {
        let f = Field::Rationals;
        let a = Algebra::split_semisimple(f, 2);
        let z = Subspace::zero(f, 2);
        assert_eq!(is_nilpotent_ideal(&a, &z), Some(1));
        assert!(verify_radical(&a, &z).is_ok());
        assert!(matches!(superfluity_verdict(&a, &z), SuperfluityVerdict::True(_)));
    }

    #[test]
    fn superfluity_unknown_for_idempotent_ideal() {
        let f = Field::Rationals;
        let a = Algebra::split_semisimple(f, 2);
        let j = Subspace::span_of_vectors(f, 2, &[vec![f.one(), f.zero()]]);
        assert_eq!(superfluity_verdict(&a, &j), SuperfluityVerdict::Unknown);
    }

    #[test]
    fn non_split_quotient_radical() {
        // Q[x]/(x^2 (x^2+1)): radical spanned by x(x^2+1)
        let f = Field::Rationals;
        let n = 4;
        let reduce = |v: Vec<Scalar>| -> Vec<Scalar> {
            // x^4 = -x^2, x^5 = -x^3, x^6 = x^2
            let mut out = vec![f.zero(); n];
            for (k, c) in v.into_iter().enumerate() {
                match k {
                    0..=3 => out[k] = &out[k] + &c,
                    4 => out[2] = &out[2] - &c,
                    5 => out[3] = &out[3] - &c,
                    6 => out[2] = &out[2] + &c,
                    _ => unreachable!(),
                }
            }
            out
        };
        let names = (0..n).map(|i| format!("x{i}")).collect();
        let a = Algebra::from_products(f, names, crate::exactlin::unit_vec(f, n, 0), |i, j| {
            let mut v = vec![f.zero(); 7];
            v[i + j] = f.one();
            reduce(v)
        });
        assert!(a.validate().ok());
        let r = a.radical().unwrap();
        assert_eq!(r.space.dim(), 1);
        assert!(r.space.contains(&[f.zero(), f.one(), f.zero(), f.one()]));
    }
}

use serde::Serialize;

use super::Module;
use crate::error::Result;
use crate::exactlin::{invertible_in_span, Mat, SearchBudget, SpanSearch};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    Isomorphic(Mat),
    /// Proven: the reason names the obstruction.
    NotIsomorphic(String),
    /// Randomized search found nothing; not a proof.
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsoKind {
    Isomorphic,
    NotIsomorphic,
    Inconclusive,
}

impl IsoVerdict {
    pub fn iso(&self) -> Option<&Mat> {
        match self {
            IsoVerdict::Isomorphic(m) => Some(m),
            _ => None,
        }
    }
    pub fn kind(&self) -> IsoKind {
        match self {
            IsoVerdict::Isomorphic(_) => IsoKind::Isomorphic,
            IsoVerdict::NotIsomorphic(_) => IsoKind::NotIsomorphic,
            IsoVerdict::Inconclusive => IsoKind::Inconclusive,
        }
    }
}

pub fn iso_test(m: &Module, n: &Module, seed: u64) -> Result<IsoVerdict> {
    if m.dim() != n.dim() {
        return Ok(IsoVerdict::NotIsomorphic(format!("dimensions {} and {} differ", m.dim(), n.dim())));
    }
    let f = m.field();
    if m.dim() == 0 {
        m.hom(n)?;
        return Ok(IsoVerdict::Isomorphic(Mat::zeros(f, 0, 0)));
    }
    let h = m.hom(n)?;
    let em = m.hom(m)?.len();
    if h.len() != em || n.hom(n)?.len() != em {
        return Ok(IsoVerdict::NotIsomorphic(format!(
            "Hom dimensions obstruct: Hom(M,N) = {}, End(M) = {em}",
            h.len()
        )));
    }
    Ok(match invertible_in_span(f, m.dim(), &h, seed, SearchBudget::default())? {
        SpanSearch::Found { mat, .. } => IsoVerdict::Isomorphic(mat),
        SpanSearch::NoneExhaustive => IsoVerdict::NotIsomorphic("no invertible map after exhaustive search".into()),
        SpanSearch::NoneInconclusive => IsoVerdict::Inconclusive,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::Algebra;
    use crate::exactlin::Field;
    use crate::modrep::Side;

    #[test]
    fn reflexive_and_dimension() {
        let f = Field::prime(2).unwrap();
        let a = Arc::new(Algebra::truncated_polynomial(f, "x", 2));
        let reg = Module::regular(a.clone());
        let v = iso_test(&reg, &reg, 3).unwrap();
        assert!(reg.is_morphism(&reg, v.iso().unwrap()));
        let s = Module::new(a, Side::Left, 1, vec![Mat::identity(f, 1), Mat::zeros(f, 1, 1)]).unwrap();
        assert!(matches!(iso_test(&s, &reg, 0).unwrap(), IsoVerdict::NotIsomorphic(_)));
    }

    #[test]
    fn permuted_presentation() {
        let f = Field::Rationals;
        let a = Arc::new(Algebra::truncated_polynomial(f, "x", 2));
        let reg = Module::regular(a.clone());
        let p = Mat::from_i64(f, &[vec![0, 1], vec![1, 0]]);
        let perm = Module::new(a, Side::Left, 2, reg.acts().iter().map(|x| &(&p * x) * &p).collect()).unwrap();
        let v = iso_test(&reg, &perm, 11).unwrap();
        let iso = v.iso().unwrap();
        assert!(reg.is_morphism(&perm, iso));
        assert!(iso.is_invertible());
        let back = iso_test(&perm, &reg, 12).unwrap();
        assert!(back.iso().is_some());
    }

    #[test]
    fn non_isomorphic_same_dimension() {
        // k ⊕ k vs k[x]/x^2 over k[x]/x^2
        let f = Field::prime(2).unwrap();
        let a = Arc::new(Algebra::truncated_polynomial(f, "x", 2));
        let s = Module::new(a.clone(), Side::Left, 1, vec![Mat::identity(f, 1), Mat::zeros(f, 1, 1)]).unwrap();
        let ss = Module::direct_sum(&[&s, &s]).unwrap().module;
        let v = iso_test(&ss, &Module::regular(a), 0).unwrap();
        assert!(matches!(v, IsoVerdict::NotIsomorphic(_)));
    }
}

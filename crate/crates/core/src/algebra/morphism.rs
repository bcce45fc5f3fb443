
use super::{AlgRef, Algebra};
use crate::diag::Diagnostics;
use crate::error::{Error, Result};
use crate::exactlin::{Mat, Scalar, Subspace};

/// A unital algebra homomorphism given by its matrix on the chosen bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMorphism {
    pub source: AlgRef,
    pub target: AlgRef,
    pub mat: Mat,
}

impl AlgebraMorphism {
    /// Build and validate.
    pub fn new(source: AlgRef, target: AlgRef, mat: Mat) -> Result<AlgebraMorphism> {
        let m = AlgebraMorphism::unchecked(source, target, mat)?;
        let d = m.validate();
        match d.first_failure() {
            None => Ok(m),
            Some(f) => Err(Error::NotAMorphism(f.to_string())),
        }
    }

    pub fn unchecked(source: AlgRef, target: AlgRef, mat: Mat) -> Result<AlgebraMorphism> {
        if mat.rows() != target.dim() || mat.cols() != source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                mat.rows(),
                mat.cols(),
                target.dim(),
                source.dim()
            )));
        }
        Ok(AlgebraMorphism { source, target, mat })
    }

    pub fn identity(a: AlgRef) -> AlgebraMorphism {
        let mat = Mat::identity(a.field(), a.dim());
        AlgebraMorphism { source: a.clone(), target: a, mat }
    }

    pub fn validate(&self) -> Diagnostics {
        let mut diag = Diagnostics::new();
        let (s, t) = (&self.source, &self.target);
        diag.check(self.apply(s.unit()) == t.unit(), || "unit is not preserved".into());
        for i in 0..s.dim() {
            let fi = self.mat.col(i);
            for j in 0..s.dim() {
                let lhs = self.apply(&s.sc(i, j));
                let rhs = t.mul(&fi, &self.mat.col(j));
                if lhs != rhs {
                    diag.fail(format!(
                        "not multiplicative on ({}, {}): f({}*{}) = {}, f({})*f({}) = {}",
                        s.names()[i],
                        s.names()[j],
                        s.names()[i],
                        s.names()[j],
                        t.format_elem(&lhs),
                        s.names()[i],
                        s.names()[j],
                        t.format_elem(&rhs)
                    ));
                }
            }
        }
        diag
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.mat.mul_vec(x)
    }

    /// `self ∘ first`
    pub fn after(&self, first: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        if first.target.as_ref() != self.source.as_ref() {
            return Err(Error::AlgebraMismatch("composition of morphisms with mismatched algebras".into()));
        }
        Ok(AlgebraMorphism { source: first.source.clone(), target: self.target.clone(), mat: &self.mat * &first.mat })
    }

    pub fn is_surjective(&self) -> bool {
        self.mat.rank() == self.target.dim()
    }

    pub fn is_injective(&self) -> bool {
        self.mat.rank() == self.source.dim()
    }

    /// The kernel as a two-sided ideal of the source.
    pub fn kernel_ideal(&self) -> Subspace {
        let k = self.mat.kernel();
        debug_assert!(self.source.is_two_sided_ideal(&k));
        k
    }

    pub fn image(&self) -> Subspace {
        self.mat.image()
    }

    pub fn source_algebra(&self) -> &Algebra {
        &self.source
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::exactlin::Field;

    fn shared(a: Algebra) -> AlgRef {
        Arc::new(a)
    }

    #[test]
    fn evaluation_at_zero() {
        let f = Field::prime(2).unwrap();
        let r1 = shared(Algebra::truncated_polynomial(f, "x", 2));
        let k = shared(Algebra::ground(f));
        let ev = AlgebraMorphism::new(r1.clone(), k.clone(), Mat::from_i64(f, &[vec![1, 0]])).unwrap();
        assert!(ev.is_surjective());
        assert_eq!(ev.kernel_ideal().vectors(), vec![r1.basis_vec(1)]);
        let id = AlgebraMorphism::identity(k.clone());
        assert_eq!(id.kernel_ideal().dim(), 0);
        assert!(AlgebraMorphism::new(r1, k, Mat::from_i64(f, &[vec![1, 1]])).is_err());
    }
}

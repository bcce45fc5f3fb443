use std::sync::Arc;

use super::{AlgRef, Algebra, AlgebraMorphism, Radical, RadicalSource};
use crate::diag::Diagnostics;
use crate::error::{Error, Result};
use crate::exactlin::{concat, zero_vec, Mat, Scalar, Subspace};

/// A pullback square `R -> R1 -> R'` and `R -> R2 -> R'`.
#[derive(Clone, Debug)]
pub struct PullbackData {
    pub r1: AlgRef,
    pub r2: AlgRef,
    pub rp: AlgRef,
    pub r: AlgRef,
    pub pi1: AlgebraMorphism,
    pub pi2: AlgebraMorphism,
    pub i1: AlgebraMorphism,
    pub i2: AlgebraMorphism,
    /// `R` as a subspace of `R1 ⊕ R2`; its pivot-normalised basis is the basis of `R`.
    pub embedding: Subspace,
}

/// Fibre product of `pi1: R1 -> R'` and `pi2: R2 -> R'`.
pub fn pullback(pi1: &AlgebraMorphism, pi2: &AlgebraMorphism) -> Result<PullbackData> {
    if pi1.target != pi2.target {
        return Err(Error::AlgebraMismatch("the two maps have different targets".into()));
    }
    let (r1, r2, rp) = (pi1.source.clone(), pi2.source.clone(), pi1.target.clone());
    let f = rp.field();
    let (d1, d2) = (r1.dim(), r2.dim());
    let stacked = Mat::hstack(f, rp.dim(), &[&pi1.mat, &-&pi2.mat]);
    let emb = stacked.kernel();
    let vecs = emb.vectors();
    let split = |v: &[Scalar]| (v[..d1].to_vec(), v[d1..].to_vec());
    let names: Vec<String> = vecs
        .iter()
        .map(|v| {
            let (a, b) = split(v);
            format!("({}, {})", r1.format_elem(&a), r2.format_elem(&b))
        })
        .collect();
    let unit_pair = concat(&[r1.unit(), r2.unit()]);
    let unit = emb
        .coords(&unit_pair)
        .ok_or_else(|| Error::InvalidAlgebra("(1, 1) is not in the pullback; maps are not unital".into()))?;
    let mut bad = false;
    let mut r = Algebra::from_products(f, names, unit, |s, t| {
        let (a, b) = split(&vecs[s]);
        let (c, d) = split(&vecs[t]);
        let prod = concat(&[&r1.mul(&a, &c), &r2.mul(&b, &d)]);
        emb.coords(&prod).unwrap_or_else(|| {
            bad = true;
            zero_vec(f, vecs.len())
        })
    });
    if bad {
        return Err(Error::InvalidAlgebra("pullback is not closed under multiplication".into()));
    }
    if let Some(rad) = inherited_radical(&r1, &r2, &emb) {
        r = r.with_radical(rad)?;
    }
    let r: AlgRef = Arc::new(r.validated()?);
    let i1 = AlgebraMorphism::new(r.clone(), r1.clone(), emb.basis().block(0, 0, d1, emb.dim()))?;
    let i2 = AlgebraMorphism::new(r.clone(), r2.clone(), emb.basis().block(d1, 0, d2, emb.dim()))?;
    Ok(PullbackData { r1, r2, rp, r, pi1: pi1.clone(), pi2: pi2.clone(), i1, i2, embedding: emb })
}

/// `R ∩ (J1 × J2)` is the radical of `R` whenever `R1/J1 × R2/J2` is
/// commutative: the quotient of `R` embeds in a reduced commutative algebra.
fn inherited_radical(r1: &Algebra, r2: &Algebra, emb: &Subspace) -> Option<Radical> {
    let j1 = r1.radical().ok()?;
    let j2 = r2.radical().ok()?;
    if !r1.quotient_algebra(&j1.space).0.is_commutative() || !r2.quotient_algebra(&j2.space).0.is_commutative() {
        return None;
    }
    let f = r1.field();
    let (d1, d2) = (r1.dim(), r2.dim());
    let mut vs: Vec<Vec<Scalar>> = j1.space.vectors().into_iter().map(|v| concat(&[&v, &zero_vec(f, d2)])).collect();
    vs.extend(j2.space.vectors().into_iter().map(|v| concat(&[&zero_vec(f, d1), &v])));
    let j = Subspace::span_of_vectors(f, d1 + d2, &vs);
    let meet = emb.intersection(&j);
    let coords: Vec<Vec<Scalar>> = meet.vectors().iter().map(|v| emb.coords_unchecked(v)).collect();
    let source = if j1.source == RadicalSource::Supplied || j2.source == RadicalSource::Supplied {
        RadicalSource::Supplied
    } else {
        RadicalSource::Structural
    };
    Some(Radical { space: Subspace::span_of_vectors(f, emb.dim(), &coords), source })
}

impl PullbackData {
    /// The pair `(a, b)` as an element of `R`, if `pi1(a) = pi2(b)`.
    pub fn element_of_pair(&self, a: &[Scalar], b: &[Scalar]) -> Option<Vec<Scalar>> {
        self.embedding.coords(&concat(&[a, b]))
    }

    pub fn stacked_rank(&self) -> usize {
        let f = self.rp.field();
        Mat::hstack(f, self.rp.dim(), &[&self.pi1.mat, &-&self.pi2.mat]).rank()
    }

    pub fn pi1_surjective(&self) -> bool {
        self.pi1.is_surjective()
    }

    /// The commutative square, the dimension count and the embedding into `R1 × R2`.
    pub fn verify(&self) -> Diagnostics {
        let mut d = Diagnostics::new();
        d.absorb("R", self.r.validate());
        d.check(&self.pi1.mat * &self.i1.mat == &self.pi2.mat * &self.i2.mat, || {
            "square does not commute: pi1 i1 != pi2 i2".into()
        });
        let expected = self.r1.dim() + self.r2.dim() - self.stacked_rank();
        d.check(self.r.dim() == expected, || format!("dim R = {} but dim R1 + dim R2 - rank = {expected}", self.r.dim()));
        let f = self.r.field();
        let joint = Mat::vstack(f, self.r.dim(), &[&self.i1.mat, &self.i2.mat]);
        d.check(joint.rank() == self.r.dim(), || "i1 ⊕ i2 is not injective".into());
        // every compatible pair factors through R
        let stacked = Mat::hstack(f, self.rp.dim(), &[&self.pi1.mat, &-&self.pi2.mat]);
        for v in stacked.kernel().vectors() {
            d.check(joint.image().contains(&v), || "a compatible pair does not come from R".into());
        }
        d
    }
}

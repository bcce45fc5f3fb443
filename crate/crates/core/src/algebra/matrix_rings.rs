use std::ops::Range;

use super::{Algebra, PullbackData, Radical, RadicalSource};
use crate::error::{Error, Result};
use crate::exactlin::{add_vec, concat, zero_vec, Field, Mat, Scalar, Subspace};

/// Coordinate blocks of an upper triangular ring `[[B, M], [0, A]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularLayout {
    pub b: Range<usize>,
    pub m: Range<usize>,
    pub a: Range<usize>,
}

impl TriangularLayout {
    pub fn dim(&self) -> usize {
        self.a.end
    }
    /// `(1_B, 0, 0)`
    pub fn top_idempotent(&self, b: &Algebra) -> Vec<Scalar> {
        let mut v = zero_vec(b.field(), self.dim());
        v[self.b.clone()].clone_from_slice(b.unit());
        v
    }
    /// `(0, 0, 1_A)`
    pub fn bottom_idempotent(&self, a: &Algebra) -> Vec<Scalar> {
        let mut v = zero_vec(a.field(), self.dim());
        v[self.a.clone()].clone_from_slice(a.unit());
        v
    }
}

fn check_bimodule(b: &Algebra, a: &Algebra, m_dim: usize, lact: &[Mat], ract: &[Mat]) -> Result<()> {
    let f = b.field();
    let bad = |s: String| Err(Error::InvalidModule(s));
    if lact.len() != b.dim() || ract.len() != a.dim() {
        return bad("one action matrix per basis element is required".into());
    }
    let combine = |mats: &[Mat], x: &[Scalar]| {
        let mut out = Mat::zeros(f, m_dim, m_dim);
        for (c, m) in x.iter().zip(mats) {
            if !c.is_zero() {
                out = &out + &m.scale(c);
            }
        }
        out
    };
    if !combine(lact, b.unit()).is_identity() || !combine(ract, a.unit()).is_identity() {
        return bad("unit does not act as the identity".into());
    }
    for i in 0..b.dim() {
        for j in 0..b.dim() {
            if &lact[i] * &lact[j] != combine(lact, &b.sc(i, j)) {
                return bad(format!("left action not multiplicative on ({i},{j})"));
            }
        }
    }
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            if &ract[j] * &ract[i] != combine(ract, &a.sc(i, j)) {
                return bad(format!("right action not multiplicative on ({i},{j})"));
            }
        }
    }
    for l in lact {
        for r in ract {
            if l * r != r * l {
                return bad("left and right actions do not commute".into());
            }
        }
    }
    Ok(())
}

/// The ring `[[B, M], [0, A]]` for a `(B, A)`-bimodule `M` given by action
/// matrices (`ract[j]` is `m -> m a_j` on column vectors).
pub fn triangular(
    b: &Algebra,
    a: &Algebra,
    m_dim: usize,
    m_names: &[String],
    lact: &[Mat],
    ract: &[Mat],
) -> Result<(Algebra, TriangularLayout)> {
    check_bimodule(b, a, m_dim, lact, ract)?;
    let f = b.field();
    let (db, da) = (b.dim(), a.dim());
    let lay = TriangularLayout { b: 0..db, m: db..db + m_dim, a: db + m_dim..db + m_dim + da };
    let n = lay.dim();
    let block = |i: usize| -> (u8, usize) {
        if lay.b.contains(&i) {
            (0, i)
        } else if lay.m.contains(&i) {
            (1, i - db)
        } else {
            (2, i - db - m_dim)
        }
    };
    let mut names: Vec<String> = b.names().iter().map(|s| format!("b:{s}")).collect();
    names.extend(m_names.iter().map(|s| format!("m:{s}")));
    names.extend(a.names().iter().map(|s| format!("a:{s}")));
    let unit = concat(&[b.unit(), &zero_vec(f, m_dim), a.unit()]);
    let mut gamma = Algebra::from_products(f, names, unit, |i, j| {
        let mut v = zero_vec(f, n);
        match (block(i), block(j)) {
            ((0, x), (0, y)) => v[lay.b.clone()].clone_from_slice(&b.sc(x, y)),
            ((0, x), (1, y)) => v[lay.m.clone()].clone_from_slice(&lact[x].col(y)),
            ((1, x), (2, y)) => v[lay.m.clone()].clone_from_slice(&ract[y].col(x)),
            ((2, x), (2, y)) => v[lay.a.clone()].clone_from_slice(&a.sc(x, y)),
            _ => {}
        }
        v
    });
    if let (Ok(jb), Ok(ja)) = (b.radical(), a.radical()) {
        let mut vs: Vec<Vec<Scalar>> = jb.space.vectors().into_iter().map(|v| embed(f, n, &lay.b, &v)).collect();
        vs.extend((0..m_dim).map(|t| crate::exactlin::unit_vec(f, n, lay.m.start + t)));
        vs.extend(ja.space.vectors().into_iter().map(|v| embed(f, n, &lay.a, &v)));
        let source = if jb.source == RadicalSource::Supplied || ja.source == RadicalSource::Supplied {
            RadicalSource::Supplied
        } else {
            RadicalSource::Structural
        };
        gamma = gamma.with_radical(Radical { space: Subspace::span_of_vectors(f, n, &vs), source })?;
    }
    if let (Ok(eb), Ok(ea)) = (b.primitive_idempotents(), a.primitive_idempotents()) {
        let mut es: Vec<Vec<Scalar>> = eb.iter().map(|e| embed(f, n, &lay.b, e)).collect();
        es.extend(ea.iter().map(|e| embed(f, n, &lay.a, e)));
        gamma = gamma.with_idempotents(es)?;
    }
    let gamma = gamma.validated()?;
    Ok((gamma, lay))
}

fn embed(f: Field, n: usize, r: &Range<usize>, v: &[Scalar]) -> Vec<Scalar> {
    let mut out = zero_vec(f, n);
    out[r.clone()].clone_from_slice(v);
    out
}

/// Coordinate blocks of the 2x2 ring with entries `R, R1 / I1, R1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaPrimeLayout {
    pub r: Range<usize>,
    /// The `(1,2)` entry, a copy of `R1`.
    pub upper: Range<usize>,
    /// The `(2,1)` entry, the kernel of `pi1`.
    pub lower: Range<usize>,
    /// The `(2,2)` entry, a copy of `R1`.
    pub corner: Range<usize>,
    /// Basis of the kernel of `pi1` inside `R1`.
    pub kernel: Subspace,
}

impl GammaPrimeLayout {
    pub fn dim(&self) -> usize {
        self.corner.end
    }
}

/// The matrix ring `[[R, R1], [I1, R1]]` with `I1 = ker pi1`.
///
/// Products:
/// `[[r,a],[i,b]] [[r',a'],[i',b']] =
///  [[r r' + t(a i'), i1(r) a' + a b'], [i i1(r') + b i', i a' + b b']]`
/// where `t` inverts `i1` restricted to `ker i2`.
pub fn gamma_prime(data: &PullbackData) -> Result<(Algebra, GammaPrimeLayout)> {
    if !data.pi1_surjective() {
        return Err(Error::HypothesisRefused("pi1 is not surjective".into()));
    }
    let f = data.r.field();
    let (r, r1) = (&data.r, &data.r1);
    let kernel = data.pi1.kernel_ideal();
    let (dr, d1, di) = (r.dim(), r1.dim(), kernel.dim());
    let lay = GammaPrimeLayout {
        r: 0..dr,
        upper: dr..dr + d1,
        lower: dr + d1..dr + d1 + di,
        corner: dr + d1 + di..dr + 2 * d1 + di,
        kernel: kernel.clone(),
    };
    let n = lay.dim();
    let d2 = data.r2.dim();
    // I1 -> ker i2 ⊆ R, x -> (x, 0)
    let back = |x: &[Scalar]| -> Vec<Scalar> {
        data.element_of_pair(x, &zero_vec(f, d2)).expect("kernel of pi1 pairs with 0")
    };
    let i1 = |x: &[Scalar]| data.i1.apply(x);
    let in_kernel = |x: &[Scalar]| kernel.coords(x).expect("product lands in the kernel of pi1");
    let parts = |v: &[Scalar]| {
        (
            v[lay.r.clone()].to_vec(),
            v[lay.upper.clone()].to_vec(),
            kernel.basis().mul_vec(&v[lay.lower.clone()]),
            v[lay.corner.clone()].to_vec(),
        )
    };
    let mul = |x: &[Scalar], y: &[Scalar]| -> Vec<Scalar> {
        let (r_, a, i, b) = parts(x);
        let (r2_, a2, i2, b2) = parts(y);
        let top_left = add_vec(&r.mul(&r_, &r2_), &back(&r1.mul(&a, &i2)));
        let top_right = add_vec(&r1.mul(&i1(&r_), &a2), &r1.mul(&a, &b2));
        let bottom_left = in_kernel(&add_vec(&r1.mul(&i, &i1(&r2_)), &r1.mul(&b, &i2)));
        let bottom_right = add_vec(&r1.mul(&i, &a2), &r1.mul(&b, &b2));
        concat(&[&top_left, &top_right, &bottom_left, &bottom_right])
    };
    let mut names: Vec<String> = r.names().iter().map(|s| format!("r:{s}")).collect();
    names.extend(r1.names().iter().map(|s| format!("u:{s}")));
    names.extend((0..di).map(|t| format!("l:{}", r1.format_elem(&kernel.vector(t)))));
    names.extend(r1.names().iter().map(|s| format!("c:{s}")));
    let unit = concat(&[r.unit(), &zero_vec(f, d1), &zero_vec(f, di), r1.unit()]);
    let basis = |i: usize| crate::exactlin::unit_vec(f, n, i);
    let gp = Algebra::from_products(f, names, unit, |i, j| mul(&basis(i), &basis(j)));
    let d = gp.validate();
    if let Some(fail) = d.first_failure() {
        return Err(Error::InvalidAlgebra(format!("matrix ring is not an algebra: {fail}")));
    }
    Ok((gp, lay))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{pullback, AlgebraMorphism};

    fn e1(f: Field) -> PullbackData {
        let r1 = Algebra::truncated_polynomial(f, "x", 2);
        let r1 = Arc::new(if f.characteristic() == 2 {
            r1.with_supplied_radical(Subspace::span_of_vectors(f, 2, &[vec![f.zero(), f.one()]])).unwrap()
        } else {
            r1
        });
        let k = Arc::new(Algebra::ground(f));
        let pi1 = AlgebraMorphism::new(r1, k.clone(), Mat::from_i64(f, &[vec![1, 0]])).unwrap();
        pullback(&pi1, &AlgebraMorphism::identity(k)).unwrap()
    }

    #[test]
    fn gamma_of_dual_numbers() {
        for f in [Field::prime(2).unwrap(), Field::Rationals] {
            let b = Algebra::ground(f);
            let a = Algebra::truncated_polynomial(f, "x", 2)
                .with_supplied_radical(Subspace::span_of_vectors(f, 2, &[vec![f.zero(), f.one()]]))
                .unwrap();
            let lact = vec![Mat::identity(f, 1)];
            // M = k with x acting by 0 on the right
            let ract = vec![Mat::identity(f, 1), Mat::zeros(f, 1, 1)];
            let (g, lay) = triangular(&b, &a, 1, &["m".into()], &lact, &ract).unwrap();
            assert_eq!(g.dim(), 4);
            assert_eq!(lay.dim(), 4);
            assert!(g.validate().ok());
            let j = g.radical().unwrap();
            assert_eq!(j.space.dim(), 2);
            assert_eq!(g.subspace_product(&j.space, &j.space).dim(), 0);
            assert_eq!(g.primitive_idempotents().unwrap().len(), 2);
        }
    }

    #[test]
    fn trace_form_agrees_with_structural_radical() {
        let f = Field::Rationals;
        let b = Algebra::ground(f);
        let a = Algebra::truncated_polynomial(f, "x", 2);
        let (g, _) = triangular(&b, &a, 1, &["m".into()], &[Mat::identity(f, 1)], &[Mat::identity(f, 1), Mat::zeros(f, 1, 1)]).unwrap();
        let structural = g.radical_info().unwrap().space.clone();
        let computed = super::super::trace_form_radical(&g).unwrap();
        assert!(structural.same_as(&computed));
    }

    #[test]
    fn bad_bimodule_rejected() {
        let f = Field::Rationals;
        let b = Algebra::ground(f);
        let a = Algebra::truncated_polynomial(f, "x", 2);
        // x acting invertibly violates x^2 = 0
        let r = triangular(&b, &a, 1, &["m".into()], &[Mat::identity(f, 1)], &[Mat::identity(f, 1), Mat::identity(f, 1)]);
        assert!(r.is_err());
    }

    #[test]
    fn gamma_prime_dimension_seven() {
        for f in [Field::prime(2).unwrap(), Field::Rationals, Field::prime(101).unwrap()] {
            let data = e1(f);
            let (gp, lay) = gamma_prime(&data).unwrap();
            assert_eq!(gp.dim(), 7);
            assert_eq!(lay.kernel.dim(), 1);
            assert_eq!(gp.dim(), data.r.dim() + 2 * data.r1.dim() + lay.kernel.dim());
        }
    }

    #[test]
    fn gamma_prime_with_bijective_pi1_is_triangular() {
        let f = Field::Rationals;
        let k = Arc::new(Algebra::ground(f));
        let id = AlgebraMorphism::identity(k);
        let data = pullback(&id, &id).unwrap();
        let (gp, lay) = gamma_prime(&data).unwrap();
        assert_eq!(gp.dim(), 3);
        assert!(lay.lower.is_empty());
        // the lower-left entry is zero, so the upper entry squares to zero
        let u = crate::exactlin::unit_vec(f, 3, lay.upper.start);
        assert!(crate::exactlin::is_zero_vec(&gp.mul(&u, &u)));
    }
}

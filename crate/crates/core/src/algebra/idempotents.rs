use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{is_nilpotent_ideal, Algebra};
use crate::error::{Error, Result};
use crate::exactlin::{add_vec, axpy, is_zero_vec, scale_vec, sub_vec, Field, Scalar, Subspace};

fn newton_lift(a: &Algebra, mut e: Vec<Scalar>, bound: usize) -> Result<Vec<Scalar>> {
    let f = a.field();
    let (three, two) = (f.from_i64(3), f.from_i64(2));
    for _ in 0..=bound {
        let e2 = a.mul(&e, &e);
        if e2 == e {
            return Ok(e);
        }
        let e3 = a.mul(&e2, &e);
        e = sub_vec(&scale_vec(&three, &e2), &scale_vec(&two, &e3));
    }
    Err(Error::InvalidAlgebra("idempotent lifting did not converge within the nilpotency bound".into()))
}

/// Lift a complete orthogonal family of idempotents modulo `rad` to an
/// honest complete orthogonal family in `a`.
pub fn lift_idempotents(a: &Algebra, rad: &Subspace, idems_mod_rad: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    let n = idems_mod_rad.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty idempotent list".into()));
    }
    let Some(index) = is_nilpotent_ideal(a, rad) else {
        return Err(Error::InvalidAlgebra("radical is not nilpotent".into()));
    };
    let mut sum = a.zero_elem();
    for (i, e) in idems_mod_rad.iter().enumerate() {
        if !rad.contains(&sub_vec(&a.mul(e, e), e)) {
            return Err(Error::InvalidInput(format!("element {i} is not idempotent modulo the radical")));
        }
        for (j, g) in idems_mod_rad.iter().enumerate() {
            if i != j && !rad.contains(&a.mul(e, g)) {
                return Err(Error::InvalidInput(format!("elements {i} and {j} are not orthogonal modulo the radical")));
            }
        }
        sum = add_vec(&sum, e);
    }
    if !rad.contains(&sub_vec(&sum, a.unit())) {
        return Err(Error::InvalidInput("idempotents do not sum to 1 modulo the radical".into()));
    }
    let mut out: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    let mut done = a.zero_elem();
    for e in &idems_mod_rad[..n - 1] {
        let comp = sub_vec(a.unit(), &done);
        let start = a.mul(&a.mul(&comp, e), &comp);
        let lifted = newton_lift(a, start, index)?;
        done = add_vec(&done, &lifted);
        out.push(lifted);
    }
    let last = sub_vec(a.unit(), &done);
    if a.mul(&last, &last) != last {
        return Err(Error::InvalidAlgebra("complementary idempotent failed to be idempotent".into()));
    }
    out.push(last);
    for (e, orig) in out.iter().zip(idems_mod_rad) {
        debug_assert!(rad.contains(&sub_vec(e, orig)));
        if is_zero_vec(e) {
            return Err(Error::InvalidInput("an idempotent lies in the radical".into()));
        }
    }
    Ok(out)
}

/// Roots of `sum c_k t^k` in the field, without multiplicity.
fn roots(field: Field, coeffs: &[Scalar]) -> Result<Vec<Scalar>> {
    let eval = |x: &Scalar| {
        let mut acc = field.zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    };
    match field {
        Field::Prime(p) => {
            if p > 1 << 20 {
                return Err(Error::MissingData(format!(
                    "automatic idempotents over F{p} are not supported; supply idempotents"
                )));
            }
            Ok((0..p).map(|x| field.from_i64(x as i64)).filter(|x| eval(x).is_zero()).collect())
        }
        Field::Rationals => {
            // clear denominators
            let mut den = BigInt::one();
            for c in coeffs {
                den = den.lcm(c.as_rational().unwrap().denom());
            }
            let ints: Vec<BigInt> = coeffs
                .iter()
                .map(|c| {
                    let r = c.as_rational().unwrap();
                    r.numer() * (&den / r.denom())
                })
                .collect();
            let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
            let mut out = Vec::new();
            if low > 0 {
                out.push(field.zero());
            }
            let a0 = ints[low].abs();
            let am = ints.last().unwrap().abs();
            let (Some(a0), Some(am)) = (a0.to_u64(), am.to_u64()) else {
                return Err(Error::MissingData("coefficients too large for rational root search".into()));
            };
            if a0 > 1 << 40 || am > 1 << 40 {
                return Err(Error::MissingData("coefficients too large for rational root search".into()));
            }
            let divisors = |n: u64| -> Vec<u64> {
                let mut ds = Vec::new();
                let mut d = 1;
                while d * d <= n {
                    if n.is_multiple_of(d) {
                        ds.push(d);
                        if d * d != n {
                            ds.push(n / d);
                        }
                    }
                    d += 1;
                }
                ds
            };
            let mut cands: Vec<Scalar> = Vec::new();
            for num in divisors(a0) {
                for dd in divisors(am) {
                    for s in [1i64, -1] {
                        let x = &field.from_i64(s * num as i64) / &field.from_i64(dd as i64);
                        if !cands.contains(&x) {
                            cands.push(x);
                        }
                    }
                }
            }
            for x in cands {
                if eval(&x).is_zero() && !out.contains(&x) {
                    out.push(x);
                }
            }
            Ok(out)
        }
    }
}

/// Primitive idempotents of a commutative semisimple algebra that splits
/// over its ground field.
pub fn split_commutative_semisimple(q: &Algebra) -> Result<Vec<Vec<Scalar>>> {
    if !q.is_commutative() {
        return Err(Error::MissingData(
            "semisimple quotient is not commutative; supply idempotents".into(),
        ));
    }
    let f = q.field();
    let d = q.dim();
    let mut pending = vec![q.unit().to_vec()];
    let mut done = Vec::new();
    while let Some(e) = pending.pop() {
        let corner = q.corner(&e, &e);
        if corner.dim() == 1 {
            done.push(e);
            continue;
        }
        let line = Subspace::span_of_vectors(f, d, std::slice::from_ref(&e));
        let x = (0..d)
            .map(|i| q.mul(&e, &q.basis_vec(i)))
            .find(|x| !line.contains(x))
            .expect("corner of dimension > 1 has an element outside k e");
        // minimal polynomial of x in the corner with unit e
        let mut powers = vec![e.clone()];
        let coeffs = loop {
            let next = q.mul(powers.last().unwrap(), &x);
            let span = crate::exactlin::Mat::from_cols(f, d, &powers);
            if let Some(c) = crate::exactlin::solve_particular(&span, &next) {
                let mut poly: Vec<Scalar> = c.iter().map(|v| -v).collect();
                poly.push(f.one());
                break poly;
            }
            powers.push(next);
        };
        let rs = roots(f, &coeffs)?;
        let m = coeffs.len() - 1;
        if rs.len() != m {
            return Err(Error::MissingData(
                "semisimple quotient does not split over the ground field; supply idempotents".into(),
            ));
        }
        for (i, li) in rs.iter().enumerate() {
            let mut proj = e.clone();
            for (j, lj) in rs.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mut factor = x.clone();
                axpy(&mut factor, &-lj, &e);
                let factor = scale_vec(&(li - lj).inv().unwrap(), &factor);
                proj = q.mul(&proj, &factor);
            }
            pending.push(proj);
        }
    }
    // deterministic order: by first nonzero coordinate
    done.sort_by_key(|e| e.iter().position(|c| !c.is_zero()));
    Ok(done)
}

pub(super) fn automatic_primitive_idempotents(a: &Algebra) -> Result<Vec<Vec<Scalar>>> {
    let rad = a.radical()?;
    let (q, quo) = a.quotient_algebra(&rad.space);
    let classes = split_commutative_semisimple(&q)?;
    let reps: Vec<Vec<Scalar>> = classes.iter().map(|c| quo.lift.mul_vec(c)).collect();
    lift_idempotents(a, &rad.space, &reps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Primitivity {
    /// `eAe` modulo a nilpotent ideal is the ground field, so `eAe` is local.
    LocalCorner,
    /// No nontrivial idempotent in `eAe` after exhausting the finite corner.
    Exhaustive,
    /// Neither certificate applies.
    Asserted,
    NotPrimitive,
}

/// Certify primitivity of an idempotent `e`.
pub fn primitivity(a: &Algebra, e: &[Scalar], ceiling: u64) -> Result<Primitivity> {
    if a.mul(e, e) != e || is_zero_vec(e) {
        return Err(Error::InvalidInput("not a nonzero idempotent".into()));
    }
    let corner = a.corner(e, e);
    if let Ok(rad) = a.radical() {
        let ejs: Vec<Vec<Scalar>> = rad.space.vectors().iter().map(|j| a.mul(&a.mul(e, j), e)).collect();
        let ej = Subspace::span_of_vectors(a.field(), a.dim(), &ejs);
        if corner.dim() - ej.dim() == 1 {
            return Ok(Primitivity::LocalCorner);
        }
    } else if corner.dim() == 1 {
        return Ok(Primitivity::LocalCorner);
    }
    if let Field::Prime(p) = a.field() {
        let dim = corner.dim() as u32;
        if let Some(total) = p.checked_pow(dim) {
            if total <= ceiling {
                let f = a.field();
                let mut digits = vec![0u64; dim as usize];
                for _ in 0..total {
                    let mut x = a.zero_elem();
                    for (t, &c) in digits.iter().enumerate() {
                        axpy(&mut x, &f.from_i64(c as i64), &corner.vector(t));
                    }
                    if !is_zero_vec(&x) && x.as_slice() != e && a.mul(&x, &x) == x {
                        return Ok(Primitivity::NotPrimitive);
                    }
                    for dgt in digits.iter_mut() {
                        *dgt += 1;
                        if *dgt < p {
                            break;
                        }
                        *dgt = 0;
                    }
                }
                return Ok(Primitivity::Exhaustive);
            }
        }
    }
    Ok(Primitivity::Asserted)
}

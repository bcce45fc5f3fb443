use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::mat::Mat;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Budget for the randomized search in [`invertible_in_span`].
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    /// Random combinations tried before any fallback.
    pub random_tries: usize,
    /// Over a prime field, enumerate all `p^d` combinations when this is not exceeded.
    pub exhaustive_ceiling: u64,
    /// Integer coefficients are drawn from `-coeff_range..=coeff_range`.
    pub coeff_range: i64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { random_tries: 48, exhaustive_ceiling: 1 << 16, coeff_range: 9 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpanSearch {
    Found { coeffs: Vec<Scalar>, mat: Mat },
    /// Every combination was examined.
    NoneExhaustive,
    /// Sampling failed but the space was too large to enumerate.
    NoneInconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchVerdict {
    Found,
    None,
    Inconclusive,
}

impl SpanSearch {
    pub fn found(&self) -> Option<&Mat> {
        match self {
            SpanSearch::Found { mat, .. } => Some(mat),
            _ => None,
        }
    }
    pub fn verdict(&self) -> SearchVerdict {
        match self {
            SpanSearch::Found { .. } => SearchVerdict::Found,
            SpanSearch::NoneExhaustive => SearchVerdict::None,
            SpanSearch::NoneInconclusive => SearchVerdict::Inconclusive,
        }
    }
}

/// Uniform over `F_p`; an integer in `-range..=range` over `Q`.
pub fn random_scalar(field: Field, rng: &mut impl Rng, range: i64) -> Scalar {
    match field {
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
        Field::Rationals => field.from_i64(rng.gen_range(-range..=range)),
    }
}

fn combine(field: Field, n: usize, basis: &[Mat], coeffs: &[Scalar]) -> Mat {
    let mut m = Mat::zeros(field, n, n);
    for (b, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        m = &m + &b.scale(c);
    }
    m
}

/// Look for an invertible matrix in the span of `basis`.
pub fn invertible_in_span(field: Field, n: usize, basis: &[Mat], seed: u64, budget: SearchBudget) -> Result<SpanSearch> {
    for b in basis {
        if b.rows() != n || b.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "span element is {}x{}, expected {n}x{n}",
                b.rows(),
                b.cols()
            )));
        }
    }
    if n == 0 {
        return Ok(SpanSearch::Found { coeffs: vec![field.zero(); basis.len()], mat: Mat::zeros(field, 0, 0) });
    }
    if basis.is_empty() {
        return Ok(SpanSearch::NoneExhaustive);
    }
    // A single basis element is invertible or the span has none.
    if basis.len() == 1 {
        return Ok(if basis[0].is_invertible() {
            SpanSearch::Found { coeffs: vec![field.one()], mat: basis[0].clone() }
        } else {
            SpanSearch::NoneExhaustive
        });
    }
    let d = basis.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget.random_tries {
        let coeffs: Vec<Scalar> = (0..d).map(|_| random_scalar(field, &mut rng, budget.coeff_range)).collect();
        let m = combine(field, n, basis, &coeffs);
        if m.is_invertible() {
            return Ok(SpanSearch::Found { coeffs, mat: m });
        }
    }
    let Field::Prime(p) = field else {
        return Ok(SpanSearch::NoneInconclusive);
    };
    let total = (p as u128).checked_pow(d as u32);
    match total {
        Some(t) if t <= budget.exhaustive_ceiling as u128 => {}
        _ => return Ok(SpanSearch::NoneInconclusive),
    }
    let mut digits = vec![0u64; d];
    loop {
        // increment as a base-p counter, skipping the zero vector
        let mut i = 0;
        while i < d {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == d {
            return Ok(SpanSearch::NoneExhaustive);
        }
        let coeffs: Vec<Scalar> = digits.iter().map(|&x| field.from_i64(x as i64)).collect();
        let m = combine(field, n, basis, &coeffs);
        if m.is_invertible() {
            return Ok(SpanSearch::Found { coeffs, mat: m });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(field: Field, n: usize, i: usize, j: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        m[(i, j)] = field.one();
        m
    }

    #[test]
    fn identity_span() {
        let f = Field::Rationals;
        let r = invertible_in_span(f, 3, &[Mat::identity(f, 3)], 1, SearchBudget::default()).unwrap();
        assert_eq!(r.found(), Some(&Mat::identity(f, 3)));
    }

    #[test]
    fn diagonal_units_over_f2() {
        // exhausting the 4 combinations: only E11+E22 is invertible
        let f = Field::prime(2).unwrap();
        let basis = [unit(f, 2, 0, 0), unit(f, 2, 1, 1)];
        let mut invertible = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                let m = &basis[0].scale(&f.from_i64(a)) + &basis[1].scale(&f.from_i64(b));
                if m.is_invertible() {
                    invertible.push(m);
                }
            }
        }
        assert_eq!(invertible, vec![Mat::identity(f, 2)]);
        for seed in 0..5 {
            let r = invertible_in_span(f, 2, &basis, seed, SearchBudget::default()).unwrap();
            assert_eq!(r.found(), Some(&invertible[0]));
        }
        let no_random = SearchBudget { random_tries: 0, ..SearchBudget::default() };
        let r = invertible_in_span(f, 2, &basis, 0, no_random).unwrap();
        assert_eq!(r.found(), Some(&invertible[0]));
    }

    #[test]
    fn nilpotent_span_has_none() {
        let f = Field::prime(3).unwrap();
        let r = invertible_in_span(f, 2, &[unit(f, 2, 0, 1)], 7, SearchBudget::default()).unwrap();
        assert_eq!(r, SpanSearch::NoneExhaustive);
        let q = Field::Rationals;
        let r = invertible_in_span(q, 3, &[unit(q, 3, 0, 1), unit(q, 3, 1, 2)], 7, SearchBudget::default()).unwrap();
        assert_eq!(r, SpanSearch::NoneInconclusive);
    }

    #[test]
    fn size_mismatch() {
        let f = Field::Rationals;
        assert!(invertible_in_span(f, 2, &[Mat::identity(f, 3)], 0, SearchBudget::default()).is_err());
    }
}

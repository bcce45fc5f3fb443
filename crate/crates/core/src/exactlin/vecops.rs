//! Small helpers on coordinate vectors.

use super::scalar::{Field, Scalar};

pub fn zero_vec(field: Field, n: usize) -> Vec<Scalar> {
    vec![field.zero(); n]
}

pub fn unit_vec(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vec(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn add_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(s: &Scalar, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| s * x).collect()
}

pub fn neg_vec(a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| -x).collect()
}

/// `acc += s * a`
pub fn axpy(acc: &mut [Scalar], s: &Scalar, a: &[Scalar]) {
    if s.is_zero() {
        return;
    }
    for (x, y) in acc.iter_mut().zip(a) {
        super::scalar::fma(x, s, y);
    }
}

pub fn concat(parts: &[&[Scalar]]) -> Vec<Scalar> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

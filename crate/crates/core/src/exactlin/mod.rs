//! Exact dense linear algebra over the rationals and prime fields.

mod mat;
mod scalar;
mod search;
mod subspace;
pub mod vecops;

pub use mat::{rref, solve, solve_matrix, solve_particular, Mat, Rref, Solution};
pub use scalar::{fma, is_prime, Field, Scalar};
pub use search::{invertible_in_span, random_scalar, SearchBudget, SearchVerdict, SpanSearch};
pub use subspace::{Quotient, Subspace};
pub use vecops::*;

pub fn rank(a: &Mat) -> usize {
    a.rank()
}

/// A left inverse of an injective matrix, if one exists.
pub fn left_inverse(a: &Mat) -> Option<Mat> {
    // L A = I  <=>  A^T L^T = I
    solve_matrix(&a.transpose(), &Mat::identity(a.field(), a.cols())).map(|x| x.transpose())
}

/// A right inverse of a surjective matrix, if one exists.
pub fn right_inverse(a: &Mat) -> Option<Mat> {
    solve_matrix(a, &Mat::identity(a.field(), a.rows()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn solve_identity() {
        let f = Field::Rationals;
        let e2 = vec![f.zero(), f.one(), f.zero()];
        let s = solve(&Mat::identity(f, 3), &e2).unwrap().unwrap();
        assert_eq!(s.particular, e2);
        assert_eq!(s.kernel.dim(), 0);
    }

    #[test]
    fn solve_one_plus_one_over_f2() {
        let f = Field::prime(2).unwrap();
        let s = solve(&Mat::from_i64(f, &[vec![1, 1]]), &[f.zero()]).unwrap().unwrap();
        assert_eq!(s.particular, vec![f.zero(), f.zero()]);
        assert_eq!(s.kernel.vectors(), vec![vec![f.one(), f.one()]]);
    }

    #[test]
    fn solve_matches_adjugate_oracle() {
        let a = vec![vec![2, -1, 3], vec![1, 4, 0], vec![-2, 5, 7]];
        let b = [3i64, -1, 2];
        let det = cofactor_det(&a);
        assert_ne!(det, 0);
        // x_j = det(A with column j replaced by b) / det(A)
        let f = Field::Rationals;
        let expected: Vec<Scalar> = (0..3)
            .map(|j| {
                let aj: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|c| if c == j { b[i] } else { a[i][c] }).collect()).collect();
                &f.from_i64(cofactor_det(&aj)) / &f.from_i64(det)
            })
            .collect();
        let bs: Vec<Scalar> = b.iter().map(|&x| f.from_i64(x)).collect();
        let s = solve(&Mat::from_i64(f, &a), &bs).unwrap().unwrap();
        assert_eq!(s.particular, expected);
        assert_eq!(Mat::from_i64(f, &a).det(), f.from_i64(det));
    }

    #[test]
    fn solve_rejects_bad_rhs() {
        let f = Field::Rationals;
        assert!(solve(&Mat::identity(f, 2), &[f.one()]).is_err());
    }

    #[test]
    fn one_sided_inverses() {
        let f = Field::Rationals;
        let a = Mat::from_i64(f, &[vec![1, 0], vec![2, 1], vec![0, 3]]);
        let l = left_inverse(&a).unwrap();
        assert!((&l * &a).is_identity());
        let r = right_inverse(&a.transpose()).unwrap();
        assert!((&a.transpose() * &r).is_identity());
        assert!(right_inverse(&a).is_none());
    }
}

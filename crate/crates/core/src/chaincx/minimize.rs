use super::{verify_homotopy, ChainMap, Complex, Graded, Homotopy};
use crate::error::{Error, Result};
use crate::exactlin::{solve_particular, Mat, Scalar, Subspace};
use crate::modrep::{is_projective, projective_catalog, Module};

/// `P ≃ Q` with `ρ ι = id` and `id - ι ρ = d h + h d`.
#[derive(Clone, Debug)]
pub struct Minimization {
    pub q: Complex,
    /// `Q -> P`
    pub iota: ChainMap,
    /// `P -> Q`
    pub rho: ChainMap,
    pub homotopy: Homotopy,
    /// Number of cancelled summand pairs.
    pub cancelled: usize,
}

/// Every differential lands in the radical times the next term.
pub fn is_minimal(p: &Complex) -> Result<bool> {
    let rad = p.alg().radical()?.space;
    Ok(p.degrees().all(|n| {
        let jp = p.term(n + 1).ideal_times(&rad);
        Subspace::span_of_cols(&p.diff(n)).vectors().iter().all(|v| jp.contains(v))
    }))
}

/// A generator `x ∈ e P^n` whose image leaves `J P^{n+1}`: lowest degree,
/// then lowest basis vector, then first primitive idempotent.
fn find_cancellable(p: &Complex, rad: &Subspace, idems: &[Vec<Scalar>]) -> Option<(i64, Vec<Scalar>, usize)> {
    let f = p.field();
    for n in p.degrees() {
        let d = p.diff(n);
        if d.is_zero() {
            continue;
        }
        let jp = p.term(n + 1).ideal_times(rad);
        for v in 0..p.dim_at(n) {
            let ev = crate::exactlin::unit_vec(f, p.dim_at(n), v);
            for (i, e) in idems.iter().enumerate() {
                let x = p.term(n).act_elem(e).mul_vec(&ev);
                if !jp.contains(&d.mul_vec(&x)) {
                    return Some((n, x, i));
                }
            }
        }
    }
    None
}

struct Step {
    q: Complex,
    iota: ChainMap,
    rho: ChainMap,
    h: Homotopy,
}

/// Splits off `A e x -> A e d(x)` at degree `n`.
fn cancel(p: &Complex, n: i64, x: &[Scalar], e: &[Scalar]) -> Result<Step> {
    let f = p.field();
    let alg = p.alg();
    let ae_space = alg.right_mult_matrix(e).image();
    let ae = Module::regular(alg.clone()).submodule(&ae_space)?;
    let y = p.diff(n).mul_vec(x);
    let embed = |v: &[Scalar], m: &Module| -> Mat {
        let cols: Vec<Vec<Scalar>> = ae_space.vectors().iter().map(|a| m.act_elem(a).mul_vec(v)).collect();
        Mat::from_cols(f, m.dim(), &cols)
    };
    let (pn, pn1) = (p.term(n), p.term(n + 1));
    let ux = embed(x, pn);
    let uy = embed(&y, pn1);
    // a retraction P^{n+1} -> A e of u_y
    let homs = pn1.hom(&ae)?;
    let k = ae.dim();
    let cols: Vec<Vec<Scalar>> = homs.iter().map(|h| (h * &uy).flatten()).collect();
    let sys = Mat::from_cols(f, k * k, &cols);
    let c = solve_particular(&sys, &Mat::identity(f, k).flatten())
        .ok_or_else(|| Error::InvalidModule(format!("degree {n}: summand does not split off")))?;
    let mut rp = Mat::zeros(f, k, pn1.dim());
    for (ck, h) in c.iter().zip(&homs) {
        if !ck.is_zero() {
            rp = &rp + &h.scale(ck);
        }
    }
    let r = &rp * &p.diff(n);
    let (b, b1) = (r.kernel(), rp.kernel());
    let (qn, qn1) = (pn.submodule(&b)?, pn1.submodule(&b1)?);
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for m in p.degrees() {
        terms.push(if m == n {
            qn.clone()
        } else if m == n + 1 {
            qn1.clone()
        } else {
            p.term(m).clone()
        });
    }
    for m in p.lo()..p.hi() {
        let d = p.diff(m);
        diffs.push(if m == n - 1 {
            &b.coord_matrix() * &d
        } else if m == n {
            &(&b1.coord_matrix() * &d) * b.basis()
        } else if m == n + 1 {
            &d * b1.basis()
        } else {
            d
        });
    }
    let q = Complex::new(alg.clone(), p.lo(), terms, diffs)?;
    let iota = Graded::from_fn(&q, p, 0, |m| {
        if m == n {
            b.basis().clone()
        } else if m == n + 1 {
            b1.basis().clone()
        } else {
            Mat::identity(f, p.dim_at(m))
        }
    });
    let rho = Graded::from_fn(p, &q, 0, |m| {
        if m == n {
            &b.coord_matrix() * &(&Mat::identity(f, pn.dim()) - &(&ux * &r))
        } else if m == n + 1 {
            &b1.coord_matrix() * &(&Mat::identity(f, pn1.dim()) - &(&uy * &rp))
        } else {
            Mat::identity(f, p.dim_at(m))
        }
    });
    let h = Graded::from_fn(p, p, -1, |m| {
        if m == n + 1 {
            &ux * &rp
        } else {
            Mat::zeros(f, p.dim_at(m - 1), p.dim_at(m))
        }
    });
    Ok(Step { q, iota, rho, h })
}

/// Cancels contractible summands `A e -id-> A e` one pair at a time until the
/// complex is minimal.
pub fn minimize(p: &Complex) -> Result<Minimization> {
    for m in p.terms() {
        if is_projective(m)?.is_none() {
            return Err(Error::InvalidModule("minimization needs projective terms".into()));
        }
    }
    let cat = projective_catalog(p.alg())?;
    let mut q = p.clone();
    let mut iota = Graded::identity(p);
    let mut rho = Graded::identity(p);
    let mut h = Graded::zero(p, p, -1);
    let mut cancelled = 0;
    while let Some((n, x, i)) = find_cancellable(&q, &cat.rad, &cat.idems) {
        let s = cancel(&q, n, &x, &cat.idems[i])?;
        // h_total = h + ι h_s ρ
        let inner = s.h.after(&rho, p, &q, &q);
        h = h.add(&iota.after(&inner, p, &q, p), p, p);
        iota = iota.after(&s.iota, &s.q, &q, p);
        rho = s.rho.after(&rho, p, &q, &s.q);
        q = s.q;
        cancelled += 1;
    }
    let id_q = Graded::identity(&q);
    if !rho.after(&iota, &q, p, &q).sub(&id_q, &q, &q).is_zero_map() {
        return Err(Error::InvalidModule("minimization: ρ ι is not the identity".into()));
    }
    let iota_rho = iota.after(&rho, p, &q, p);
    if !verify_homotopy(&Graded::identity(p), &iota_rho, &h, p, p) {
        return Err(Error::InvalidModule("minimization: homotopy witness fails".into()));
    }
    if !iota.is_chain_map(&q, p) || !rho.is_chain_map(p, &q) {
        return Err(Error::NotAMorphism("minimization maps are not chain maps".into()));
    }
    Ok(Minimization { q, iota, rho, homotopy: h, cancelled })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::homotopy_hom;
    use super::*;
    use crate::exactlin::Field;

    #[test]
    fn minimal_complex_is_untouched() {
        let f = Field::prime(3).unwrap();
        let a = dual_numbers(f);
        let p = periodic(&a, 0, 3);
        assert!(is_minimal(&p).unwrap());
        let m = minimize(&p).unwrap();
        assert_eq!(m.cancelled, 0);
        assert!(m.iota.sub(&Graded::identity(&p), &p, &p).is_zero_map());
    }

    #[test]
    fn contractible_summand_is_stripped() {
        for f in [Field::prime(2).unwrap(), Field::Rationals] {
            let a = dual_numbers(f);
            let p = periodic(&a, 0, 3);
            let c = Complex::contractible(&Module::regular(a.clone()), 1).unwrap();
            let big = p.direct_sum(&c).unwrap();
            assert!(!is_minimal(&big).unwrap());
            let m = minimize(&big).unwrap();
            assert!(is_minimal(&m.q).unwrap());
            assert_eq!(m.cancelled, 1);
            for n in p.degrees() {
                assert_eq!(m.q.dim_at(n), p.dim_at(n));
            }
            assert_eq!(homotopy_hom(&big, &big).unwrap().dim(), homotopy_hom(&m.q, &m.q).unwrap().dim());
        }
    }

    #[test]
    fn twisted_contractible_is_stripped() {
        // A -(1 + x)-> A is an isomorphism, so the complex is contractible
        let f = Field::Rationals;
        let a = dual_numbers(f);
        let r = Module::regular(a.clone());
        let u = a.right_mult_matrix(&[f.one(), f.one()]);
        let c = Complex::new(a.clone(), 0, vec![r.clone(), r], vec![u]).unwrap();
        let m = minimize(&c).unwrap();
        assert!(m.q.is_zero());
    }

    #[test]
    fn non_projective_terms_refused() {
        let f = Field::Rationals;
        let a = dual_numbers(f);
        let s = Complex::stalk(&simple(&a), 0).unwrap();
        assert!(minimize(&s).is_err());
    }
}

use std::sync::Arc;

use super::lift::require_main_hypotheses;
use super::{ind_l, triple_category, DTrMorphism, DerivedInduction, DerivedTriple};
use crate::algebra::PullbackData;
use crate::chaincx::{is_minimal, minimize, verify_homotopy, Complex, Graded};
use crate::error::{Error, Result};
use crate::exactlin::{Mat, Subspace};
use crate::modrep::is_projective;
use crate::triples::{counit, pb, pb_map, TripleMorphism};

/// Whether both projections carry radicals into the radical of `R'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RadicalCondition {
    pub second: bool,
    pub first: bool,
}

impl RadicalCondition {
    pub fn holds(&self) -> bool {
        self.second && self.first
    }
}

fn maps_radical_into(phi: &crate::algebra::AlgebraMorphism, rad_target: &Subspace) -> Result<bool> {
    let rad = phi.source.radical()?.space;
    Ok(rad.vectors().iter().all(|v| rad_target.contains(&phi.mat.mul_vec(v))))
}

pub fn radical_condition_check(data: &PullbackData) -> Result<RadicalCondition> {
    let rad = data.rp.radical()?.space;
    Ok(RadicalCondition { second: maps_radical_into(&data.pi2, &rad)?, first: maps_radical_into(&data.pi1, &rad)? })
}

/// A complex `P` over `R` with an isomorphism `ind_L(P) -> T` and its inverse.
#[derive(Clone, Debug)]
pub struct DensityLift {
    pub p: Complex,
    pub induction: DerivedInduction,
    pub iso: DTrMorphism,
    pub inverse: DTrMorphism,
    /// Summand pairs cancelled while minimizing the two legs.
    pub cancelled: (usize, usize),
}

/// Lifts a gluing derived triple to a complex over the pullback: minimize
/// both legs, check the transported `c` is degreewise invertible, glue each
/// degree as a fibre product and glue the differentials.
pub fn density_lift(t: &DerivedTriple) -> Result<DensityLift> {
    let data = &t.data;
    require_main_hypotheses(data)?;
    if !radical_condition_check(data)?.second {
        return Err(Error::HypothesisRefused("pi2 does not map rad R2 into rad R'".into()));
    }
    if !t.is_gluing()? {
        return Err(Error::HypothesisRefused("c is not a quasi-isomorphism".into()));
    }
    let cat = triple_category(data)?;
    let (p1, p2) = (t.p1(), t.p2());
    let m1 = minimize(p1)?;
    let m2 = minimize(p2)?;
    let (q1, q2) = (&m1.q, &m2.q);
    let fq1 = cat.l1.apply(q1)?;
    let fq2 = cat.l2.apply(q2)?;
    let (fp1, fp2) = (&t.glued.fa1, &t.glued.fa2);
    let iota1 = cat.l1.map(&m1.iota, q1, p1, &fq1, fp1);
    let rho2 = cat.l2.map(&m2.rho, p2, q2, fp2, &fq2);
    let ct = rho2.after(&t.c().after(&iota1, &fq1.complex, t.y1(), t.y2()), &fq1.complex, t.y2(), &fq2.complex);
    for (leg, name) in [(&fq1.complex, "R' ⊗ P1"), (&fq2.complex, "R' ⊗ P2")] {
        if !is_minimal(leg)? {
            return Err(Error::CheckFailed(format!("{name} is not minimal after minimizing")));
        }
    }
    if !ct.is_chain_map(&fq1.complex, &fq2.complex) || !ct.is_degreewise_iso(&fq1.complex, &fq2.complex) {
        return Err(Error::CheckFailed("transported c is not degreewise invertible".into()));
    }
    let tq = DerivedTriple::new(data.clone(), q1.clone(), q2.clone(), ct)?;

    // degreewise fibre products
    let (lo, hi) = (q1.lo().min(q2.lo()), q1.hi().max(q2.hi()));
    let mut pbs = Vec::new();
    let mut counits = Vec::new();
    for n in lo..=hi {
        let tn = tq.degree(n)?;
        let e = counit(&tn)?;
        if !e.map.is_iso() {
            return Err(Error::CheckFailed(format!("degree {n}: counit is not an isomorphism")));
        }
        if is_projective(&e.pb.module)?.is_none() {
            return Err(Error::CheckFailed(format!("degree {n}: fibre product is not projective")));
        }
        pbs.push(pb(&tn)?);
        counits.push(e);
    }
    let mut diffs = Vec::new();
    for n in lo..hi {
        let i = (n - lo) as usize;
        let dm = TripleMorphism { f1: q1.diff(n), f2: q2.diff(n) };
        diffs.push(pb_map(&pbs[i], &pbs[i + 1], &dm)?);
    }
    let terms = pbs.iter().map(|b| b.module.clone()).collect();
    let p = if lo > hi { Complex::zero(data.r.clone()) } else { Complex::new(data.r.clone(), lo, terms, diffs)? };
    let induction = ind_l(data, &p)?;
    let f = data.r.field();
    let src = &induction.triple;
    let pick = |n: i64, leg: usize, rows: usize, cols: usize| -> Mat {
        let i = n - lo;
        if i >= 0 && (i as usize) < counits.len() {
            let m = &counits[i as usize].map;
            if leg == 1 { m.f1.clone() } else { m.f2.clone() }
        } else {
            Mat::zeros(f, rows, cols)
        }
    };
    let e1 = Graded::from_fn(src.p1(), q1, 0, |n| pick(n, 1, q1.dim_at(n), src.p1().dim_at(n)));
    let e2 = Graded::from_fn(src.p2(), q2, 0, |n| pick(n, 2, q2.dim_at(n), src.p2().dim_at(n)));
    let eps = DTrMorphism { f1: e1, f2: e2, witness: Graded::zero(src.y1(), tq.y2(), -1) };
    if !cat.is_morphism(&src.glued, &tq.glued, &eps) || !eps.f1.is_degreewise_iso(src.p1(), q1) || !eps.f2.is_degreewise_iso(src.p2(), q2) {
        return Err(Error::CheckFailed("counits do not form an isomorphism of derived triples".into()));
    }
    // (ι1, ι2): Tq -> T with witness F2(h2) c F1(ι1)
    let h2 = cat.l2.map(&m2.homotopy, p2, p2, fp2, fp2);
    let w = h2.after(&t.c().after(&iota1, &fq1.complex, t.y1(), t.y2()), &fq1.complex, t.y2(), t.y2());
    let up = DTrMorphism { f1: m1.iota.clone(), f2: m2.iota.clone(), witness: w };
    // (ρ1, ρ2): T -> Tq with witness -F2(ρ2) c F1(h1)
    let h1 = cat.l1.map(&m1.homotopy, p1, p1, fp1, fp1);
    let w = rho2.after(&t.c().after(&h1, t.y1(), t.y1(), t.y2()), t.y1(), t.y2(), &fq2.complex);
    let down = DTrMorphism { f1: m1.rho.clone(), f2: m2.rho.clone(), witness: w.scale(&-f.one()) };
    for (m, s, g, name) in [(&up, &tq, t, "inclusion"), (&down, t, &tq, "retraction")] {
        if !cat.is_morphism(&s.glued, &g.glued, m) {
            return Err(Error::CheckFailed(format!("minimization {name} is not a derived-triple morphism")));
        }
    }
    let iso = cat.compose(&up, &eps, &src.glued, &tq.glued, &t.glued);
    let eps_inv = DTrMorphism {
        f1: eps.f1.inverse(src.p1(), q1).expect("checked invertible"),
        f2: eps.f2.inverse(src.p2(), q2).expect("checked invertible"),
        witness: Graded::zero(tq.y1(), src.y2(), -1),
    };
    let inverse = cat.compose(&eps_inv, &down, &t.glued, &tq.glued, &src.glued);
    // inverse ∘ iso = id exactly; iso ∘ inverse = ι ρ ≃ id
    let back1 = inverse.f1.after(&iso.f1, src.p1(), p1, src.p1());
    let back2 = inverse.f2.after(&iso.f2, src.p2(), p2, src.p2());
    let fwd1 = iso.f1.after(&inverse.f1, p1, src.p1(), p1);
    let fwd2 = iso.f2.after(&inverse.f2, p2, src.p2(), p2);
    let ok = back1.sub(&Graded::identity(src.p1()), src.p1(), src.p1()).is_zero_map()
        && back2.sub(&Graded::identity(src.p2()), src.p2(), src.p2()).is_zero_map()
        && verify_homotopy(&Graded::identity(p1), &fwd1, &m1.homotopy, p1, p1)
        && verify_homotopy(&Graded::identity(p2), &fwd2, &m2.homotopy, p2, p2)
        && cat.is_morphism(&src.glued, &t.glued, &iso)
        && cat.is_morphism(&t.glued, &src.glued, &inverse);
    if !ok {
        return Err(Error::CheckFailed("lift isomorphism does not verify".into()));
    }
    Ok(DensityLift { p, induction, iso, inverse, cancelled: (m1.cancelled, m2.cancelled) })
}

/// Lifts `ind_L(p)` and checks the result is homotopy equivalent to `p`.
pub fn density_round_trip(data: &Arc<PullbackData>, p: &Complex) -> Result<DensityLift> {
    let ip = ind_l(data, p)?;
    let lift = density_lift(&ip.triple)?;
    let g = super::fullness_witness(&lift.induction, &ip, &lift.iso)?.g;
    match super::lift::detect_iso(&lift.induction, &ip, &g)? {
        super::lift::IsoDetection::Detected { .. } => Ok(lift),
        super::lift::IsoDetection::NotIso => Err(Error::CheckFailed("lift is not homotopy equivalent to the source".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::algebra::{pullback, triangular, Algebra, AlgebraMorphism};
    use crate::exactlin::Field;
    use crate::modrep::Module;
    use crate::triples::fixtures::{e1, e2, e3};

    #[test]
    fn radical_conditions_on_the_examples() {
        assert!(radical_condition_check(&e1(Field::prime(2).unwrap())).unwrap().holds());
        assert!(radical_condition_check(&e3(Field::Rationals)).unwrap().holds());
    }

    #[test]
    fn radical_condition_fails_for_triangular_into_matrices() {
        // upper triangular 2x2 matrices inside all 2x2 matrices: the strictly
        // upper entry is radical on one side only
        let f = Field::Rationals;
        let k = Algebra::ground(f);
        let i = Mat::identity(f, 1);
        let (t2, _) = triangular(&k, &k, 1, &["m".into()], std::slice::from_ref(&i), std::slice::from_ref(&i)).unwrap();
        let t2 = Arc::new(t2);
        let m2 = Arc::new(Algebra::matrix_algebra(f, 2));
        // basis b = E00, m = E01, a = E11
        let inc = Mat::from_i64(f, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 0], vec![0, 0, 1]]);
        let pi2 = AlgebraMorphism::new(t2, m2.clone(), inc).unwrap();
        let pi1 = AlgebraMorphism::identity(m2);
        let data = pullback(&pi1, &pi2).unwrap();
        let rc = radical_condition_check(&data).unwrap();
        assert!(!rc.second);
        assert!(rc.first);
    }

    #[test]
    fn induced_triples_lift_back() {
        for f in [Field::prime(2).unwrap(), Field::Rationals] {
            let d = e1(f);
            let x = nilpotent(&d);
            for p in [diagonal(&d, 0, &[1], &x), diagonal(&d, 0, &[1, 1], &x), diagonal(&d, -1, &[1, 2, 1], &x)] {
                let l = density_round_trip(&d, &p).unwrap();
                assert_eq!(l.p.total_dim(), p.total_dim());
            }
            // a contractible summand disappears
            let c = Complex::contractible(&Module::regular(d.r.clone()), 0).unwrap();
            let l = density_round_trip(&d, &c).unwrap();
            assert!(l.p.is_zero());
        }
    }

    #[test]
    fn twisted_two_term_triple() {
        let f = Field::Rationals;
        let d = e1(f);
        let cat = triple_category(&d).unwrap();
        let r1 = Module::regular(d.r1.clone());
        let x1 = d.r1.right_mult_matrix(&d.r1.basis_vec(1));
        let p1 = Complex::new(d.r1.clone(), 0, vec![r1.clone(), r1], vec![x1]).unwrap();
        let k = Module::regular(d.r2.clone());
        let p2 = Complex::new(d.r2.clone(), 0, vec![k.clone(), k], vec![Mat::zeros(f, 1, 1)]).unwrap();
        let y1 = cat.l1.apply(&p1).unwrap().complex;
        let y2 = cat.l2.apply(&p2).unwrap().complex;
        let c = Graded::from_fn(&y1, &y2, 0, |n| Mat::from_i64(f, &[vec![if n == 0 { 2 } else { 3 }]]));
        let t = DerivedTriple::new(d.clone(), p1, p2, c).unwrap();
        let l = density_lift(&t).unwrap();
        assert_eq!((l.p.dim_at(0), l.p.dim_at(1)), (2, 2));
        assert!(triple_category(&d).unwrap().is_morphism(&l.induction.triple.glued, &t.glued, &l.iso));
    }

    #[test]
    fn contractible_leg_is_minimized_away() {
        let f = Field::Rationals;
        let d = e1(f);
        let cat = triple_category(&d).unwrap();
        let p1 = Complex::stalk(&Module::regular(d.r1.clone()), 0).unwrap();
        let k = |n| Module::free(d.r2.clone(), n);
        let p2 = Complex::new(d.r2.clone(), 0, vec![k(2), k(1)], vec![Mat::from_i64(f, &[vec![0, 1]])]).unwrap();
        let y1 = cat.l1.apply(&p1).unwrap().complex;
        let y2 = cat.l2.apply(&p2).unwrap().complex;
        let c = Graded::from_fn(&y1, &y2, 0, |n| {
            if n == 0 {
                Mat::from_i64(f, &[vec![1], vec![0]])
            } else {
                Mat::zeros(f, y2.dim_at(n), y1.dim_at(n))
            }
        });
        let t = DerivedTriple::new(d.clone(), p1, p2, c).unwrap();
        let l = density_lift(&t).unwrap();
        assert_eq!(l.cancelled, (0, 1));
        assert_eq!(l.p.total_dim(), d.r.dim());
    }

    #[test]
    fn non_gluing_and_non_surjective_are_refused() {
        let f = Field::Rationals;
        let d = e1(f);
        let p = Complex::stalk(&Module::regular(d.r.clone()), 0).unwrap();
        let t = ind_l(&d, &p).unwrap().triple;
        let zero_c = Graded::zero(t.y1(), t.y2(), 0);
        let bad = DerivedTriple::new(d, t.p1().clone(), t.p2().clone(), zero_c).unwrap();
        assert!(matches!(density_lift(&bad), Err(Error::HypothesisRefused(_))));
        let d2 = e2(f);
        let k1 = Complex::stalk(&Module::regular(d2.r1.clone()), 0).unwrap();
        let k2 = Complex::stalk(&Module::regular(d2.r2.clone()), 0).unwrap();
        let cat = triple_category(&d2).unwrap();
        let y1 = cat.l1.apply(&k1).unwrap().complex;
        let t = DerivedTriple::new(d2, k1, k2, Graded::identity(&y1)).unwrap();
        let e = density_lift(&t).unwrap_err();
        assert!(e.to_string().contains("not surjective"));
    }
}

use std::sync::Arc;

use super::{induction_legs, ind_l, ind_l_map, Applied, DTrMorphism, DerivedInduction, Leg};
use crate::algebra::PullbackData;
use crate::chaincx::{
    chain_operator, flat_len, flat_over, homotopy_hom, homotopy_inverse, joint_range, null_homotopy_witness, null_operator,
    tensor_map, verify_homotopy, ChainMap, Complex, Graded, Homotopy, MapSpace,
};
use crate::diag::Diagnostics;
use crate::error::{Error, Result};
use crate::exactlin::{rref, solve_particular, Mat, Subspace};
use crate::gamma::{gamma_ring, regular_pair_bimodule, twisted_regular_pair, GammaRing};

/// `g: P -> Q` with `R_i ⊗ g - f_i = d h_i + h_i d`.
#[derive(Clone, Debug)]
pub struct FullnessWitness {
    pub g: ChainMap,
    pub h1: Homotopy,
    pub h2: Homotopy,
}

/// A class `[g]` killed by both legs, with the null-homotopies.
pub type KernelElement = FullnessWitness;

struct LegBlock {
    hs: MapSpace,
    lo: i64,
    hi: i64,
    rows: usize,
}

/// Unknowns `(g, h1, h2)`; equations: `g` is a chain map and
/// `R_i ⊗ g - (d h_i + h_i d)` equals a prescribed leg map.
struct LiftSystem {
    maps: MapSpace,
    legs: [LegBlock; 2],
    op: Mat,
    chain_rows: usize,
}

fn leg_parts(src: &DerivedInduction, tgt: &DerivedInduction, i: usize) -> (Applied, Applied) {
    if i == 0 {
        (src.leg1.clone(), tgt.leg1.clone())
    } else {
        (src.leg2.clone(), tgt.leg2.clone())
    }
}

fn lift_system(src: &DerivedInduction, tgt: &DerivedInduction) -> Result<LiftSystem> {
    let (p, q) = (&src.source, &tgt.source);
    let f = p.field();
    let maps = MapSpace::new(p, q, 0)?;
    let chain = chain_operator(&maps);
    let (l1, l2) = induction_legs(&src.triple.data)?;
    let mut blocks = Vec::new();
    let mut ops = Vec::new();
    for (i, leg) in [l1, l2].iter().enumerate() {
        let (ax, ay) = leg_parts(src, tgt, i);
        let (x, y) = (&ax.complex, &ay.complex);
        let hs = MapSpace::new(x, y, -1)?;
        let (lo, hi) = joint_range(&[x, y], 0);
        let rows = flat_len(x, y, 0, lo, hi);
        let fop = maps.operator(rows, |g| flat_over(&leg.map(g, p, q, &ax, &ay), x, y, lo, hi));
        let bop = hs.operator(rows, |h| flat_over(&h.boundary(x, y), x, y, lo, hi));
        ops.push((fop, bop));
        blocks.push(LegBlock { hs, lo, hi, rows });
    }
    let [b1, b2]: [LegBlock; 2] = blocks.try_into().map_err(|_| Error::InvalidInput("two legs".into()))?;
    let r0 = chain.rows();
    let n = maps.dim + b1.hs.dim + b2.hs.dim;
    let mut op = Mat::zeros(f, r0 + b1.rows + b2.rows, n);
    op.set_block(0, 0, &chain);
    op.set_block(r0, 0, &ops[0].0);
    op.set_block(r0, maps.dim, &-&ops[0].1);
    op.set_block(r0 + b1.rows, 0, &ops[1].0);
    op.set_block(r0 + b1.rows, maps.dim + b1.hs.dim, &-&ops[1].1);
    Ok(LiftSystem { maps, legs: [b1, b2], op, chain_rows: r0 })
}

impl LiftSystem {
    fn assemble(&self, z: &[crate::exactlin::Scalar]) -> FullnessWitness {
        let (m, d1) = (self.maps.dim, self.legs[0].hs.dim);
        FullnessWitness {
            g: self.maps.assemble(&z[..m]),
            h1: self.legs[0].hs.assemble(&z[m..m + d1]),
            h2: self.legs[1].hs.assemble(&z[m + d1..]),
        }
    }
}

fn verify_witness(src: &DerivedInduction, tgt: &DerivedInduction, w: &FullnessWitness, f1: &ChainMap, f2: &ChainMap) -> Result<bool> {
    let (p, q) = (&src.source, &tgt.source);
    if !w.g.is_chain_map(p, q) {
        return Ok(false);
    }
    let m = ind_l_map(src, tgt, &w.g)?;
    Ok(verify_homotopy(&m.f1, f1, &w.h1, &src.leg1.complex, &tgt.leg1.complex)
        && verify_homotopy(&m.f2, f2, &w.h2, &src.leg2.complex, &tgt.leg2.complex))
}

pub(crate) fn require_main_hypotheses(data: &Arc<PullbackData>) -> Result<Arc<GammaRing>> {
    let ring = gamma_ring(data)?;
    ring.require_hypotheses()?;
    Ok(ring)
}

/// A chain map `g: P -> Q` whose induced pair equals `m` up to homotopy.
pub fn fullness_witness(src: &DerivedInduction, tgt: &DerivedInduction, m: &DTrMorphism) -> Result<FullnessWitness> {
    require_main_hypotheses(&src.triple.data)?;
    let sys = lift_system(src, tgt)?;
    let f = src.source.field();
    let mut rhs = vec![f.zero(); sys.chain_rows];
    rhs.extend(flat_over(&m.f1, &src.leg1.complex, &tgt.leg1.complex, sys.legs[0].lo, sys.legs[0].hi));
    rhs.extend(flat_over(&m.f2, &src.leg2.complex, &tgt.leg2.complex, sys.legs[1].lo, sys.legs[1].hi));
    let z = solve_particular(&sys.op, &rhs)
        .ok_or_else(|| Error::CheckFailed("derived-triple morphism has no preimage".into()))?;
    let w = sys.assemble(&z);
    if !verify_witness(src, tgt, &w, &m.f1, &m.f2)? {
        return Err(Error::CheckFailed("preimage witness does not verify".into()));
    }
    Ok(w)
}

/// Basis of the classes `[g]: P -> Q` with `R1 ⊗ g ≃ 0` and `R2 ⊗ g ≃ 0`.
pub fn kernel_basis(src: &DerivedInduction, tgt: &DerivedInduction) -> Result<Vec<KernelElement>> {
    let sys = lift_system(src, tgt)?;
    let sol = sys.op.kernel();
    let m = sys.maps.dim;
    let (_, null) = null_operator(&sys.maps)?;
    let q = Subspace::span_of_cols(&null).ambient_quotient();
    let classes = &q.proj * &sol.basis().block(0, 0, m, sol.dim());
    let mut out = Vec::new();
    for j in rref(&classes).pivots {
        let w = sys.assemble(&sol.vector(j));
        let zero1 = Graded::zero(&src.leg1.complex, &tgt.leg1.complex, 0);
        let zero2 = Graded::zero(&src.leg2.complex, &tgt.leg2.complex, 0);
        if !verify_witness(src, tgt, &w, &zero1, &zero2)? {
            return Err(Error::CheckFailed("kernel witness does not verify".into()));
        }
        out.push(w);
    }
    Ok(out)
}

/// For all composable kernel classes `u: X -> Y`, `v: Y -> Z` among the
/// objects, `v u` is null-homotopic.
pub fn square_zero_check(data: &Arc<PullbackData>, objects: &[Complex]) -> Result<Diagnostics> {
    require_main_hypotheses(data)?;
    let inds = objects.iter().map(|p| ind_l(data, p)).collect::<Result<Vec<_>>>()?;
    let n = inds.len();
    let mut kernels = vec![vec![Vec::new(); n]; n];
    let mut d = Diagnostics::new();
    let mut total = 0;
    for i in 0..n {
        for j in 0..n {
            kernels[i][j] = kernel_basis(&inds[i], &inds[j])?;
            total += kernels[i][j].len();
        }
    }
    let mut pairs = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for u in &kernels[i][j] {
                    for v in &kernels[j][k] {
                        pairs += 1;
                        let vu = v.g.after(&u.g, &objects[i], &objects[j], &objects[k]);
                        if null_homotopy_witness(&vu, &objects[i], &objects[k])?.is_none() {
                            d.fail(format!("objects ({i}, {j}, {k}): product of kernel classes is not null-homotopic"));
                        }
                    }
                }
            }
        }
    }
    d.note(format!("kernel classes over all ordered pairs: {total}; composable products checked: {pairs}"));
    Ok(d)
}

/// Outcome of testing one chain map.
#[derive(Clone, Debug)]
pub enum IsoDetection {
    /// Some leg of `ind_L(g)` is not a homotopy equivalence.
    NotIso,
    /// `g` is a homotopy equivalence, with a two-sided inverse built from a
    /// fullness preimage corrected by the kernel class.
    Detected { inverse: ChainMap, left: Homotopy, right: Homotopy },
}

/// If `ind_L(g)` is an isomorphism of derived triples, builds a homotopy
/// inverse of `g`: lift the inverse of `ind_L(g)` to `g'`, then
/// `g' g = 1 + k` with `k` in the square-zero kernel, so `(1 - k) g'` is a
/// left inverse; likewise on the right.
pub fn detect_iso(src: &DerivedInduction, tgt: &DerivedInduction, g: &ChainMap) -> Result<IsoDetection> {
    let (p, q) = (&src.source, &tgt.source);
    let m = ind_l_map(src, tgt, g)?;
    let Some(a1) = homotopy_inverse(&m.f1, &src.leg1.complex, &tgt.leg1.complex)? else {
        return Ok(IsoDetection::NotIso);
    };
    let Some(a2) = homotopy_inverse(&m.f2, &src.leg2.complex, &tgt.leg2.complex)? else {
        return Ok(IsoDetection::NotIso);
    };
    // the inverse pair is compatible up to homotopy
    let (ts, ss) = (&tgt.triple, &src.triple);
    let cat = super::triple_category(&ss.data)?;
    let ya1 = cat.l1.map(&a1.inverse, ts.p1(), ss.p1(), &ts.glued.fa1, &ss.glued.fa1);
    let ya2 = cat.l2.map(&a2.inverse, ts.p2(), ss.p2(), &ts.glued.fa2, &ss.glued.fa2);
    let lhs = ss.c().after(&ya1, ts.y1(), ss.y1(), ss.y2());
    let rhs = ya2.after(ts.c(), ts.y1(), ts.y2(), ss.y2());
    let diff = lhs.sub(&rhs, ts.y1(), ss.y2());
    let witness = null_homotopy_witness(&diff, ts.y1(), ss.y2())?
        .ok_or_else(|| Error::CheckFailed("inverse legs are not compatible up to homotopy".into()))?;
    let inv = DTrMorphism { f1: a1.inverse, f2: a2.inverse, witness };
    let gp = fullness_witness(tgt, src, &inv)?.g;
    let id_p = Graded::identity(p);
    let id_q = Graded::identity(q);
    let k = gp.after(g, p, q, p).sub(&id_p, p, p);
    let kq = g.after(&gp, q, p, q).sub(&id_q, q, q);
    let left_inv = id_p.sub(&k, p, p).after(&gp, q, p, p);
    let right_inv = gp.after(&id_q.sub(&kq, q, q), q, q, p);
    let lg = left_inv.after(g, p, q, p).sub(&id_p, p, p);
    let left = null_homotopy_witness(&lg, p, p)?
        .ok_or_else(|| Error::CheckFailed("corrected preimage is not a left homotopy inverse".into()))?;
    let gr = g.after(&right_inv, q, p, q).sub(&id_q, q, q);
    null_homotopy_witness(&gr, q, q)?
        .ok_or_else(|| Error::CheckFailed("corrected preimage is not a right homotopy inverse".into()))?;
    // a left and a right inverse agree up to homotopy, so the left one is two-sided
    let gl = g.after(&left_inv, q, p, q).sub(&id_q, q, q);
    let right = null_homotopy_witness(&gl, q, q)?
        .ok_or_else(|| Error::CheckFailed("left inverse is not a right inverse".into()))?;
    Ok(IsoDetection::Detected { inverse: left_inv, left, right })
}

/// On each object: the identity, `1 + u` for kernel classes `u`, and every
/// basis class of endomorphisms. Whenever `ind_L(g)` is invertible, `g` must
/// be a homotopy equivalence; whenever it is not, `g` must not be one either.
pub fn detects_iso_check(data: &Arc<PullbackData>, objects: &[Complex]) -> Result<Diagnostics> {
    require_main_hypotheses(data)?;
    let mut d = Diagnostics::new();
    let (mut detected, mut refused) = (0, 0);
    for (i, p) in objects.iter().enumerate() {
        let ip = ind_l(data, p)?;
        let id = Graded::identity(p);
        let mut samples = vec![id.clone()];
        for u in kernel_basis(&ip, &ip)? {
            samples.push(id.add(&u.g, p, p));
        }
        samples.extend(homotopy_hom(p, p)?.reps);
        samples.push(Graded::zero(p, p, 0));
        for (s, g) in samples.iter().enumerate() {
            match detect_iso(&ip, &ip, g) {
                Ok(IsoDetection::Detected { .. }) => detected += 1,
                Ok(IsoDetection::NotIso) if s == 0 => d.fail(format!("object {i}: identity not detected")),
                Ok(IsoDetection::NotIso) => {
                    refused += 1;
                    d.check(homotopy_inverse(g, p, p)?.is_none(), || {
                        format!("object {i}, sample {s}: a homotopy equivalence whose image is not invertible")
                    });
                }
                Err(e) => d.fail(format!("object {i}, sample {s}: {e}")),
            }
        }
    }
    d.note(format!("detected equivalences: {detected}; non-invertible images: {refused}"));
    Ok(d)
}

/// `(R2; R1) ⊗_R -` from complexes over `R` to complexes over `Γ` is fully
/// faithful on the homotopy category: equal Hom dimensions and an injective
/// induced map.
pub fn cor_ff_check(data: &Arc<PullbackData>, objects: &[Complex]) -> Result<Diagnostics> {
    let ring = require_main_hypotheses(data)?;
    let t0 = twisted_regular_pair(&ring)?;
    let bim = regular_pair_bimodule(&ring, &t0)?;
    let leg = Leg::Tensor(bim.clone());
    let applied = objects.iter().map(|p| leg.apply(p)).collect::<Result<Vec<_>>>()?;
    let mut d = Diagnostics::new();
    for (i, p) in objects.iter().enumerate() {
        for (j, q) in objects.iter().enumerate() {
            let (tp, tq) = (applied[i].tensored.as_ref().unwrap(), applied[j].tensored.as_ref().unwrap());
            let hk = homotopy_hom(p, q)?;
            let hg = homotopy_hom(&tp.complex, &tq.complex)?;
            d.check(hk.dim() == hg.dim(), || format!("pair ({i}, {j}): {} classes over R, {} over Γ", hk.dim(), hg.dim()));
            let cols = hk
                .reps
                .iter()
                .map(|r| hg.class_of(&tensor_map(&bim, r, p, q, tp, tq)))
                .collect::<Option<Vec<_>>>();
            match cols {
                Some(cols) => {
                    let rank = Mat::from_cols(p.field(), hg.dim(), &cols).rank();
                    d.check(rank == hk.dim(), || format!("pair ({i}, {j}): induced map has rank {rank} < {}", hk.dim()));
                }
                None => d.fail(format!("pair ({i}, {j}): image of a chain map is not a chain map")),
            }
        }
    }
    Ok(d)
}

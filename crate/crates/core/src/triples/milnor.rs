use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{counit, hom_triples, ind, ind_map, triple_iso, Induction, Triple};
use crate::algebra::PullbackData;
use crate::diag::Diagnostics;
use crate::error::{Error, Result};
use crate::exactlin::{Field, Mat, Scalar, Subspace};
use crate::modrep::{
    induce, iso_test, projective_catalog, projective_cover, random_invertible, IsoVerdict, Module,
    ProjectiveCatalog,
};

#[derive(Clone, Copy, Debug)]
pub struct MilnorOptions {
    /// Bound on `dim` of projective `R`-modules, and on the glued dimension of triples.
    pub dim_bound: usize,
    pub seed: u64,
    /// Ceiling on the number of gluing maps enumerated per pair of legs.
    pub state_ceiling: u64,
    /// Gluing maps drawn per pair of legs when enumeration is impossible.
    pub samples_per_pair: usize,
}

impl Default for MilnorOptions {
    fn default() -> Self {
        MilnorOptions { dim_bound: 4, seed: 0, state_ceiling: 1 << 20, samples_per_pair: 3 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleClass {
    pub leg1: Vec<usize>,
    pub leg2: Vec<usize>,
    pub glued_dim: usize,
    /// Gluing maps in this class, when enumerated.
    pub orbit_size: Option<usize>,
    /// Multiplicities of `Pb T` when it is projective and `epsilon_T` is invertible.
    pub preimage: Option<Vec<usize>>,
    #[serde(skip)]
    pub triple: Triple,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomCheck {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub hom_modules: usize,
    pub hom_triples: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MilnorReport {
    pub dim_bound: usize,
    /// Every gluing map was enumerated; otherwise they were sampled.
    pub exhaustive: bool,
    pub projective_classes: Vec<Vec<usize>>,
    pub triple_classes: Vec<TripleClass>,
    /// For each projective class, the triple class of its induction.
    pub image: Vec<Option<usize>>,
    pub bijection: bool,
    pub fully_faithful: bool,
    pub hom_checks: Vec<HomCheck>,
    pub diag: Diagnostics,
}

impl MilnorReport {
    pub fn ok(&self) -> bool {
        self.bijection && self.fully_faithful && self.diag.ok()
    }
}

struct Leg {
    mults: Vec<usize>,
    module: Module,
    /// `R' ⊗ P`
    base: Module,
}

fn legs(cat: &ProjectiveCatalog, pi: &crate::algebra::AlgebraMorphism, bound: usize) -> Result<Vec<Leg>> {
    cat.multiplicities_up_to(bound)
        .into_iter()
        .map(|mults| {
            let module = cat.sum(&mults)?;
            let base = induce(pi, &module)?.module;
            Ok(Leg { mults, module, base })
        })
        .collect()
}

fn combos(f: Field, basis: &[Mat], rows: usize, cols: usize, ceiling: u64) -> Result<Vec<Mat>> {
    let p = f.order().expect("prime field");
    let total = (p as u128).checked_pow(basis.len() as u32).filter(|&t| t <= ceiling as u128).ok_or_else(|| {
        Error::Budget(format!("{p}^{} gluing maps exceed the ceiling {ceiling}", basis.len()))
    })?;
    let mut out = Vec::with_capacity(total as usize);
    let mut digits = vec![0u64; basis.len()];
    for _ in 0..total {
        let mut m = Mat::zeros(f, rows, cols);
        for (b, &dgt) in basis.iter().zip(&digits) {
            if dgt != 0 {
                m = &m + &b.scale(&f.from_i64(dgt as i64));
            }
        }
        out.push(m);
        for d in digits.iter_mut() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
    }
    Ok(out)
}

/// Compare iso classes of f.g. projective `R`-modules with iso classes of
/// gluing triples of projectives, and check `Ind` is fully faithful on them.
pub fn milnor_check(data: &Arc<PullbackData>, opts: &MilnorOptions) -> Result<MilnorReport> {
    if !data.pi1_surjective() {
        return Err(Error::HypothesisRefused(
            "pi1 is not surjective; induction need not reach every gluing triple of projectives".into(),
        ));
    }
    let f = data.r.field();
    let bound = opts.dim_bound;
    let mut d = Diagnostics::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let cat_r = projective_catalog(&data.r)?;
    let cat1 = projective_catalog(&data.r1)?;
    let cat2 = projective_catalog(&data.r2)?;
    let exhaustive = f.order().is_some();

    // projective R-modules
    let classes = cat_r.multiplicities_up_to(bound);
    let mut inds: Vec<Induction> = Vec::with_capacity(classes.len());
    for v in &classes {
        inds.push(ind(data, &cat_r.sum(v)?)?);
    }

    // gluing triples of projectives
    let legs2 = legs(&cat2, &data.pi2, bound)?;
    let max1 = legs2.iter().map(|l| bound + l.base.dim() - l.module.dim()).max().unwrap_or(bound);
    let legs1 = legs(&cat1, &data.pi1, max1)?;
    let mut reps: Vec<TripleClass> = Vec::new();
    for l2 in &legs2 {
        let s = l2.base.dim();
        for l1 in &legs1 {
            if l1.base.dim() != s || l1.module.dim() + l2.module.dim() > bound + s {
                continue;
            }
            match iso_test(&l1.base, &l2.base, opts.seed)? {
                IsoVerdict::Isomorphic(_) => {}
                IsoVerdict::NotIsomorphic(_) => continue,
                IsoVerdict::Inconclusive => {
                    d.fail(format!("could not decide R' ⊗ P1 ≅ R' ⊗ P2 for legs {:?}, {:?}", l1.mults, l2.mults));
                    continue;
                }
            }
            let probe = Triple::new(data.clone(), l1.module.clone(), l2.module.clone(), Mat::zeros(f, s, s))?;
            let homs = probe.y1.module.hom(&probe.y2.module)?;
            let candidates: Vec<Mat> = if exhaustive {
                combos(f, &homs, s, s, opts.state_ceiling)?.into_iter().filter(|c| c.is_invertible()).collect()
            } else {
                let mut v = Vec::new();
                for _ in 0..opts.samples_per_pair {
                    if let Some(c) = random_invertible(f, s, &homs, &mut rng, 32) {
                        v.push(c);
                    }
                }
                v
            };
            let first = reps.len();
            for c in candidates {
                let mut t = probe.clone();
                t.c = c;
                let mut found = None;
                for (k, rep) in reps[first..].iter().enumerate() {
                    match triple_iso(&rep.triple, &t, opts.seed)? {
                        IsoVerdict::Isomorphic(_) => {
                            found = Some(first + k);
                            break;
                        }
                        IsoVerdict::NotIsomorphic(_) => {}
                        IsoVerdict::Inconclusive => d.fail("triple isomorphism search was inconclusive"),
                    }
                }
                match found {
                    Some(k) => {
                        if let Some(n) = reps[k].orbit_size.as_mut() {
                            *n += 1;
                        }
                    }
                    None => reps.push(TripleClass {
                        leg1: l1.mults.clone(),
                        leg2: l2.mults.clone(),
                        glued_dim: t.glued_dim(),
                        orbit_size: exhaustive.then_some(1),
                        preimage: None,
                        triple: t,
                    }),
                }
            }
        }
    }

    // preimages
    for (k, rep) in reps.iter_mut().enumerate() {
        let e = counit(&rep.triple)?;
        let m = &e.pb.module;
        let cover = projective_cover(&cat_r, m)?;
        if e.map.is_iso() && cover.map.is_invertible() {
            let mut mults = vec![0; cat_r.classes.len()];
            for &c in &cover.summands {
                mults[c] += 1;
            }
            rep.preimage = Some(mults);
        } else {
            d.fail(format!("triple class {k} has no projective preimage"));
        }
    }

    // Ind on objects
    let mut image = Vec::with_capacity(classes.len());
    for (v, i) in classes.iter().zip(&inds) {
        let mut hits = Vec::new();
        for (k, rep) in reps.iter().enumerate() {
            if let IsoVerdict::Isomorphic(_) = triple_iso(&i.triple, &rep.triple, opts.seed)? {
                hits.push(k);
            }
        }
        if hits.len() != 1 {
            d.fail(format!("Ind of projective {v:?} matches {} triple classes", hits.len()));
        }
        image.push(hits.first().copied());
    }
    let mut seen = vec![false; reps.len()];
    for k in image.iter().flatten() {
        seen[*k] = true;
    }
    let injective = {
        let mut hit: Vec<usize> = image.iter().flatten().copied().collect();
        hit.sort_unstable();
        hit.windows(2).all(|w| w[0] != w[1])
    };
    let bijection = image.iter().all(Option::is_some)
        && injective
        && seen.iter().all(|&s| s)
        && classes.len() == reps.len()
        && reps.iter().all(|r| r.preimage.is_some());

    // Ind on morphisms
    let mut hom_checks = Vec::new();
    let mut fully_faithful = true;
    for (a, ia) in classes.iter().zip(&inds) {
        for (b, ib) in classes.iter().zip(&inds) {
            let h = ia.module.hom(&ib.module)?;
            let ht = hom_triples(&ia.triple, &ib.triple)?.len();
            let len = ia.triple.x1.dim() * ib.triple.x1.dim() + ia.triple.x2.dim() * ib.triple.x2.dim();
            let flat: Vec<Vec<Scalar>> = h.iter().map(|g| ind_map(ia, ib, g).flat()).collect();
            let rank = Subspace::span_of_vectors(f, len, &flat).dim();
            if rank != h.len() || h.len() != ht {
                fully_faithful = false;
                d.fail(format!("Ind on Hom({a:?}, {b:?}): rank {rank}, dims {} and {ht}", h.len()));
            }
            hom_checks.push(HomCheck { source: a.clone(), target: b.clone(), hom_modules: h.len(), hom_triples: ht, rank });
        }
    }
    if !exhaustive {
        d.note("gluing maps were sampled, not enumerated");
    }
    Ok(MilnorReport {
        dim_bound: bound,
        exhaustive,
        projective_classes: classes,
        triple_classes: reps,
        image,
        bijection,
        fully_faithful,
        hom_checks,
        diag: d,
    })
}

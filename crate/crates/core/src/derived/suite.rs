use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::lift::require_main_hypotheses;
use super::views::{comma_hom, dphi};
use super::{
    cor_ff_check, density_lift, density_round_trip, detects_iso_check, dtr_hom, fullness_witness, ind_l, ind_l_map,
    square_zero_check, triple_category, DerivedTriple,
};
use crate::algebra::PullbackData;
use crate::chaincx::{verify_homotopy, Complex};
use crate::diag::Diagnostics;
use crate::error::{Error, Result};
use crate::exactlin::{random_scalar, Mat};
use crate::modrep::{projective_catalog, Module, ProjectiveCatalog, Side};
use crate::triples::{counterexample_demo, CounterexampleReport};

/// Shape of the random complexes fed to the suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SampleConfig {
    /// Complexes sampled per seed.
    pub samples: usize,
    /// Number of consecutive degrees a complex may occupy.
    pub max_support: usize,
    /// Largest dimension of a single term.
    pub max_dim: usize,
    pub seeds: usize,
    /// Re-verify every certificate from its raw data after it is produced.
    pub recheck: bool,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { samples: 3, max_support: 4, max_dim: 6, seeds: 5, recheck: false }
    }
}

fn random_projective(cat: &ProjectiveCatalog, rng: &mut impl Rng, max_dim: usize) -> Result<Module> {
    let mut parts: Vec<&Module> = Vec::new();
    let mut dim = 0;
    let budget = rng.gen_range(1..=max_dim.max(1));
    for _ in 0..max_dim {
        let fits: Vec<_> = cat.classes.iter().filter(|c| dim + c.module.dim() <= budget).collect();
        if fits.is_empty() || (!parts.is_empty() && rng.gen_bool(0.25)) {
            break;
        }
        let c = fits[rng.gen_range(0..fits.len())];
        dim += c.module.dim();
        parts.push(&c.module);
    }
    if parts.is_empty() {
        return Ok(Module::zero(cat.alg.clone(), Side::Left));
    }
    Ok(Module::direct_sum(&parts)?.module)
}

/// A bounded complex of projectives over `R`, each differential a random
/// module map killed by the previous one.
pub fn sample_complex(data: &PullbackData, config: &SampleConfig, rng: &mut impl Rng) -> Result<Complex> {
    let alg = &data.r;
    let f = alg.field();
    let cat = projective_catalog(alg)?;
    let len = rng.gen_range(1..=config.max_support.max(1));
    let lo = -(rng.gen_range(0..len) as i64);
    let mut terms = Vec::with_capacity(len);
    for _ in 0..len {
        terms.push(random_projective(&cat, rng, config.max_dim)?);
    }
    let mut diffs: Vec<Mat> = Vec::with_capacity(len.saturating_sub(1));
    for i in 0..len.saturating_sub(1) {
        let (s, t) = (&terms[i], &terms[i + 1]);
        let homs = s.hom(t)?;
        let prev = if i == 0 { Mat::zeros(f, s.dim(), 0) } else { diffs[i - 1].clone() };
        let cols: Vec<_> = homs.iter().map(|h| (h * &prev).flatten()).collect();
        let rows = t.dim() * prev.cols();
        let allowed = Mat::from_cols(f, rows, &cols).kernel();
        let mut d = Mat::zeros(f, t.dim(), s.dim());
        for j in 0..allowed.dim() {
            let v = allowed.vector(j);
            let c = random_scalar(f, rng, 2);
            for (h, x) in homs.iter().zip(&v) {
                d = &d + &h.scale(&(&c * x));
            }
        }
        diffs.push(d);
    }
    Complex::new(alg.clone(), lo, terms, diffs)
}

/// `config.samples` complexes drawn from a generator seeded with `seed`.
pub fn sample_complexes(data: &PullbackData, config: &SampleConfig, seed: u64) -> Result<Vec<Complex>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..config.samples).map(|_| sample_complex(data, config, &mut rng)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteCheck {
    pub id: String,
    pub seed: u64,
    pub diag: Diagnostics,
}

impl SuiteCheck {
    pub fn passed(&self) -> bool {
        self.diag.ok()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleSummary {
    pub seed: u64,
    pub lo: i64,
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EpivalenceReport {
    pub config: SampleConfig,
    pub seed: u64,
    /// Set when the hypotheses fail; the counterexample then runs instead.
    pub refused: Option<String>,
    pub counterexample: Option<CounterexampleReport>,
    pub samples: Vec<SampleSummary>,
    /// Kernel classes found over all ordered sample pairs, per seed.
    pub kernel_dims: Vec<(u64, usize)>,
    pub checks: Vec<SuiteCheck>,
}

impl EpivalenceReport {
    pub fn ok(&self) -> bool {
        match &self.counterexample {
            Some(c) => c.diag.ok(),
            None => self.refused.is_none() && self.checks.iter().all(SuiteCheck::passed),
        }
    }
}

fn run(id: &str, seed: u64, checks: &mut Vec<SuiteCheck>, body: impl FnOnce(&mut Diagnostics) -> Result<()>) -> Result<()> {
    let mut diag = Diagnostics::new();
    match body(&mut diag) {
        Ok(()) => {}
        Err(e @ (Error::Budget(_) | Error::HypothesisRefused(_))) => return Err(e),
        Err(e) => diag.fail(e.to_string()),
    }
    checks.push(SuiteCheck { id: id.into(), seed, diag });
    Ok(())
}

fn fullness(data: &Arc<PullbackData>, objects: &[Complex], recheck: bool, d: &mut Diagnostics) -> Result<()> {
    let inds = objects.iter().map(|p| ind_l(data, p)).collect::<Result<Vec<_>>>()?;
    let mut count = 0;
    for (i, s) in inds.iter().enumerate() {
        for (j, t) in inds.iter().enumerate() {
            for (k, m) in dtr_hom(&s.triple, &t.triple)?.iter().enumerate() {
                count += 1;
                let w = match fullness_witness(s, t, m) {
                    Ok(w) => w,
                    Err(e) => {
                        d.fail(format!("pair ({i}, {j}), basis element {k}: {e}"));
                        continue;
                    }
                };
                if recheck {
                    let g = ind_l_map(s, t, &w.g)?;
                    let ok = w.g.is_chain_map(&s.source, &t.source)
                        && verify_homotopy(&g.f1, &m.f1, &w.h1, &s.leg1.complex, &t.leg1.complex)
                        && verify_homotopy(&g.f2, &m.f2, &w.h2, &s.leg2.complex, &t.leg2.complex);
                    d.check(ok, || format!("pair ({i}, {j}), basis element {k}: witness fails on recheck"));
                }
            }
        }
    }
    d.note(format!("derived-triple morphisms lifted: {count}"));
    Ok(())
}

fn density(data: &Arc<PullbackData>, objects: &[Complex], rng: &mut impl Rng, recheck: bool, d: &mut Diagnostics) -> Result<()> {
    let f = data.r.field();
    let cat = triple_category(data)?;
    let mut twisted = 0;
    for (i, p) in objects.iter().enumerate() {
        let lift = density_round_trip(data, p)?;
        if recheck {
            let t = ind_l(data, p)?.triple;
            let ok = cat.is_morphism(&lift.induction.triple.glued, &t.glued, &lift.iso)
                && cat.is_morphism(&t.glued, &lift.induction.triple.glued, &lift.inverse);
            d.check(ok, || format!("object {i}: lift isomorphism fails on recheck"));
        }
        // a hand-built triple: the induced one with c scaled by a unit
        let t = ind_l(data, p)?.triple;
        let unit = loop {
            let s = random_scalar(f, rng, 3);
            if !s.is_zero() {
                break s;
            }
        };
        let tw = DerivedTriple::new(data.clone(), t.p1().clone(), t.p2().clone(), t.c().scale(&unit))?;
        let lift = density_lift(&tw)?;
        d.check(lift.p.total_dim() <= p.total_dim(), || format!("object {i}: twisted lift is larger than the source"));
        twisted += 1;
    }
    d.note(format!("round trips: {}; twisted triples lifted: {twisted}", objects.len()));
    Ok(())
}

fn comma_dims(data: &Arc<PullbackData>, objects: &[Complex], d: &mut Diagnostics) -> Result<()> {
    let ring = require_main_hypotheses(data)?;
    let ts = objects.iter().map(|p| Ok(ind_l(data, p)?.triple)).collect::<Result<Vec<_>>>()?;
    let cs = ts.iter().map(|t| dphi(&ring, t)).collect::<Result<Vec<_>>>()?;
    for i in 0..ts.len() {
        for j in 0..ts.len() {
            let (a, b) = (dtr_hom(&ts[i], &ts[j])?.len(), comma_hom(&cs[i], &cs[j])?.len());
            d.check(a == b, || format!("pair ({i}, {j}): {a} derived-triple morphisms, {b} comma morphisms"));
        }
    }
    Ok(())
}

fn kernel_total(diag: &Diagnostics) -> usize {
    diag.notes
        .iter()
        .find_map(|n| n.strip_prefix("kernel classes over all ordered pairs: "))
        .and_then(|s| s.split(';').next())
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(0)
}

/// Seeded samples of complexes over `R` plus the regular stalk, run through
/// fullness, the square-zero kernel, isomorphism detection, density and the
/// tilting full-faithfulness checks. Seeds are `seed, seed + 1, ...`.
pub fn epivalence_suite(data: &Arc<PullbackData>, config: &SampleConfig, seed: u64) -> Result<EpivalenceReport> {
    epivalence_suite_with(data, config, seed, &[])
}

/// Like [`epivalence_suite`], with `fixed` complexes joining every seed's sample.
pub fn epivalence_suite_with(
    data: &Arc<PullbackData>,
    config: &SampleConfig,
    seed: u64,
    fixed: &[Complex],
) -> Result<EpivalenceReport> {
    let mut report = EpivalenceReport {
        config: *config,
        seed,
        refused: None,
        counterexample: None,
        samples: Vec::new(),
        kernel_dims: Vec::new(),
        checks: Vec::new(),
    };
    if let Err(e) = require_main_hypotheses(data) {
        let Error::HypothesisRefused(msg) = e else { return Err(e) };
        report.refused = Some(msg);
        if !data.pi1_surjective() {
            report.counterexample = Some(counterexample_demo(data)?);
        }
        return Ok(report);
    }
    let regular = Complex::stalk(&Module::regular(data.r.clone()), 0)?;
    for s in (0..config.seeds as u64).map(|k| seed.wrapping_add(k)) {
        let mut objects = vec![regular.clone()];
        objects.extend(fixed.iter().cloned());
        objects.extend(sample_complexes(data, config, s)?);
        for p in &objects[1 + fixed.len()..] {
            report.samples.push(SampleSummary { seed: s, lo: p.lo(), dims: p.terms().iter().map(Module::dim).collect() });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(s ^ 0x5eed);
        let checks = &mut report.checks;
        run("comma-hom", s, checks, |d| comma_dims(data, &objects, d))?;
        run("cor-ff", s, checks, |d| {
            d.absorb("cor-ff", cor_ff_check(data, &objects)?);
            Ok(())
        })?;
        run("density", s, checks, |d| density(data, &objects, &mut rng, config.recheck, d))?;
        run("detects-iso", s, checks, |d| {
            d.absorb("detects-iso", detects_iso_check(data, &objects)?);
            Ok(())
        })?;
        run("fullness", s, checks, |d| fullness(data, &objects, config.recheck, d))?;
        let mut kernel = 0;
        run("square-zero", s, checks, |d| {
            let sq = square_zero_check(data, &objects)?;
            kernel = kernel_total(&sq);
            d.absorb("square-zero", sq);
            Ok(())
        })?;
        report.kernel_dims.push((s, kernel));
    }
    report.checks.sort_by(|a, b| (a.id.as_str(), a.seed).cmp(&(b.id.as_str(), b.seed)));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Field;
    use crate::modrep::is_projective;
    use crate::triples::fixtures::{e1, e2, e3};

    #[test]
    fn samples_are_complexes_of_projectives() {
        let d = e1(Field::Rationals);
        let cfg = SampleConfig { samples: 6, ..SampleConfig::default() };
        for p in sample_complexes(&d, &cfg, 7).unwrap() {
            assert!(p.validate().ok());
            assert!(p.terms().len() <= cfg.max_support);
            for m in p.terms() {
                assert!(m.dim() <= cfg.max_dim);
                assert!(is_projective(m).unwrap().is_some());
            }
        }
        let a = sample_complexes(&d, &cfg, 7).unwrap();
        let b = sample_complexes(&d, &cfg, 7).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }

    #[test]
    fn small_suite_passes_on_e1_and_e3() {
        let cfg = SampleConfig { seeds: 2, max_support: 3, max_dim: 4, ..SampleConfig::default() };
        for d in [e1(Field::prime(3).unwrap()), e3(Field::Rationals)] {
            let r = epivalence_suite(&d, &cfg, 1).unwrap();
            for c in &r.checks {
                assert!(c.passed(), "{} seed {}: {:?}", c.id, c.seed, c.diag.failures);
            }
            assert!(r.ok());
            assert_eq!(r.checks.len(), 12);
            let ids: Vec<_> = r.checks.iter().map(|c| (c.id.clone(), c.seed)).collect();
            let mut sorted = ids.clone();
            sorted.sort();
            assert_eq!(ids, sorted);
        }
    }

    #[test]
    fn non_surjective_diagram_runs_the_counterexample() {
        let r = epivalence_suite(&e2(Field::prime(2).unwrap()), &SampleConfig::default(), 0).unwrap();
        assert!(r.refused.as_deref().unwrap().contains("pi1 is not surjective"));
        assert!(r.checks.is_empty());
        assert!(r.ok());
    }
}

//! Scenario files, the command runners behind `phl <command>`, and the
//! bundled example library.

pub mod bundled;
pub mod report;
pub mod scenario;

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{gamma_prime, verify_radical, PullbackData, RadicalSource};
use crate::derived::{epivalence_suite_with, EpivalenceReport, SampleConfig};
use crate::error::{Error, Result};
use crate::gamma::{
    build_t, check_phi_ind_tensor, compare_gamma_prime, end_of_regular_pair, gamma_ring, verify_sequences, verify_tilting,
};
use crate::modrep::is_projective;
use crate::triples::{counit, counterexample_demo, lemma_suite, milnor_check, CounterexampleReport, MilnorOptions};

pub use bundled::{bundled, bundled_names, BUNDLED};
pub use report::{Fact, Report, Section, Status, Witness};
pub use scenario::{parse_scenario, CheckLine, Pos, Scenario, CHECKS, PULLBACK_RING};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Pullback,
    Milnor,
    Separated,
    Gamma,
    Tilting,
    Derived,
    Counterexample,
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Pullback => "pullback",
            Command::Milnor => "milnor",
            Command::Separated => "separated",
            Command::Gamma => "gamma",
            Command::Tilting => "tilting",
            Command::Derived => "derived",
            Command::Counterexample => "counterexample",
            Command::Selftest => "selftest",
        }
    }

    pub fn from_name(s: &str) -> Option<Command> {
        use Command::*;
        [Validate, Pullback, Milnor, Separated, Gamma, Tilting, Derived, Counterexample, Selftest]
            .into_iter()
            .find(|c| c.name() == s)
    }
}

/// Command-line overrides; unset values fall back to the scenario's check
/// line, then to the defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub dim_bound: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub max_support: Option<usize>,
    pub max_dim: Option<usize>,
    pub verbose: bool,
    pub recheck: bool,
}

struct Params<'a> {
    opts: &'a Options,
    chk: Option<&'a CheckLine>,
}

impl Params<'_> {
    fn usize(&self, key: &str, flag: Option<usize>, default: usize) -> Result<usize> {
        if let Some(v) = flag {
            return Ok(v);
        }
        Ok(self.chk.map(|s| s.get_usize(key)).transpose()?.flatten().unwrap_or(default))
    }
    fn seed(&self) -> Result<u64> {
        if let Some(v) = self.opts.seed {
            return Ok(v);
        }
        Ok(self.chk.map(|s| s.get_u64("seed")).transpose()?.flatten().unwrap_or(0))
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn validate(s: &Scenario) -> Result<Vec<Section>> {
    let mut sec = Section::new("validate");
    if let Some(f) = s.field {
        sec.fact("field", f);
    }
    let mut algebras: Vec<(String, crate::algebra::AlgRef)> = s.algebras.clone();
    if let Some(d) = &s.data {
        algebras.push((PULLBACK_RING.into(), d.r.clone()));
    }
    for (name, a) in &algebras {
        sec.absorb(a.validate());
        match a.radical() {
            Ok(r) => match verify_radical(a, &r.space) {
                Ok(rep) => {
                    sec.fact(
                        format!("algebra {name}"),
                        format!("dim {}, radical dim {} (nilpotency index {}; {})", a.dim(), rep.dim, rep.nilpotency_index, rep.verdict()),
                    );
                }
                Err(e) => sec.fail(format!("algebra {name}: {e}")),
            },
            Err(e) => sec.fail(format!("algebra {name}: {e}")),
        }
    }
    for (name, m) in &s.morphisms {
        let d = m.validate();
        sec.fact(format!("morphism {name}"), format!("{}-dim -> {}-dim, surjective: {}", m.source.dim(), m.target.dim(), yes_no(m.is_surjective())));
        sec.absorb(d);
    }
    for (name, m) in &s.modules {
        sec.fact(format!("module {name}"), format!("dim {}", m.dim()));
        sec.absorb(m.validate());
    }
    for (name, c) in &s.complexes {
        let dims: Vec<usize> = c.terms().iter().map(|m| m.dim()).collect();
        sec.fact(format!("complex {name}"), format!("from degree {}, dims {dims:?}", c.lo()));
        sec.absorb(c.validate());
    }
    if let Some(d) = &s.data {
        sec.absorb(d.verify());
    }
    sec.fact("checks", s.checks.iter().map(|c| c.name.as_str()).collect::<Vec<_>>().join(", "));
    Ok(vec![sec])
}

fn pullback_section(data: &Arc<PullbackData>) -> Result<Vec<Section>> {
    let mut sec = Section::new("pullback");
    sec.fact("dim R1, R2, R'", format!("{}, {}, {}", data.r1.dim(), data.r2.dim(), data.rp.dim()));
    sec.fact("rank [pi1, -pi2]", data.stacked_rank());
    sec.fact("dim R", data.r.dim());
    sec.fact("basis of R", data.r.names().join(", "));
    sec.fact("pi1 surjective", yes_no(data.pi1_surjective()));
    match data.r.radical() {
        Ok(r) => {
            let source = match r.source {
                RadicalSource::Supplied => "supplied",
                RadicalSource::TraceForm => "trace form",
                RadicalSource::Structural => "inherited from the pullback",
            };
            sec.fact("radical of R", format!("dim {} ({source})", r.space.dim()));
        }
        Err(e) => sec.note(format!("radical of R: {e}")),
    }
    sec.witness("i1", &data.i1.mat);
    sec.witness("i2", &data.i2.mat);
    sec.absorb(data.verify());
    Ok(vec![sec])
}

fn milnor(data: &Arc<PullbackData>, p: &Params) -> Result<Vec<Section>> {
    let opts = MilnorOptions {
        dim_bound: p.usize("dim-bound", p.opts.dim_bound, 4)?,
        seed: p.seed()?,
        state_ceiling: p.chk.map(|s| s.get_u64("ceiling")).transpose()?.flatten().unwrap_or(1 << 20),
        samples_per_pair: p.usize("samples", p.opts.samples, 3)?,
    };
    let rep = milnor_check(data, &opts)?;
    let mut sec = Section::new("milnor");
    sec.fact("dim bound", rep.dim_bound);
    sec.fact("gluing maps", if rep.exhaustive { "enumerated" } else { "sampled" });
    sec.fact("projective classes", rep.projective_classes.len());
    sec.fact("gluing triple classes", rep.triple_classes.len());
    sec.fact("bijection", yes_no(rep.bijection));
    sec.fact("Ind fully faithful", yes_no(rep.fully_faithful));
    sec.fact("Hom comparisons", rep.hom_checks.len());
    for (k, c) in rep.triple_classes.iter().enumerate() {
        let pre = c.preimage.as_ref().map_or("none".to_string(), |v| format!("{v:?}"));
        let orbit = c.orbit_size.map_or(String::new(), |n| format!(", {n} gluing maps"));
        sec.fact(format!("class {k}"), format!("legs {:?} / {:?}, glued dim {}{orbit}, preimage {pre}", c.leg1, c.leg2, c.glued_dim));
        sec.witness(format!("c of class {k}"), &c.triple.c);
    }
    sec.absorb(rep.diag.clone());
    if !rep.ok() && sec.failures.is_empty() {
        sec.fail("classes do not correspond");
    }
    if p.opts.recheck {
        for (k, c) in rep.triple_classes.iter().enumerate() {
            let e = counit(&c.triple)?;
            let ok = c.preimage.is_some() && e.map.is_iso() && is_projective(&e.pb.module)?.is_some();
            if !ok {
                sec.fail(format!("class {k}: preimage does not recheck"));
            }
        }
        sec.note("preimage certificates rechecked");
    }
    Ok(vec![sec])
}

fn separated(data: &Arc<PullbackData>, p: &Params) -> Result<Vec<Section>> {
    let samples = p.usize("samples", p.opts.samples, 4)?;
    let max_dim = p.usize("max-dim", p.opts.max_dim, 3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed()?);
    let rep = lemma_suite(data, &mut rng, samples, max_dim)?;
    let mut sec = Section::new("separated");
    sec.fact("modules", rep.modules);
    sec.fact("triples", rep.triples);
    sec.fact("separated modules", rep.separated);
    let verdict = match &rep.counit.certificate {
        crate::algebra::SuperfluityVerdict::True(why) => format!("certified ({why})"),
        crate::algebra::SuperfluityVerdict::Unknown => "unknown".into(),
    };
    sec.fact("ker pi1 universally superfluous", verdict);
    sec.fact("equivalence samples", format!("{} modules ({} not separated), {} triples", rep.equivalence.modules, rep.equivalence.excluded, rep.equivalence.triples));
    let ok = rep.ok();
    sec.absorb(rep.diag);
    sec.absorb(rep.equivalence.diag);
    if !ok && sec.failures.is_empty() {
        sec.fail("lemma suite failed");
    }
    Ok(vec![sec])
}

fn gamma(data: &Arc<PullbackData>, p: &Params) -> Result<Vec<Section>> {
    let ring = gamma_ring(data)?;
    ring.require_hypotheses()?;
    let mut sec = Section::new("gamma");
    sec.fact("dim R'*", ring.dual_dim());
    sec.fact("dim Gamma", ring.alg.dim());
    let (gp, _) = gamma_prime(data)?;
    sec.fact("dim Gamma'", gp.dim());
    sec.fact("dim T", build_t(&ring)?.module().dim());
    let samples = p.usize("samples", p.opts.samples, 3)?;
    let max_dim = p.usize("max-dim", p.opts.max_dim, 3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed()?);
    sec.absorb(check_phi_ind_tensor(&ring, &mut rng, samples, max_dim)?);
    Ok(vec![sec])
}

fn tilting(data: &Arc<PullbackData>) -> Result<Vec<Section>> {
    let ring = gamma_ring(data)?;
    let mut seq = Section::new("tilting: sequences");
    let s = verify_sequences(&ring)?;
    seq.fact("(R'*; 0) -> (R'*; R1) -> (0; R1)", format!("{:?}", s.dual_dims));
    seq.fact("(R2; 0) -> (R2; R1) -> (0; R1)", format!("{:?}", s.regular_dims));
    seq.absorb(s.diag);

    let mut t = Section::new("tilting: T");
    let r = verify_tilting(&ring)?;
    t.fact("dim T", r.dim);
    t.fact("pd T <= 1", yes_no(r.pd_at_most_one));
    t.fact("syzygy dims", format!("{:?}", r.syzygy_dims));
    t.fact("dim Ext^1(T, T)", r.ext1_dim);
    t.fact("Gamma in <T>", yes_no(r.generates));
    let ok = r.ok();
    t.absorb(r.diag);
    if !ok && t.failures.is_empty() {
        t.fail("T is not tilting");
    }

    let mut e = Section::new("tilting: End(T)");
    let g = compare_gamma_prime(&ring)?;
    e.fact("dim End(T)^op", g.end_dim);
    e.fact("dim Gamma'", g.gamma_prime_dim);
    e.fact("dim R + 2 dim R1 + dim ker pi1", g.block_formula);
    e.fact("blockwise map is an algebra isomorphism", yes_no(g.iso));
    let ok = g.ok();
    e.absorb(g.diag);
    if !ok && e.failures.is_empty() {
        e.fail("End(T)^op is not Gamma'");
    }

    let mut r2 = Section::new("tilting: End((R2; R1))");
    r2.absorb(end_of_regular_pair(&ring)?);
    r2.fact("End((R2; R1))^op", "R via right multiplication");
    Ok(vec![seq, t, e, r2])
}

fn counterexample_sections(rep: &CounterexampleReport, name: &str) -> Section {
    let mut sec = Section::new(name);
    sec.fact("pi1 surjective", yes_no(rep.pi1_surjective));
    sec.fact("dim R", rep.r_dim);
    for o in &rep.outcomes {
        sec.fact(
            format!("twist by {}", o.twist),
            format!(
                "gluing: {}, dim Pb = {}, dim X1 + dim X2 - dim R' ⊗ X2 = {}, counit invertible: {}",
                yes_no(o.gluing),
                o.pb_dim,
                o.glued_dim,
                yes_no(o.counit_iso)
            ),
        );
    }
    sec.absorb(rep.diag.clone());
    sec
}

fn derived(s: &Scenario, data: &Arc<PullbackData>, p: &Params) -> Result<Vec<Section>> {
    let config = SampleConfig {
        samples: p.usize("samples", p.opts.samples, SampleConfig::default().samples)?,
        max_support: p.usize("max-support", p.opts.max_support, 4)?,
        max_dim: p.usize("max-dim", p.opts.max_dim, 6)?,
        seeds: p.usize("seeds", None, 5)?,
        recheck: p.opts.recheck,
    };
    let rep = epivalence_suite_with(data, &config, p.seed()?, &s.complexes_over_r())?;
    Ok(derived_sections(&rep))
}

/// Sections of an epivalence report, one per check and seed.
pub fn derived_sections(rep: &EpivalenceReport) -> Vec<Section> {
    let mut out = Vec::new();
    let mut head = Section::new("derived");
    let c = &rep.config;
    head.fact("config", format!("{} seeds from {}, {} samples each, support <= {}, term dim <= {}", c.seeds, rep.seed, c.samples, c.max_support, c.max_dim));
    if let Some(why) = &rep.refused {
        let mut r = Section::refused("derived", why);
        r.facts = head.facts;
        out.push(r);
        if let Some(cx) = &rep.counterexample {
            out[0].note("ran the counterexample demonstration instead");
            out.push(counterexample_sections(cx, "derived: counterexample"));
        }
        return out;
    }
    for s in &rep.samples {
        head.fact(format!("sample (seed {})", s.seed), format!("from degree {}, dims {:?}", s.lo, s.dims));
    }
    for (seed, k) in &rep.kernel_dims {
        head.fact(format!("kernel classes (seed {seed})"), k);
    }
    if c.recheck {
        head.note("certificates rechecked");
    }
    out.push(head);
    for ch in &rep.checks {
        let mut sec = Section::new(format!("derived: {} (seed {})", ch.id, ch.seed));
        sec.absorb(ch.diag.clone());
        out.push(sec);
    }
    out
}

fn run_sections(command: Command, s: &Scenario, opts: &Options, chk: Option<&CheckLine>) -> Result<Vec<Section>> {
    let p = Params { opts, chk };
    let name = command.name();
    let body = |data: &Arc<PullbackData>| -> Result<Vec<Section>> {
        match command {
            Command::Pullback => pullback_section(data),
            Command::Milnor => milnor(data, &p),
            Command::Separated => separated(data, &p),
            Command::Gamma => gamma(data, &p),
            Command::Tilting => tilting(data),
            Command::Derived => derived(s, data, &p),
            Command::Counterexample => Ok(vec![counterexample_sections(&counterexample_demo(data)?, "counterexample")]),
            Command::Validate | Command::Selftest => unreachable!(),
        }
    };
    if command == Command::Validate {
        return validate(s);
    }
    let data = s.require_data()?;
    match body(data) {
        Ok(v) => Ok(v),
        Err(e @ (Error::MissingData(_) | Error::Parse { .. })) => Err(e),
        Err(e) => Ok(vec![Section::from_error(name, &e)]),
    }
}

/// Runs one command on a parsed scenario. Errors are input problems (no
/// diagram, missing radical data); check outcomes live in the report.
pub fn run(command: Command, s: &Scenario, opts: &Options) -> Result<Report> {
    if command == Command::Selftest {
        return selftest(opts);
    }
    let sections = run_sections(command, s, opts, s.check(command.name()))?;
    Ok(Report::new(command.name(), s.label(), sections))
}

/// Runs every check listed in a scenario, honouring `expect=refused`.
pub fn run_checks(s: &Scenario, opts: &Options) -> Result<Vec<Section>> {
    let mut out = Vec::new();
    for chk in &s.checks {
        let command = Command::from_name(&chk.name).expect("check names are commands");
        let mut secs = run_sections(command, s, opts, Some(chk))?;
        if chk.expects_refusal() {
            let refused = secs.iter().any(|x| x.status == Status::Refused);
            for x in &mut secs {
                if x.status == Status::Refused {
                    x.status = Status::Pass;
                    x.note("refusal expected");
                }
            }
            if !refused {
                let mut x = Section::new(chk.name.clone());
                x.fail("expected a hypothesis refusal, but the check ran");
                secs.push(x);
            }
        }
        for x in &mut secs {
            x.name = format!("{}: {}", s.label(), x.name);
        }
        out.extend(secs);
    }
    Ok(out)
}

/// Every bundled scenario with the checks it lists.
pub fn selftest(opts: &Options) -> Result<Report> {
    let mut sections = Vec::new();
    for name in bundled_names() {
        let s = bundled(name).expect("bundled scenario parses")?;
        sections.extend(run_checks(&s, opts)?);
    }
    Ok(Report::new("selftest", "bundled library", sections))
}

/// A scenario from a path, or a bundled one by name.
pub fn load_scenario(arg: &str) -> Result<Scenario> {
    if let Some(s) = bundled(arg) {
        if !std::path::Path::new(arg).exists() {
            return s;
        }
    }
    let text = std::fs::read_to_string(arg).map_err(|e| Error::InvalidInput(format!("cannot read `{arg}`: {e}")))?;
    parse_scenario(&text)
}

/// Exit code for an error that stopped a command before it reported.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::HypothesisRefused(_) => 3,
        Error::CheckFailed(_) => 2,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> Options {
        Options::default()
    }

    #[test]
    fn command_names_round_trip() {
        for (n, _) in CHECKS {
            assert_eq!(Command::from_name(n).unwrap().name(), *n);
        }
        assert_eq!(Command::from_name("selftest"), Some(Command::Selftest));
        assert!(Command::from_name("frobnicate").is_none());
    }

    #[test]
    fn milnor_on_the_counterexample_is_refused() {
        let s = bundled("E2").unwrap().unwrap();
        let r = run(Command::Milnor, &s, &opts()).unwrap();
        assert_eq!(r.exit_code, 3);
        assert!(r.to_text(false).contains("surjective"));
    }

    #[test]
    fn counterexample_command() {
        let s = bundled("E2").unwrap().unwrap();
        let r = run(Command::Counterexample, &s, &opts()).unwrap();
        assert_eq!(r.exit_code, 0, "{}", r.to_text(false));
        assert!(r.to_text(false).contains("dim Pb = 0"));
    }

    #[test]
    fn tilting_on_e1() {
        let s = bundled("E1-Q").unwrap().unwrap();
        let r = run(Command::Tilting, &s, &opts()).unwrap();
        assert_eq!(r.exit_code, 0, "{}", r.to_text(false));
        let t = r.to_text(false);
        assert!(t.contains("dim End(T)^op: 7") && t.contains("dim Gamma': 7"), "{t}");
        assert!(t.contains("dim Ext^1(T, T): 0"));
    }

    #[test]
    fn validate_and_pullback_on_every_bundled_scenario() {
        for n in bundled_names() {
            let s = bundled(n).unwrap().unwrap();
            for c in [Command::Validate, Command::Pullback] {
                let r = run(c, &s, &opts()).unwrap();
                assert_eq!(r.exit_code, 0, "{n}: {}", r.to_text(false));
            }
        }
    }

    #[test]
    fn missing_diagram_is_an_input_error() {
        let s = parse_scenario("field Q\n").unwrap();
        let e = run(Command::Milnor, &s, &opts()).unwrap_err();
        assert_eq!(exit_code_for(&e), 1);
        assert_eq!(run(Command::Validate, &s, &opts()).unwrap().exit_code, 0);
    }

    #[test]
    fn expected_refusals_pass_and_unexpected_runs_fail() {
        let s = bundled("E2").unwrap().unwrap();
        let secs = run_checks(&s, &opts()).unwrap();
        assert!(secs.iter().all(|x| x.status == Status::Pass), "{secs:?}");
        let text = bundled::source("E1-F2").unwrap().replace("check milnor", "check milnor expect=refused");
        let s = parse_scenario(&text).unwrap();
        let secs = run_checks(&s, &Options { dim_bound: Some(2), ..opts() });
        let secs = secs.unwrap();
        assert!(secs.iter().any(|x| x.status == Status::Fail && x.failures[0].contains("expected a hypothesis refusal")));
    }

    #[test]
    fn flags_override_check_lines() {
        let s = bundled("E1-F2").unwrap().unwrap();
        let r = run(Command::Milnor, &s, &Options { dim_bound: Some(2), ..opts() }).unwrap();
        assert!(r.to_text(false).contains("dim bound: 2"));
        let v = run(Command::Pullback, &s, &Options { verbose: true, ..opts() }).unwrap();
        assert!(v.to_text(true).contains("i1 = ["));
    }
}

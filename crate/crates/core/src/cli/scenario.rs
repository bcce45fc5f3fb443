use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{pullback, AlgRef, Algebra, AlgebraMorphism, PullbackData};
use crate::chaincx::Complex;
use crate::error::{Error, Result};
use crate::exactlin::{Field, Mat, Scalar, Subspace};
use crate::modrep::{Module, Side};

/// Name reserved for the pullback ring once a diagram is bound.
pub const PULLBACK_RING: &str = "R";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

fn err(pos: Pos, msg: impl Into<String>) -> Error {
    Error::Parse { line: pos.line, col: pos.col, msg: msg.into() }
}

/// Re-anchors an engine error at the item that caused it.
fn at(pos: Pos) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse { .. } => e,
        other => err(pos, other.to_string()),
    }
}

#[derive(Clone, Debug)]
struct Tok {
    text: String,
    pos: Pos,
}

fn tokenize(line: usize, text: &str) -> Vec<Tok> {
    let text = match text.find('#') {
        Some(i) => &text[..i],
        None => text,
    };
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut start = 0;
    for (i, ch) in text.chars().enumerate() {
        let col = i + 1;
        if ch.is_whitespace() || "[];{}".contains(ch) {
            if !cur.is_empty() {
                out.push(Tok { text: std::mem::take(&mut cur), pos: Pos { line, col: start } });
            }
            if !ch.is_whitespace() {
                out.push(Tok { text: ch.to_string(), pos: Pos { line, col } });
            }
        } else {
            if cur.is_empty() {
                start = col;
            }
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        out.push(Tok { text: cur, pos: Pos { line, col: start } });
    }
    out
}

/// Parameters of one `check` line, consumed key by key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub name: String,
    pub pos: Pos,
    params: BTreeMap<String, (String, Pos)>,
}

/// Keys accepted by each check.
pub const CHECKS: &[(&str, &[&str])] = &[
    ("validate", &["expect"]),
    ("pullback", &["expect"]),
    ("milnor", &["expect", "dim-bound", "seed", "ceiling", "samples"]),
    ("separated", &["expect", "samples", "max-dim", "seed"]),
    ("gamma", &["expect", "samples", "max-dim", "seed"]),
    ("tilting", &["expect"]),
    ("derived", &["expect", "samples", "seeds", "seed", "max-support", "max-dim"]),
    ("counterexample", &["expect"]),
];

impl CheckLine {
    pub fn bare(name: &str) -> CheckLine {
        CheckLine { name: name.into(), pos: Pos { line: 0, col: 0 }, params: BTreeMap::new() }
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        match self.params.get(key) {
            None => Ok(None),
            Some((v, p)) => v.parse().map(Some).map_err(|_| err(*p, format!("`{key}` expects a non-negative integer"))),
        }
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>> {
        match self.params.get(key) {
            None => Ok(None),
            Some((v, p)) => v.parse().map(Some).map_err(|_| err(*p, format!("`{key}` expects a non-negative integer"))),
        }
    }

    /// `expect=refused` marks a check whose hypotheses are meant to fail.
    pub fn expects_refusal(&self) -> bool {
        self.params.get("expect").is_some_and(|(v, _)| v == "refused")
    }
}

/// A parsed and validated scenario. Every algebra, morphism, module and
/// complex has been checked before any command sees it.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: Option<String>,
    pub field: Option<Field>,
    pub algebras: Vec<(String, AlgRef)>,
    pub morphisms: Vec<(String, AlgebraMorphism)>,
    pub modules: Vec<(String, Module)>,
    pub complexes: Vec<(String, Complex)>,
    pub data: Option<Arc<PullbackData>>,
    pub checks: Vec<CheckLine>,
}

impl Scenario {
    pub fn algebra(&self, name: &str) -> Option<&AlgRef> {
        self.algebras.iter().find(|(n, _)| n == name).map(|(_, a)| a)
    }
    pub fn morphism(&self, name: &str) -> Option<&AlgebraMorphism> {
        self.morphisms.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }
    pub fn check(&self, name: &str) -> Option<&CheckLine> {
        self.checks.iter().find(|c| c.name == name)
    }
    pub fn label(&self) -> &str {
        self.name.as_deref().unwrap_or("unnamed")
    }
    pub fn require_data(&self) -> Result<&Arc<PullbackData>> {
        self.data
            .as_ref()
            .ok_or_else(|| Error::MissingData(format!("scenario `{}` has no pullback diagram", self.label())))
    }
    /// Complexes over the pullback ring.
    pub fn complexes_over_r(&self) -> Vec<Complex> {
        match &self.data {
            Some(d) => self
                .complexes
                .iter()
                .filter(|(_, c)| Arc::ptr_eq(c.alg(), &d.r))
                .map(|(_, c)| c.clone())
                .collect(),
            None => Vec::new(),
        }
    }
}

struct Parser {
    lines: Vec<(usize, Vec<Tok>)>,
    at: usize,
    eof: Pos,
    field: Option<Field>,
    out: Scenario,
}

/// Cursor over the tokens of one statement.
struct Stmt {
    toks: Vec<Tok>,
    i: usize,
    end: Pos,
}

impl Stmt {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i)
    }
    fn next(&mut self, what: &str) -> Result<Tok> {
        let t = self.toks.get(self.i).cloned().ok_or_else(|| err(self.end, format!("expected {what}")))?;
        self.i += 1;
        Ok(t)
    }
    fn expect(&mut self, text: &str) -> Result<Pos> {
        let t = self.next(&format!("`{text}`"))?;
        if t.text != text {
            return Err(err(t.pos, format!("expected `{text}`, found `{}`", t.text)));
        }
        Ok(t.pos)
    }
    fn done(&self) -> Result<()> {
        match self.peek() {
            Some(t) => Err(err(t.pos, format!("unexpected `{}`", t.text))),
            None => Ok(()),
        }
    }
    fn rest(&mut self) -> Vec<Tok> {
        let r = self.toks[self.i..].to_vec();
        self.i = self.toks.len();
        r
    }
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_alphanumeric() || c == '_')
        && s.chars().all(|c| c.is_alphanumeric() || "_'-.".contains(c))
}

fn ident(st: &mut Stmt, what: &str) -> Result<Tok> {
    let t = st.next(what)?;
    if !is_ident(&t.text) {
        return Err(err(t.pos, format!("expected {what}, found `{}`", t.text)));
    }
    Ok(t)
}

fn parse_field(t: &Tok) -> Result<Field> {
    match t.text.as_str() {
        "Q" => Ok(Field::Rationals),
        s if s.starts_with('F') => {
            let p: u64 = s[1..].parse().map_err(|_| err(t.pos, format!("bad field `{s}`; use Q or F<p>")))?;
            Field::prime(p).map_err(at(t.pos))
        }
        s => Err(err(t.pos, format!("bad field `{s}`; use Q or F<p>"))),
    }
}

impl Parser {
    fn field(&self, pos: Pos) -> Result<Field> {
        self.field.ok_or_else(|| err(pos, "`field` must be declared before any literal"))
    }

    fn scalar(&self, t: &Tok) -> Result<Scalar> {
        self.field(t.pos)?.parse(&t.text).map_err(at(t.pos))
    }

    /// `[a b; c d]` with the given shape; `[]` for a matrix without entries.
    fn matrix(&self, st: &mut Stmt, rows: usize, cols: usize) -> Result<Mat> {
        let open = st.expect("[")?;
        let f = self.field(open)?;
        let mut body: Vec<Vec<Scalar>> = vec![Vec::new()];
        loop {
            let t = st.next("`]`")?;
            match t.text.as_str() {
                "]" => break,
                ";" => body.push(Vec::new()),
                _ => {
                    let s = self.scalar(&t)?;
                    body.last_mut().unwrap().push(s);
                }
            }
        }
        if body.len() == 1 && body[0].is_empty() {
            body.clear();
        }
        if rows * cols == 0 && body.is_empty() {
            return Ok(Mat::zeros(f, rows, cols));
        }
        if body.len() != rows || body.iter().any(|r| r.len() != cols) {
            let got: Vec<usize> = body.iter().map(Vec::len).collect();
            return Err(err(open, format!("expected a {rows}x{cols} matrix, found rows of lengths {got:?}")));
        }
        Ok(Mat::from_rows(f, cols, &body))
    }

    fn vector(&self, st: &mut Stmt, len: usize) -> Result<Vec<Scalar>> {
        Ok(self.matrix(st, 1, len)?.row(0).to_vec())
    }

    fn next_line(&mut self) -> Option<(usize, Vec<Tok>)> {
        let l = self.lines.get(self.at).cloned();
        self.at += 1;
        l
    }

    /// Lines up to the closing `}`.
    fn block(&mut self, open: Pos) -> Result<Vec<Stmt>> {
        let mut out = Vec::new();
        loop {
            let Some((line, toks)) = self.next_line() else {
                return Err(err(self.eof, format!("block opened at line {} is not closed", open.line)));
            };
            if toks.len() == 1 && toks[0].text == "}" {
                return Ok(out);
            }
            if let Some(t) = toks.iter().find(|t| t.text == "{" || t.text == "}") {
                return Err(err(t.pos, format!("unexpected `{}` inside a block", t.text)));
            }
            let end = Pos { line, col: toks.last().map_or(1, |t| t.pos.col + t.text.chars().count()) };
            out.push(Stmt { toks, i: 0, end });
        }
    }

    fn open_block(&self, st: &mut Stmt) -> Result<Pos> {
        let p = st.expect("{")?;
        st.done()?;
        Ok(p)
    }

    fn fresh(&self, t: &Tok) -> Result<()> {
        let o = &self.out;
        let taken = o.algebras.iter().any(|(n, _)| *n == t.text)
            || o.morphisms.iter().any(|(n, _)| *n == t.text)
            || o.modules.iter().any(|(n, _)| *n == t.text)
            || o.complexes.iter().any(|(n, _)| *n == t.text);
        if taken || t.text == PULLBACK_RING {
            return Err(err(t.pos, format!("name `{}` is already in use", t.text)));
        }
        Ok(())
    }

    fn algebra_ref(&self, t: &Tok) -> Result<AlgRef> {
        if t.text == PULLBACK_RING {
            if let Some(d) = &self.out.data {
                return Ok(d.r.clone());
            }
            return Err(err(t.pos, "the pullback ring `R` is only available after the `pullback` line"));
        }
        self.out.algebra(&t.text).cloned().ok_or_else(|| err(t.pos, format!("unknown algebra `{}`", t.text)))
    }

    fn algebra(&mut self, mut st: Stmt) -> Result<()> {
        let name = ident(&mut st, "an algebra name")?;
        self.fresh(&name)?;
        let open = self.open_block(&mut st)?;
        let f = self.field(name.pos)?;
        let body = self.block(open)?;
        let mut basis: Option<Vec<String>> = None;
        let mut unit = None;
        let mut products = Vec::new();
        let mut radical: Option<Vec<Vec<Scalar>>> = None;
        let mut idems: Option<Vec<Vec<Scalar>>> = None;
        for mut s in body {
            let key = s.next("a key")?;
            match key.text.as_str() {
                "basis" => {
                    if basis.is_some() {
                        return Err(err(key.pos, "duplicate `basis`"));
                    }
                    let names: Vec<Tok> = s.rest();
                    if names.is_empty() {
                        return Err(err(s.end, "expected basis names"));
                    }
                    for (k, t) in names.iter().enumerate() {
                        if !is_ident(&t.text) {
                            return Err(err(t.pos, format!("bad basis name `{}`", t.text)));
                        }
                        if names[..k].iter().any(|u| u.text == t.text) {
                            return Err(err(t.pos, format!("duplicate basis name `{}`", t.text)));
                        }
                    }
                    basis = Some(names.into_iter().map(|t| t.text).collect());
                }
                "unit" | "product" | "radical" | "idempotents" => {
                    let names = basis.as_ref().ok_or_else(|| err(key.pos, "`basis` must come first"))?;
                    let d = names.len();
                    let index = |t: &Tok| {
                        names.iter().position(|n| *n == t.text).ok_or_else(|| err(t.pos, format!("unknown basis element `{}`", t.text)))
                    };
                    match key.text.as_str() {
                        "unit" => unit = Some(self.vector(&mut s, d)?),
                        "product" => {
                            let i = index(&s.next("a basis element")?)?;
                            let j = index(&s.next("a basis element")?)?;
                            let k = index(&s.next("a basis element")?)?;
                            let v = self.scalar(&s.next("a coefficient")?)?;
                            products.push((i, j, k, v));
                        }
                        "radical" | "idempotents" => {
                            let mut vs = Vec::new();
                            while s.peek().is_some() {
                                vs.push(self.vector(&mut s, d)?);
                            }
                            let slot = if key.text == "radical" { &mut radical } else { &mut idems };
                            if slot.replace(vs).is_some() {
                                return Err(err(key.pos, format!("duplicate `{}`", key.text)));
                            }
                        }
                        _ => unreachable!(),
                    }
                }
                other => return Err(err(key.pos, format!("unknown key `{other}` in algebra"))),
            }
            s.done()?;
        }
        let names = basis.ok_or_else(|| err(name.pos, "algebra has no `basis`"))?;
        let d = names.len();
        let unit = unit.ok_or_else(|| err(name.pos, "algebra has no `unit`"))?;
        let mut a = Algebra::from_triples(f, names, unit, &products).map_err(at(name.pos))?;
        let diag = a.validate();
        if let Some(msg) = diag.first_failure() {
            return Err(err(name.pos, format!("algebra `{}`: {msg}", name.text)));
        }
        if let Some(vs) = radical {
            a = a.with_supplied_radical(Subspace::span_of_vectors(f, d, &vs)).map_err(at(name.pos))?;
        }
        a = match idems {
            Some(es) => a.with_idempotents(es).map_err(at(name.pos))?,
            None => a.clone().with_computed_idempotents().unwrap_or(a),
        };
        self.out.algebras.push((name.text, Arc::new(a)));
        Ok(())
    }

    fn morphism(&mut self, mut st: Stmt) -> Result<()> {
        let name = ident(&mut st, "a morphism name")?;
        self.fresh(&name)?;
        let src = self.algebra_ref(&ident(&mut st, "a source algebra")?)?;
        st.expect("->")?;
        let tgt = self.algebra_ref(&ident(&mut st, "a target algebra")?)?;
        let mat = self.matrix(&mut st, tgt.dim(), src.dim())?;
        st.done()?;
        let m = AlgebraMorphism::unchecked(src, tgt, mat).map_err(at(name.pos))?;
        if let Some(msg) = m.validate().first_failure() {
            return Err(err(name.pos, format!("morphism `{}`: {msg}", name.text)));
        }
        self.out.morphisms.push((name.text, m));
        Ok(())
    }

    fn module(&mut self, mut st: Stmt) -> Result<()> {
        let name = ident(&mut st, "a module name")?;
        self.fresh(&name)?;
        st.expect("over")?;
        let alg = self.algebra_ref(&ident(&mut st, "an algebra")?)?;
        let open = self.open_block(&mut st)?;
        let body = self.block(open)?;
        let mut dim = None;
        let mut acts: Vec<Option<Mat>> = vec![None; alg.dim()];
        for mut s in body {
            let key = s.next("a key")?;
            match key.text.as_str() {
                "dim" => {
                    let t = s.next("a dimension")?;
                    dim = Some(t.text.parse::<usize>().map_err(|_| err(t.pos, "expected a dimension"))?);
                }
                "act" => {
                    let n = dim.ok_or_else(|| err(key.pos, "`dim` must come first"))?;
                    let b = s.next("a basis element")?;
                    // by name, or by position for algebras with unwieldy names
                    let i = alg
                        .names()
                        .iter()
                        .position(|x| *x == b.text)
                        .or_else(|| b.text.parse::<usize>().ok().filter(|&i| i < alg.dim()))
                        .ok_or_else(|| err(b.pos, format!("unknown basis element `{}`", b.text)))?;
                    if acts[i].replace(self.matrix(&mut s, n, n)?).is_some() {
                        return Err(err(b.pos, format!("duplicate action of `{}`", b.text)));
                    }
                }
                other => return Err(err(key.pos, format!("unknown key `{other}` in module"))),
            }
            s.done()?;
        }
        let n = dim.ok_or_else(|| err(name.pos, "module has no `dim`"))?;
        let acts = acts
            .into_iter()
            .enumerate()
            .map(|(i, a)| a.ok_or_else(|| err(name.pos, format!("module has no action of `{}`", alg.names()[i]))))
            .collect::<Result<Vec<_>>>()?;
        let m = Module::new(alg, Side::Left, n, acts).map_err(|e| err(name.pos, format!("module `{}`: {e}", name.text)))?;
        self.out.modules.push((name.text, m));
        Ok(())
    }

    fn complex(&mut self, mut st: Stmt) -> Result<()> {
        let name = ident(&mut st, "a complex name")?;
        self.fresh(&name)?;
        st.expect("over")?;
        let alg = self.algebra_ref(&ident(&mut st, "an algebra")?)?;
        let open = self.open_block(&mut st)?;
        let body = self.block(open)?;
        let mut terms: BTreeMap<i64, Module> = BTreeMap::new();
        let mut diffs: Vec<(i64, Stmt, Pos)> = Vec::new();
        for mut s in body {
            let key = s.next("a key")?;
            let dt = s.next("a degree")?;
            let deg: i64 = dt.text.parse().map_err(|_| err(dt.pos, "expected a degree"))?;
            match key.text.as_str() {
                "term" => {
                    let mt = ident(&mut s, "a module name")?;
                    let m = self
                        .out
                        .modules
                        .iter()
                        .find(|(n, _)| *n == mt.text)
                        .map(|(_, m)| m.clone())
                        .ok_or_else(|| err(mt.pos, format!("unknown module `{}`", mt.text)))?;
                    if !Arc::ptr_eq(m.alg(), &alg) && **m.alg() != *alg {
                        return Err(err(mt.pos, format!("module `{}` is over another algebra", mt.text)));
                    }
                    if terms.insert(deg, m).is_some() {
                        return Err(err(dt.pos, format!("duplicate term in degree {deg}")));
                    }
                    s.done()?;
                }
                "diff" => diffs.push((deg, s, dt.pos)),
                other => return Err(err(key.pos, format!("unknown key `{other}` in complex"))),
            }
        }
        if terms.is_empty() {
            self.out.complexes.push((name.text, Complex::zero(alg)));
            return Ok(());
        }
        let lo = *terms.keys().next().unwrap();
        let hi = *terms.keys().next_back().unwrap();
        let zero = Module::zero(alg.clone(), Side::Left);
        let all: Vec<Module> = (lo..=hi).map(|n| terms.get(&n).cloned().unwrap_or_else(|| zero.clone())).collect();
        let mut ds: Vec<Option<Mat>> = vec![None; (hi - lo) as usize];
        for (deg, mut s, p) in diffs {
            if deg < lo || deg >= hi {
                return Err(err(p, format!("no differential leaves degree {deg}")));
            }
            let i = (deg - lo) as usize;
            let m = self.matrix(&mut s, all[i + 1].dim(), all[i].dim())?;
            s.done()?;
            if ds[i].replace(m).is_some() {
                return Err(err(p, format!("duplicate differential in degree {deg}")));
            }
        }
        let f = alg.field();
        let ds = ds
            .into_iter()
            .enumerate()
            .map(|(i, d)| d.unwrap_or_else(|| Mat::zeros(f, all[i + 1].dim(), all[i].dim())))
            .collect();
        let c = Complex::new(alg, lo, all, ds).map_err(|e| err(name.pos, format!("complex `{}`: {e}", name.text)))?;
        if let Some(msg) = c.validate().first_failure() {
            return Err(err(name.pos, format!("complex `{}`: {msg}", name.text)));
        }
        self.out.complexes.push((name.text, c));
        Ok(())
    }

    fn pullback(&mut self, mut st: Stmt, pos: Pos) -> Result<()> {
        if self.out.data.is_some() {
            return Err(err(pos, "duplicate `pullback`"));
        }
        let get = |st: &mut Stmt| -> Result<AlgebraMorphism> {
            let t = ident(st, "a morphism name")?;
            self.out.morphism(&t.text).cloned().ok_or_else(|| err(t.pos, format!("unknown morphism `{}`", t.text)))
        };
        let pi1 = get(&mut st)?;
        let pi2 = get(&mut st)?;
        st.done()?;
        let data = pullback(&pi1, &pi2).map_err(at(pos))?;
        if let Some(msg) = data.verify().first_failure() {
            return Err(err(pos, format!("pullback: {msg}")));
        }
        self.out.data = Some(Arc::new(data));
        Ok(())
    }

    fn check(&mut self, mut st: Stmt) -> Result<()> {
        let name = st.next("a check name")?;
        let Some((_, keys)) = CHECKS.iter().find(|(n, _)| *n == name.text) else {
            let known: Vec<&str> = CHECKS.iter().map(|(n, _)| *n).collect();
            return Err(err(name.pos, format!("unknown check `{}`; known: {}", name.text, known.join(", "))));
        };
        if self.out.checks.iter().any(|c| c.name == name.text) {
            return Err(err(name.pos, format!("duplicate check `{}`", name.text)));
        }
        let mut params = BTreeMap::new();
        for t in st.rest() {
            let Some((k, v)) = t.text.split_once('=') else {
                return Err(err(t.pos, format!("expected key=value, found `{}`", t.text)));
            };
            if !keys.contains(&k) {
                return Err(err(t.pos, format!("unknown key `{k}` for check `{}`", name.text)));
            }
            if k == "expect" && v != "refused" && v != "pass" {
                return Err(err(t.pos, "`expect` is `pass` or `refused`"));
            }
            if params.insert(k.to_string(), (v.to_string(), t.pos)).is_some() {
                return Err(err(t.pos, format!("duplicate key `{k}`")));
            }
        }
        let chk = CheckLine { name: name.text, pos: name.pos, params };
        // numeric keys are checked now rather than when the check runs
        for k in ["dim-bound", "samples", "seeds", "max-support", "max-dim"] {
            chk.get_usize(k)?;
        }
        for k in ["seed", "ceiling"] {
            chk.get_u64(k)?;
        }
        self.out.checks.push(chk);
        Ok(())
    }

    fn run(&mut self) -> Result<()> {
        while let Some((line, toks)) = self.next_line() {
            let end = Pos { line, col: toks.last().map_or(1, |t| t.pos.col + t.text.chars().count()) };
            let mut st = Stmt { toks, i: 0, end };
            let key = st.next("a statement")?;
            match key.text.as_str() {
                "scenario" => {
                    let n = ident(&mut st, "a scenario name")?;
                    st.done()?;
                    if self.out.name.replace(n.text).is_some() {
                        return Err(err(key.pos, "duplicate `scenario`"));
                    }
                }
                "field" => {
                    let t = st.next("a field")?;
                    st.done()?;
                    if self.field.is_some() {
                        return Err(err(key.pos, "duplicate `field`"));
                    }
                    self.field = Some(parse_field(&t)?);
                    self.out.field = self.field;
                }
                "algebra" => self.algebra(st)?,
                "morphism" => self.morphism(st)?,
                "module" => self.module(st)?,
                "complex" => self.complex(st)?,
                "pullback" => self.pullback(st, key.pos)?,
                "check" => self.check(st)?,
                "}" => return Err(err(key.pos, "unmatched `}`")),
                other => return Err(err(key.pos, format!("unknown statement `{other}`"))),
            }
        }
        Ok(())
    }
}

/// Parses and validates a scenario file.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let lines: Vec<(usize, Vec<Tok>)> =
        text.lines().enumerate().map(|(i, l)| (i + 1, tokenize(i + 1, l))).filter(|(_, t)| !t.is_empty()).collect();
    let eof = Pos { line: text.lines().count().max(1), col: 1 };
    let mut p = Parser {
        lines,
        at: 0,
        eof,
        field: None,
        out: Scenario {
            name: None,
            field: None,
            algebras: Vec::new(),
            morphisms: Vec::new(),
            modules: Vec::new(),
            complexes: Vec::new(),
            data: None,
            checks: Vec::new(),
        },
    };
    p.run()?;
    Ok(p.out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DUAL: &str = "
field F3
algebra A {
  basis 1 x
  unit [1 0]
  product 1 1 1 1
  product 1 x x 1
  product x 1 x 1
}
algebra k {
  basis 1
  unit [1]
  product 1 1 1 1
}
morphism ev A -> k [1 0]
morphism id k -> k [1]
pullback ev id
module S over R {
  dim 1
  act 0 [0]
  act 1 [1]
}
";

    fn pos_of(e: Error) -> (usize, usize) {
        match e {
            Error::Parse { line, col, .. } => (line, col),
            other => panic!("not a parse error: {other}"),
        }
    }

    #[test]
    fn empty_file_is_an_empty_scenario() {
        let s = parse_scenario("").unwrap();
        assert!(s.checks.is_empty() && s.algebras.is_empty() && s.data.is_none());
        let s = parse_scenario("# only a comment\n\n").unwrap();
        assert!(s.field.is_none());
    }

    #[test]
    fn tokens_carry_columns() {
        let t = tokenize(4, "  unit [1 0] # c");
        let cols: Vec<_> = t.iter().map(|t| (t.text.as_str(), t.pos.col)).collect();
        assert_eq!(cols, vec![("unit", 3), ("[", 8), ("1", 9), ("0", 11), ("]", 12)]);
    }

    #[test]
    fn dual_numbers_pullback() {
        let s = parse_scenario(DUAL).unwrap();
        let d = s.data.as_ref().unwrap();
        assert_eq!(d.r.dim(), 2);
        assert_eq!(s.algebra("A").unwrap().dim(), 2);
        // the module over R is addressed by basis position
        assert!(Arc::ptr_eq(s.modules[0].1.alg(), &d.r));
        let e = parse_scenario(&DUAL.replace("act 1 [1]", "act 2 [1]")).unwrap_err();
        assert!(e.to_string().contains("unknown basis element `2`"));
        let e = parse_scenario(&DUAL.replace("pullback ev id\n", "")).unwrap_err();
        assert!(e.to_string().contains("only available after"));
    }

    #[test]
    fn broken_associativity_names_the_indices() {
        let text = "field Q
algebra B {
  basis 1 a b
  unit [1 0 0]
  product 1 1 1 1
  product 1 a a 1
  product a 1 a 1
  product 1 b b 1
  product b 1 b 1
  product a a b 1
  product a b a 1
}
";
        let e = parse_scenario(text).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("(i,j,m,k)"), "{msg}");
        assert_eq!(pos_of(e), (2, 9));
    }

    #[test]
    fn errors_point_at_the_offending_token() {
        assert_eq!(pos_of(parse_scenario("field Q\nfoo bar\n").unwrap_err()), (2, 1));
        assert_eq!(pos_of(parse_scenario("field F4\n").unwrap_err()), (1, 7));
        let e = parse_scenario("algebra A {\n basis 1\n unit [1]\n}\n").unwrap_err();
        assert!(e.to_string().contains("`field` must be declared"));
        assert_eq!(pos_of(e), (1, 9));
        let text = "field Q\nalgebra A {\n  basis 1\n  unit [1 2]\n}\n";
        assert_eq!(pos_of(parse_scenario(text).unwrap_err()), (4, 8));
        let text = "field Q\nalgebra A {\n  basis 1\n  colour blue\n}\n";
        assert!(parse_scenario(text).unwrap_err().to_string().contains("unknown key `colour`"));
        let text = "field Q\nalgebra A {\n  basis 1\n";
        assert!(parse_scenario(text).unwrap_err().to_string().contains("not closed"));
        let e = parse_scenario("check milnor dim-bound=x\n").unwrap_err();
        assert_eq!(pos_of(e), (1, 14));
        let e = parse_scenario("check milnor depth=3\n").unwrap_err();
        assert!(e.to_string().contains("unknown key `depth`"));
        let e = parse_scenario("check frobnicate\n").unwrap_err();
        assert!(e.to_string().contains("unknown check"));
    }

    #[test]
    fn unresolved_names_are_rejected() {
        let e = parse_scenario("field Q\nmorphism f A -> B [1]\n").unwrap_err();
        assert!(e.to_string().contains("unknown algebra `A`"));
        assert_eq!(pos_of(e), (2, 12));
        let e = parse_scenario("field Q\npullback f g\n").unwrap_err();
        assert!(e.to_string().contains("unknown morphism `f`"));
    }

    #[test]
    fn non_multiplicative_morphism_is_rejected() {
        let text = "field Q
algebra k {
  basis 1
  unit [1]
  product 1 1 1 1
}
morphism z k -> k [2]
";
        let e = parse_scenario(text).unwrap_err();
        assert!(e.to_string().contains("morphism `z`"), "{e}");
        assert_eq!(pos_of(e), (7, 10));
    }

    #[test]
    fn modules_and_complexes() {
        let text = "field Q
algebra A {
  basis 1 x
  unit [1 0]
  product 1 1 1 1
  product 1 x x 1
  product x 1 x 1
}
module F over A {
  dim 2
  act 1 [1 0; 0 1]
  act x [0 0; 1 0]
}
complex P over A {
  term 0 F
  term 1 F
  diff 0 [0 0; 1 0]
}
complex Z over A {
}
";
        let s = parse_scenario(text).unwrap();
        let p = &s.complexes[0].1;
        assert_eq!((p.lo(), p.hi()), (0, 1));
        assert!(s.complexes[1].1.is_zero());
        let bad = text.replace("diff 0 [0 0; 1 0]", "diff 0 [1 0; 0 1]\n  diff 1 [1 0; 0 1]");
        assert!(parse_scenario(&bad).unwrap_err().to_string().contains("no differential leaves degree 1"));
        let bad = text.replace("act x [0 0; 1 0]", "act x [0 1; 1 0]");
        assert!(parse_scenario(&bad).unwrap_err().to_string().contains("module `F`"));
    }
}

use super::{is_quasi_iso, ChainMap, Complex, Graded};
use crate::error::{Error, Result};
use crate::exactlin::Mat;
use crate::modrep::{free_cover, is_projective, projective_catalog, projective_cover, Module};

/// A complex of projectives `p` with a chain map `map: p -> X`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub p: Complex,
    pub map: ChainMap,
}

/// Surjection from a projective onto `w`.
fn cover_of(w: &Module) -> Result<(Module, Mat)> {
    if is_projective(w)?.is_some() {
        return Ok((w.clone(), Mat::identity(w.field(), w.dim())));
    }
    match projective_catalog(w.alg()) {
        Ok(cat) => {
            let pc = projective_cover(&cat, w)?;
            Ok((pc.p, pc.map))
        }
        Err(_) => {
            let fc = free_cover(w)?;
            Ok((fc.free, fc.map))
        }
    }
}

/// Builds `P^n` downward from the top, each time covering the cycles of the
/// mapping cone in degree `n`. Stops once the cycles vanish; gives up (or cuts
/// off, if `truncate`) below `lo - depth`.
fn build(x: &Complex, depth: usize, truncate: bool) -> Result<Resolution> {
    let f = x.field();
    let alg = x.alg().clone();
    if x.terms().iter().map(is_projective).collect::<Result<Vec<_>>>()?.iter().all(Option::is_some) {
        return Ok(Resolution { p: x.clone(), map: Graded::identity(x) });
    }
    let floor = x.lo() - depth as i64;
    // built top-down: (term, d^n: P^n -> P^{n+1}, f^n: P^n -> X^n)
    let mut terms: Vec<Module> = Vec::new();
    let mut diffs: Vec<Mat> = Vec::new();
    let mut maps: Vec<Mat> = Vec::new();
    let mut n = x.hi();
    let mut truncated = false;
    loop {
        let (above, d_above, f_above) = match terms.last() {
            Some(t) => (t.clone(), diffs.last().cloned(), maps.last().cloned()),
            None => (Module::zero(alg.clone(), crate::modrep::Side::Left), None, None),
        };
        let xn = x.term(n);
        let ds = Module::direct_sum(&[&above, xn])?;
        let (pa, pa2) = (above.dim(), if terms.len() >= 2 { terms[terms.len() - 2].dim() } else { 0 });
        let xa = x.dim_at(n + 1);
        // [[d_P, 0], [f, d_X]] on P^{n+1} + X^n
        let mut phi = Mat::zeros(f, pa2 + xa, pa + xn.dim());
        if let Some(d) = &d_above {
            phi.set_block(0, 0, d);
        }
        if let Some(m) = &f_above {
            phi.set_block(pa2, 0, m);
        }
        phi.set_block(pa2, pa, &x.diff(n));
        let (w, inc) = ds.module.kernel_of(&phi)?;
        if w.dim() == 0 {
            if n < x.lo() {
                break;
            }
            terms.push(w);
            diffs.push(Mat::zeros(f, pa, 0));
            maps.push(Mat::zeros(f, xn.dim(), 0));
            n -= 1;
            continue;
        }
        if n < floor {
            if truncate {
                truncated = true;
                break;
            }
            return Err(Error::Budget(format!("pd bound exceeded at depth {depth}")));
        }
        let (pn, cov) = cover_of(&w)?;
        let pi = &inc * &cov;
        diffs.push(-&pi.block(0, 0, pa, pn.dim()));
        maps.push(pi.block(pa, 0, xn.dim(), pn.dim()));
        terms.push(pn);
        n -= 1;
    }
    let lo = n + 1;
    terms.reverse();
    diffs.reverse();
    maps.reverse();
    // diffs[i] now starts at P^{lo+i}; the top one maps into zero
    diffs.pop();
    let mut p = Complex::new(alg, lo, terms, diffs)?;
    let map = Graded::from_fn(&p, x, 0, |m| {
        if m >= lo && ((m - lo) as usize) < maps.len() {
            maps[(m - lo) as usize].clone()
        } else {
            Mat::zeros(f, x.dim_at(m), 0)
        }
    });
    p.truncated = truncated;
    if !map.is_chain_map(&p, x) {
        return Err(Error::NotAMorphism("resolution map is not a chain map".into()));
    }
    if !truncated && !is_quasi_iso(&map, &p, x)? {
        return Err(Error::InvalidModule("resolution map is not a quasi-isomorphism".into()));
    }
    Ok(Resolution { p, map })
}

/// A bounded projective resolution reaching at most `depth` degrees below
/// the lowest term of `x`.
pub fn resolve_bounded(x: &Complex, depth: usize) -> Result<Resolution> {
    build(x, depth, false)
}

/// Like [`resolve_bounded`], but cuts off instead of failing; the result is
/// then marked `truncated` and is only a quasi-isomorphism in high degrees.
pub fn resolve_truncated(x: &Complex, depth: usize) -> Result<Resolution> {
    build(x, depth, true)
}

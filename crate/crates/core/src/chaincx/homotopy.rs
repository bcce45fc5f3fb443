use super::{joint_range, verify_homotopy, ChainMap, Complex, Graded, Homotopy};
use crate::error::Result;
use crate::exactlin::{solve_particular, Mat, Scalar, Subspace};

/// Graded module maps `X^n -> Y^{n+shift}` in coordinates: degree by degree a
/// basis of `Hom_A(X^n, Y^{n+shift})`.
#[derive(Clone, Debug)]
pub struct MapSpace {
    pub lo: i64,
    pub shift: i64,
    pub bases: Vec<Vec<Mat>>,
    pub offsets: Vec<usize>,
    pub dim: usize,
    spans: Vec<Subspace>,
    x: Complex,
    y: Complex,
}

impl MapSpace {
    pub fn new(x: &Complex, y: &Complex, shift: i64) -> Result<MapSpace> {
        let f = x.field();
        let (lo, hi) = joint_range(&[x, y], -shift);
        let mut bases = Vec::new();
        let mut spans = Vec::new();
        let mut offsets = Vec::new();
        let mut dim = 0;
        for n in lo..=hi {
            let (s, t) = (x.term(n), y.term(n + shift));
            let b = s.hom(t)?;
            let flat: Vec<Vec<Scalar>> = b.iter().map(|m| m.flatten()).collect();
            spans.push(Subspace::span_of_vectors(f, s.dim() * t.dim(), &flat));
            offsets.push(dim);
            dim += b.len();
            bases.push(b);
        }
        Ok(MapSpace { lo, shift, bases, offsets, dim, spans, x: x.clone(), y: y.clone() })
    }

    pub fn source(&self) -> &Complex {
        &self.x
    }
    pub fn target(&self) -> &Complex {
        &self.y
    }

    pub fn assemble(&self, c: &[Scalar]) -> Graded {
        let f = self.x.field();
        let comps = self
            .bases
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let n = self.lo + i as i64;
                let mut m = Mat::zeros(f, self.y.dim_at(n + self.shift), self.x.dim_at(n));
                for (k, bm) in b.iter().enumerate() {
                    let ck = &c[self.offsets[i] + k];
                    if !ck.is_zero() {
                        m = &m + &bm.scale(ck);
                    }
                }
                m
            })
            .collect();
        Graded { lo: self.lo, shift: self.shift, comps }
    }

    pub fn basis_map(&self, k: usize) -> Graded {
        self.assemble(&crate::exactlin::unit_vec(self.x.field(), self.dim, k))
    }

    /// Coordinates of a graded module map, if it is one.
    pub fn coords(&self, g: &Graded) -> Option<Vec<Scalar>> {
        let mut out = Vec::with_capacity(self.dim);
        for (i, s) in self.spans.iter().enumerate() {
            let n = self.lo + i as i64;
            out.extend(s.coords(&g.at(n, &self.x, &self.y).flatten())?);
        }
        // components outside the range must vanish
        let stray = g.comps.iter().enumerate().any(|(i, m)| {
            let n = g.lo + i as i64;
            (n < self.lo || n >= self.lo + self.bases.len() as i64) && !m.is_zero()
        });
        (!stray).then_some(out)
    }

    /// Matrix of a linear map out of this space, given on basis maps.
    pub fn operator(&self, rows: usize, mut apply: impl FnMut(&Graded) -> Vec<Scalar>) -> Mat {
        let cols: Vec<Vec<Scalar>> = (0..self.dim).map(|k| apply(&self.basis_map(k))).collect();
        Mat::from_cols(self.x.field(), rows, &cols)
    }
}

/// All matrix entries of a graded map over degrees `lo..=hi`.
pub(crate) fn flat_over(g: &Graded, x: &Complex, y: &Complex, lo: i64, hi: i64) -> Vec<Scalar> {
    (lo..=hi).flat_map(|n| g.at(n, x, y).flatten()).collect()
}

pub(crate) fn flat_len(x: &Complex, y: &Complex, shift: i64, lo: i64, hi: i64) -> usize {
    (lo..=hi).map(|n| x.dim_at(n) * y.dim_at(n + shift)).sum()
}

/// The chain-map equations `d f - f d` on a space of degree-0 maps.
pub(crate) fn chain_operator(space: &MapSpace) -> Mat {
    let (x, y) = (space.source(), space.target());
    let (lo, hi) = joint_range(&[x, y], 0);
    let rows = flat_len(x, y, 1, lo - 1, hi);
    space.operator(rows, |g| {
        let comm = Graded::from_fn(x, y, 1, |n| &(&y.diff(n) * &g.at(n, x, y)) - &(&g.at(n + 1, x, y) * &x.diff(n)));
        flat_over(&comm, x, y, lo - 1, hi)
    })
}

/// Homotopy classes of chain maps `X -> Y`.
#[derive(Clone, Debug)]
pub struct HomK {
    pub maps: MapSpace,
    pub homotopies: MapSpace,
    /// Chain maps, in coordinates of `maps`.
    pub cycles: Subspace,
    /// Null-homotopic chain maps, in coordinates of `maps`.
    pub boundaries: Subspace,
    /// Class representatives.
    pub reps: Vec<ChainMap>,
    rep_coords: Vec<Vec<Scalar>>,
    /// `d h + h d` in coordinates of `maps`.
    null_op: Mat,
}

impl HomK {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of the class of a chain map in the basis `reps`.
    pub fn class_of(&self, g: &ChainMap) -> Option<Vec<Scalar>> {
        let c = self.maps.coords(g)?;
        if !self.cycles.contains(&c) {
            return None;
        }
        let f = self.maps.x.field();
        let mut cols = self.rep_coords.clone();
        cols.extend(self.boundaries.vectors());
        let sys = Mat::from_cols(f, self.maps.dim, &cols);
        let sol = solve_particular(&sys, &c)?;
        Some(sol[..self.reps.len()].to_vec())
    }

    /// A homotopy `h` with `g = d h + h d`, if the class of `g` is zero.
    pub fn null_witness(&self, g: &ChainMap) -> Option<Homotopy> {
        let c = self.maps.coords(g)?;
        let b = solve_particular(&self.null_op, &c)?;
        Some(self.homotopies.assemble(&b))
    }
}

/// `h -> d h + h d` from homotopies `X -> Y` into the coordinates of `maps`.
pub(crate) fn null_operator(maps: &MapSpace) -> Result<(MapSpace, Mat)> {
    let (x, y) = (maps.source(), maps.target());
    let homotopies = MapSpace::new(x, y, -1)?;
    let null_cols = (0..homotopies.dim)
        .map(|k| {
            maps.coords(&homotopies.basis_map(k).boundary(x, y)).expect("boundaries are graded module maps")
        })
        .collect::<Vec<_>>();
    let op = Mat::from_cols(x.field(), maps.dim, &null_cols);
    Ok((homotopies, op))
}

pub fn homotopy_hom(x: &Complex, y: &Complex) -> Result<HomK> {
    let f = x.field();
    let maps = MapSpace::new(x, y, 0)?;
    let cycles = chain_operator(&maps).kernel();
    let (homotopies, null_op) = null_operator(&maps)?;
    let boundaries = Subspace::span_of_cols(&null_op);
    let in_cycles: Vec<Vec<Scalar>> = boundaries.vectors().iter().map(|v| cycles.coords_unchecked(v)).collect();
    let q = Subspace::span_of_vectors(f, cycles.dim(), &in_cycles).ambient_quotient();
    let rep_coords: Vec<Vec<Scalar>> = (0..q.dim()).map(|s| cycles.basis().mul_vec(&q.lift.col(s))).collect();
    let reps = rep_coords.iter().map(|c| maps.assemble(c)).collect();
    Ok(HomK { maps, homotopies, cycles, boundaries, reps, rep_coords, null_op })
}

/// A verified homotopy `f ≃ 0`, if one exists.
pub fn null_homotopy_witness(f: &ChainMap, x: &Complex, y: &Complex) -> Result<Option<Homotopy>> {
    let hs = MapSpace::new(x, y, -1)?;
    let (lo, hi) = joint_range(&[x, y], 0);
    let rows = flat_len(x, y, 0, lo, hi);
    let op = hs.operator(rows, |h| flat_over(&h.boundary(x, y), x, y, lo, hi));
    let target = flat_over(f, x, y, lo, hi);
    let Some(b) = solve_particular(&op, &target) else {
        return Ok(None);
    };
    let h = hs.assemble(&b);
    let zero = Graded::zero(x, y, 0);
    Ok(verify_homotopy(f, &zero, &h, x, y).then_some(h))
}

/// A chain map `a: Y -> X` with homotopies `a g - id = d s + s d` and
/// `g a - id = d t + t d`, if `g` is a homotopy equivalence.
#[derive(Clone, Debug)]
pub struct HomotopyInverse {
    pub inverse: ChainMap,
    /// On the source of `g`.
    pub left: Homotopy,
    /// On the target of `g`.
    pub right: Homotopy,
}

pub fn homotopy_inverse(g: &ChainMap, x: &Complex, y: &Complex) -> Result<Option<HomotopyInverse>> {
    let f = x.field();
    let maps = MapSpace::new(y, x, 0)?;
    let sx = MapSpace::new(x, x, -1)?;
    let sy = MapSpace::new(y, y, -1)?;
    let chain = chain_operator(&maps);
    let (xl, xh) = joint_range(&[x], 0);
    let (yl, yh) = joint_range(&[y], 0);
    let rx = flat_len(x, x, 0, xl, xh);
    let ry = flat_len(y, y, 0, yl, yh);
    let r0 = chain.rows();
    let left = maps.operator(rx, |a| flat_over(&a.after(g, x, y, x), x, x, xl, xh));
    let right = maps.operator(ry, |a| flat_over(&g.after(a, y, x, y), y, y, yl, yh));
    let bx = sx.operator(rx, |s| flat_over(&s.boundary(x, x), x, x, xl, xh));
    let by = sy.operator(ry, |t| flat_over(&t.boundary(y, y), y, y, yl, yh));
    let n = maps.dim + sx.dim + sy.dim;
    let mut sys = Mat::zeros(f, r0 + rx + ry, n);
    sys.set_block(0, 0, &chain);
    sys.set_block(r0, 0, &left);
    sys.set_block(r0, maps.dim, &-&bx);
    sys.set_block(r0 + rx, 0, &right);
    sys.set_block(r0 + rx, maps.dim + sx.dim, &-&by);
    let mut rhs = vec![f.zero(); r0];
    rhs.extend(flat_over(&Graded::identity(x), x, x, xl, xh));
    rhs.extend(flat_over(&Graded::identity(y), y, y, yl, yh));
    let Some(z) = solve_particular(&sys, &rhs) else {
        return Ok(None);
    };
    let inverse = maps.assemble(&z[..maps.dim]);
    let left = sx.assemble(&z[maps.dim..maps.dim + sx.dim]);
    let right = sy.assemble(&z[maps.dim + sx.dim..]);
    let ok = inverse.is_chain_map(y, x)
        && verify_homotopy(&inverse.after(g, x, y, x), &Graded::identity(x), &left, x, x)
        && verify_homotopy(&g.after(&inverse, y, x, y), &Graded::identity(y), &right, y, y);
    Ok(ok.then_some(HomotopyInverse { inverse, left, right }))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::exactlin::Field;
    use crate::modrep::Module;

    #[test]
    fn contractible_complexes_have_no_maps_up_to_homotopy() {
        let f = Field::Rationals;
        let a = dual_numbers(f);
        let c = Complex::contractible(&Module::regular(a.clone()), 0).unwrap();
        let x = periodic(&a, 0, 3);
        assert_eq!(homotopy_hom(&c, &x).unwrap().dim(), 0);
        assert_eq!(homotopy_hom(&x, &c).unwrap().dim(), 0);
        let id = Graded::identity(&c);
        let h = null_homotopy_witness(&id, &c, &c).unwrap().unwrap();
        assert!(verify_homotopy(&id, &Graded::zero(&c, &c, 0), &h, &c, &c));
    }

    #[test]
    fn stalks_give_module_homs() {
        let f = Field::prime(3).unwrap();
        let a = dual_numbers(f);
        let s = Complex::stalk(&simple(&a), 0).unwrap();
        let r = Complex::stalk(&Module::regular(a.clone()), 0).unwrap();
        assert_eq!(homotopy_hom(&r, &r).unwrap().dim(), 2);
        assert_eq!(homotopy_hom(&r, &s).unwrap().dim(), 1);
        assert_eq!(homotopy_hom(&s, &r).unwrap().dim(), 1);
        let id = Graded::identity(&s);
        assert!(null_homotopy_witness(&id, &s, &s).unwrap().is_none());
        let z = Graded::zero(&s, &s, 0);
        let h = null_homotopy_witness(&z, &s, &s).unwrap().unwrap();
        assert!(h.is_zero_map());
    }

    #[test]
    fn two_term_complexes_match_brute_count() {
        // endomorphisms of A are right multiplications, so a chain map of
        // A -x-> A is a pair (p, q) with p x = x q and a null-homotopy is s
        // with (p, q) = (x s, s x)
        for f in [Field::prime(2).unwrap(), Field::Rationals, Field::prime(7).unwrap()] {
            let a = dual_numbers(f);
            let x = periodic(&a, 0, 2);
            let xe = a.basis_vec(1);
            let mut cols = Vec::new();
            for i in 0..4 {
                let (p, q) = if i < 2 { (a.basis_vec(i), a.zero_elem()) } else { (a.zero_elem(), a.basis_vec(i - 2)) };
                cols.push(crate::exactlin::sub_vec(&a.mul(&p, &xe), &a.mul(&xe, &q)));
            }
            let cycles = Mat::from_cols(f, 2, &cols).kernel().dim();
            let bounds: Vec<Vec<Scalar>> = (0..2)
                .map(|i| {
                    let s = a.basis_vec(i);
                    let mut v = a.mul(&xe, &s);
                    v.extend(a.mul(&s, &xe));
                    v
                })
                .collect();
            let bdim = Subspace::span_of_vectors(f, 4, &bounds).dim();
            assert_eq!((cycles, bdim), (3, 1));
            assert_eq!(homotopy_hom(&x, &x).unwrap().dim(), cycles - bdim);
        }
    }

    #[test]
    fn classes_and_witnesses() {
        let f = Field::Rationals;
        let a = dual_numbers(f);
        let x = periodic(&a, 0, 2);
        let hk = homotopy_hom(&x, &x).unwrap();
        for (i, r) in hk.reps.iter().enumerate() {
            assert!(r.is_chain_map(&x, &x));
            let c = hk.class_of(r).unwrap();
            assert_eq!(c, crate::exactlin::unit_vec(f, hk.dim(), i));
            assert!(hk.null_witness(r).is_none());
        }
        let id = Graded::identity(&x);
        assert!(hk.class_of(&id).is_some());
    }

    #[test]
    fn homotopy_inverses() {
        let f = Field::Rationals;
        let a = dual_numbers(f);
        let c = Complex::contractible(&Module::regular(a.clone()), 0).unwrap();
        let z = Complex::zero(a.clone());
        // a contractible complex is equivalent to zero
        let to_zero = Graded::zero(&c, &z, 0);
        assert!(homotopy_inverse(&to_zero, &c, &z).unwrap().is_some());
        let x = periodic(&a, 0, 2);
        let two = Graded::identity(&x).scale(&f.from_i64(2));
        let inv = homotopy_inverse(&two, &x, &x).unwrap().unwrap();
        assert!(inv.inverse.is_chain_map(&x, &x));
        let zero = Graded::zero(&x, &x, 0);
        assert!(homotopy_inverse(&zero, &x, &x).unwrap().is_none());
    }
}

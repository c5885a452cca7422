use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{combine, kernel_of, MicroGraded, SpanSolver};
use crate::error::{Error, Result};
use crate::linalg::{rank, solve_affine, to_dense, to_sparse, SparseVec, Subspace};
use crate::ncalg::{Element, TruncatedAlgebra};
use crate::rational::{int, Q};

/// `Σ_m h_m v^m` with `v = f^{-1}`; numerators in `G` coordinates.
type Frac = BTreeMap<usize, Element>;

fn binomial(n: usize, k: usize) -> Q {
    (0..k).fold(Q::one(), |acc, i| acc * int((n - i) as i64) / int((i + 1) as i64))
}

fn add_into(frac: &mut Frac, m: usize, h: Element) {
    match frac.get_mut(&m) {
        Some(e) => {
            for (x, y) in e.iter_mut().zip(h) {
                *x += y;
            }
        }
        None => {
            frac.insert(m, h);
        }
    }
}

/// Arithmetic of fractions over `G` with denominator powers of `f`.
#[derive(Clone, Debug)]
struct FracRing {
    g: MicroGraded,
    f: Element,
}

impl FracRing {
    fn alg(&self) -> &TruncatedAlgebra {
        &self.g.algebra
    }

    fn mul_strict(&self, a: &Element, b: &Element) -> Option<Element> {
        self.alg().product_defined_for(a, b).then(|| self.alg().mul(a, b))
    }

    /// `δ(h) = f h - h f`.
    fn delta(&self, h: &Element) -> Option<Element> {
        Some(self.alg().sub(&self.mul_strict(&self.f, h)?, &self.mul_strict(h, &self.f)?))
    }

    /// Uses `v^k h = Σ_j (-1)^j C(k+j-1, j) δ^j(h) v^{k+j}`, which is finite
    /// because `δ` raises the power of `t`.
    fn mul(&self, x: &Frac, y: &Frac) -> Option<Frac> {
        let mut out = Frac::new();
        for (&k1, h1) in x {
            if TruncatedAlgebra::is_zero(h1) {
                continue;
            }
            for (&k2, h2) in y {
                let mut dj = h2.clone();
                let mut j = 0;
                while !TruncatedAlgebra::is_zero(&dj) {
                    if j > self.g.n + 1 {
                        return None;
                    }
                    let sign = if j % 2 == 0 { Q::one() } else { -Q::one() };
                    let coef = if k1 == 0 { Q::one() } else { sign * binomial(k1 + j - 1, j) };
                    let term = self.mul_strict(h1, &dj)?;
                    add_into(&mut out, k1 + k2 + j, self.alg().scale(&term, &coef));
                    if k1 == 0 {
                        break;
                    }
                    dj = self.delta(&dj)?;
                    j += 1;
                }
            }
        }
        Some(out)
    }

    fn scalar_frac(&self, h: Element) -> Frac {
        Frac::from([(0, h)])
    }

    fn v(&self) -> Frac {
        Frac::from([(1, self.alg().unit().clone())])
    }
}

/// The degree-`d` part of the localization with `v`-order at most `order`:
/// in order `m` the numerators live in `G_{m+d}` modulo `G_{m+d-1}·f`.
#[derive(Clone, Debug)]
struct FracSpace {
    degree: isize,
    order: usize,
    complements: Vec<Vec<usize>>,
    divisors: Vec<Vec<usize>>,
    solvers: Vec<SpanSolver>,
    offsets: Vec<usize>,
    dim: usize,
}

impl FracSpace {
    fn new(ring: &FracRing, degree: isize, order: usize) -> Result<Self> {
        let g = &ring.g;
        let mut s = FracSpace {
            degree,
            order,
            complements: vec![],
            divisors: vec![],
            solvers: vec![],
            offsets: vec![],
            dim: 0,
        };
        for m in 0..=order {
            let grade = m as isize + degree;
            let (mut comp, mut divs, mut family) = (Vec::new(), Vec::new(), Vec::new());
            if grade >= 0 && grade as usize <= g.top_grade() {
                let grade = grade as usize;
                let mut span = Subspace::zero(g.dim());
                if m > 0 && grade > 0 {
                    for b in g.grade_range(grade - 1) {
                        let e = ring.alg().basis_element(b);
                        if let Some(p) = ring.mul_strict(&e, &ring.f) {
                            if !span.insert(to_sparse(&p)) {
                                return Err(Error::HypothesisFailure(format!(
                                    "right multiplication by the lift is not injective in grade {}",
                                    grade - 1
                                )));
                            }
                            divs.push(b);
                            family.push(to_sparse(&p));
                        }
                    }
                }
                for i in g.grade_range(grade) {
                    let e = SparseVec::from([(i, Q::one())]);
                    if span.insert(e.clone()) {
                        comp.push(i);
                    }
                }
                let mut fam: Vec<SparseVec> = comp.iter().map(|&i| SparseVec::from([(i, Q::one())])).collect();
                fam.extend(family);
                family = fam;
            }
            s.offsets.push(s.dim);
            s.dim += comp.len();
            s.solvers.push(SpanSolver::new(&family));
            s.complements.push(comp);
            s.divisors.push(divs);
        }
        Ok(s)
    }

    /// Coordinates of a fraction of this degree; `None` past the order or
    /// when a numerator is out of range.
    fn decompose(&self, g: &MicroGraded, frac: &Frac) -> Option<Element> {
        let mut work = frac.clone();
        let mut out = vec![Q::zero(); self.dim];
        while let Some((m, h)) = work.pop_last() {
            if TruncatedAlgebra::is_zero(&h) {
                continue;
            }
            if m > self.order {
                return None;
            }
            let c = self.solvers[m].solve(&to_sparse(&h))?;
            let nc = self.complements[m].len();
            for (i, x) in c[..nc].iter().enumerate() {
                out[self.offsets[m] + i] += x;
            }
            let mut rest = vec![Q::zero(); g.dim()];
            for (&b, x) in self.divisors[m].iter().zip(&c[nc..]) {
                rest[b] += x;
            }
            if !TruncatedAlgebra::is_zero(&rest) {
                add_into(&mut work, m - 1, rest);
            }
        }
        Some(out)
    }

    fn basis_frac(&self, idx: usize, g: &MicroGraded) -> Frac {
        let m = self.offsets.iter().rposition(|&o| o <= idx).expect("offset");
        let m = (m..self.offsets.len()).find(|&k| idx < self.offsets[k] + self.complements[k].len()).expect("order");
        let i = self.complements[m][idx - self.offsets[m]];
        Frac::from([(m, g.algebra.basis_element(i))])
    }

    /// Dimension contributed by each `v`-order.
    fn dims_by_order(&self) -> Vec<usize> {
        self.complements.iter().map(Vec::len).collect()
    }

    fn to_frac(&self, g: &MicroGraded, x: &Element) -> Frac {
        let mut out = Frac::new();
        for (idx, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (m, h) in self.basis_frac(idx, g) {
                add_into(&mut out, m, g.algebra.scale(&h, c));
            }
        }
        out
    }
}

/// Degree-zero part of the Ore localization of `G = gr_(n) A` at a
/// homogeneous degree-one lift `f`, truncated at `v`-order `order`.
#[derive(Clone, Debug)]
pub struct Localization {
    ring: FracRing,
    order: usize,
    space: FracSpace,
    algebra: TruncatedAlgebra,
}

/// Localizes `G` at the degree-one element `lift`.
pub fn localize_deg0(g: &MicroGraded, lift: &Element, order: usize) -> Result<Localization> {
    if !g.is_homogeneous(lift, 1) {
        return Err(Error::NotFiltered("the lift must be homogeneous of degree one".into()));
    }
    if g.t_multiples(1).contains(&to_sparse(lift)) {
        return Err(Error::ZeroSymbol);
    }
    let ring = FracRing { g: g.clone(), f: lift.clone() };
    let space = FracSpace::new(&ring, 0, order)?;
    let n = space.dim;
    let basis: Vec<Frac> = (0..n).map(|i| space.basis_frac(i, g)).collect();
    let mut table = vec![vec![SparseVec::new(); n]; n];
    let mut defined = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if let Some(p) = ring.mul(&basis[i], &basis[j]).and_then(|p| space.decompose(g, &p)) {
                table[i][j] = to_sparse(&p);
                defined[i][j] = true;
            }
        }
    }
    let labels = basis
        .iter()
        .map(|b| {
            let (m, h) = b.iter().next().expect("basis fraction");
            let i = h.iter().position(|x| !x.is_zero()).expect("nonzero numerator");
            let l = &g.algebra.labels()[i];
            match m {
                0 => l.clone(),
                1 => format!("{l}*v"),
                m => format!("{l}*v^{m}"),
            }
        })
        .collect();
    let unit = space
        .decompose(g, &ring.scalar_frac(g.algebra.unit().clone()))
        .ok_or_else(|| Error::InvalidPresentation("unit does not localize".into()))?;
    let mut generators = Vec::new();
    for (name, img) in g.algebra.generators() {
        if g.is_homogeneous(img, 0) && name != "t" {
            if let Some(e) = space.decompose(g, &ring.scalar_frac(img.clone())) {
                generators.push((name.clone(), e));
            }
        }
    }
    let s = Frac::from([(1, g.t().clone())]);
    if let Some(e) = space.decompose(g, &s).filter(|e| !TruncatedAlgebra::is_zero(e)) {
        generators.push(("s".to_string(), e));
    }
    let algebra = TruncatedAlgebra::from_partial_table(labels, unit, table, defined, generators)?;
    Ok(Localization { ring, order, space, algebra })
}

impl Localization {
    pub fn algebra(&self) -> &TruncatedAlgebra {
        &self.algebra
    }

    pub fn graded(&self) -> &MicroGraded {
        &self.ring.g
    }

    pub fn lift(&self) -> &Element {
        &self.ring.f
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Dimension contributed by each power of `v`.
    pub fn dims_by_order(&self) -> Vec<usize> {
        self.space.dims_by_order()
    }

    fn decompose(&self, frac: &Frac) -> Option<Element> {
        self.space.decompose(&self.ring.g, frac)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct LiftComparison {
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    /// Every basis image stays inside the truncation.
    pub defined_on_basis: bool,
    pub unital: bool,
    pub multiplicative: bool,
    pub checked_pairs: usize,
}

impl LiftComparison {
    pub fn is_isomorphism(&self) -> bool {
        self.defined_on_basis
            && self.source_dim == self.target_dim
            && self.rank == self.target_dim
            && self.unital
            && self.multiplicative
            && self.checked_pairs > 0
    }
}

/// The comparison map from the localization at `f' = f + t a` to the one
/// at `f`, sending `v' ↦ v·Σ_j (-t a v)^j`.
pub fn compare_lifts(source: &Localization, target: &Localization) -> Result<LiftComparison> {
    let g = &target.ring.g;
    if source.ring.g.n != g.n || source.ring.g.grade_dims() != g.grade_dims() {
        return Err(Error::InvalidPresentation("lifts live in different graded algebras".into()));
    }
    let alg = &g.algebra;
    let diff = alg.sub(&source.ring.f, &target.ring.f);
    // solve t·a = f' - f with a in degree zero
    let zero_range = g.grade_range(0);
    let cols: Vec<Element> = zero_range.clone().map(|b| alg.mul(g.t(), &alg.basis_element(b))).collect();
    let eqs: Vec<(SparseVec, Q)> = (0..g.dim())
        .map(|r| {
            let row = cols.iter().enumerate().filter(|(_, c)| !c[r].is_zero()).map(|(i, c)| (i, c[r].clone())).collect();
            (row, diff[r].clone())
        })
        .collect();
    let sol = solve_affine(&eqs, cols.len())
        .particular
        .ok_or_else(|| Error::HypothesisFailure("the lifts do not share a symbol".into()))?;
    let mut a = vec![Q::zero(); g.dim()];
    for (b, c) in zero_range.zip(sol) {
        a[b] = c;
    }
    let ring = &target.ring;
    let overflow = || Error::HypothesisFailure("comparison map leaves the truncation".into());
    let tav = ring.mul(&Frac::from([(0, alg.mul(g.t(), &a))]), &ring.v()).ok_or_else(overflow)?;
    let neg_tav: Frac = tav.iter().map(|(&m, h)| (m, alg.scale(h, &-Q::one()))).collect();
    let mut w = ring.scalar_frac(alg.unit().clone());
    let mut power = w.clone();
    for _ in 0..=g.n {
        power = ring.mul(&power, &neg_tav).ok_or_else(overflow)?;
        for (m, h) in &power {
            add_into(&mut w, *m, h.clone());
        }
    }
    let v_new = ring.mul(&ring.v(), &w).ok_or_else(overflow)?;
    let sspace = &source.space;
    let mut images = Vec::with_capacity(sspace.dim);
    let mut defined_on_basis = true;
    for idx in 0..sspace.dim {
        let basis = sspace.basis_frac(idx, g);
        let (&m, c) = basis.iter().next().expect("basis fraction");
        let mut vp = ring.scalar_frac(alg.unit().clone());
        let mut img = None;
        for _ in 0..m {
            vp = match ring.mul(&vp, &v_new) {
                Some(x) => x,
                None => break,
            };
        }
        if let Some(x) = ring.mul(&ring.scalar_frac(c.clone()), &vp) {
            img = target.decompose(&x);
        }
        match img {
            Some(x) => images.push(x),
            None => {
                defined_on_basis = false;
                images.push(vec![Q::zero(); target.space.dim]);
            }
        }
    }
    let (from, to) = (&source.algebra, &target.algebra);
    let apply = |x: &Element| combine(x, &images, to.dim());
    let unital = apply(from.unit()) == *to.unit();
    let mut multiplicative = true;
    let mut checked_pairs = 0;
    for i in 0..from.dim() {
        for j in 0..from.dim() {
            if !from.product_defined(i, j) || !to.product_defined_for(&images[i], &images[j]) {
                continue;
            }
            checked_pairs += 1;
            if apply(&to_dense(&from.table()[i][j], from.dim())) != to.mul(&images[i], &images[j]) {
                multiplicative = false;
            }
        }
    }
    debug_assert_eq!(kernel_of(&images, to.dim()).len(), images.len() - rank(&images));
    Ok(LiftComparison {
        source_dim: from.dim(),
        target_dim: to.dim(),
        rank: rank(&images),
        defined_on_basis,
        unital,
        multiplicative,
        checked_pairs,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct TwistingReport {
    /// `dim O(m)_i = dim G_{i+m}`, listed as `(m, i, dim)`.
    pub piece_dims: Vec<(i64, i64, usize)>,
    /// Multiplication `O(m) ⊗ O(l) → O(m+l)` is associative on defined triples.
    pub associative: bool,
    /// The maps `t: O(m) → O(m+1)` commute with multiplication.
    pub t_compatible: bool,
    /// On the chart, `O(1) ⊗ O(-1) → O` sends `f ⊗ v` and `v ⊗ f` to `1`.
    pub pairing_is_unit: bool,
    /// `dim O(m)` on the chart for `m = 0..=max_shift`.
    pub chart_dims: Vec<usize>,
    /// Rank of `t: O(m) → O(m+1)` on the chart.
    pub t_map_ranks: Vec<usize>,
    /// Dimension of the image of `O(m)` in `O(max_shift)` for each `m`.
    pub tower_dims: Vec<usize>,
}

impl TwistingReport {
    pub fn holds(&self) -> bool {
        self.associative && self.t_compatible && self.pairing_is_unit
    }
}

/// The twisted pieces `O(m)` of `G` for `|m| ≤ max_shift`, and the tower of
/// `t`-maps `O → O(1) → … → O(max_shift)` on the chart of a localization.
pub fn twisting_check(loc: &Localization, max_shift: usize) -> Result<TwistingReport> {
    let g = &loc.ring.g;
    let alg = &g.algebra;
    let top = g.top_grade() as i64;
    let mut piece_dims = Vec::new();
    let gd = g.grade_dims();
    for m in -(max_shift as i64)..=max_shift as i64 {
        for i in -m..=top - m {
            piece_dims.push((m, i, gd[(i + m) as usize]));
        }
    }
    let associative = alg.associativity_failure().is_none();
    let mut t_compatible = true;
    for i in 0..g.dim() {
        for j in 0..g.dim() {
            if !alg.product_defined(i, j) {
                continue;
            }
            let (a, b) = (alg.basis_element(i), alg.basis_element(j));
            let ab = alg.mul(&a, &b);
            let t_ab = alg.mul(g.t(), &ab);
            if alg.mul(&alg.mul(g.t(), &a), &b) != t_ab || alg.mul(&a, &alg.mul(g.t(), &b)) != t_ab {
                t_compatible = false;
            }
        }
    }
    let ring = &loc.ring;
    let f = ring.scalar_frac(ring.f.clone());
    let unit = loc.decompose(&ring.scalar_frac(alg.unit().clone()));
    let fv = ring.mul(&f, &ring.v()).and_then(|x| loc.decompose(&x));
    let vf = ring.mul(&ring.v(), &f).and_then(|x| loc.decompose(&x));
    let pairing_is_unit = unit.is_some() && fv == unit && vf == unit;
    let spaces: Vec<FracSpace> =
        (0..=max_shift).map(|m| FracSpace::new(ring, m as isize, loc.order)).collect::<Result<_>>()?;
    let chart_dims = spaces.iter().map(|s| s.dim).collect();
    let t_frac = |x: &Frac| -> Frac { x.iter().map(|(&m, h)| (m, alg.mul(g.t(), h))).collect() };
    // matrices of t on the chart, as images of basis fractions
    let mut t_maps: Vec<Vec<Option<Element>>> = Vec::new();
    for m in 0..max_shift {
        let (src, dst) = (&spaces[m], &spaces[m + 1]);
        t_maps.push((0..src.dim).map(|i| dst.decompose(g, &t_frac(&src.basis_frac(i, g)))).collect());
    }
    let t_map_ranks = t_maps.iter().map(|imgs| rank(&imgs.iter().flatten().cloned().collect::<Vec<_>>())).collect();
    let mut tower_dims = Vec::new();
    for m in 0..=max_shift {
        let mut images: Vec<Option<Element>> =
            (0..spaces[m].dim).map(|i| Some(to_dense(&SparseVec::from([(i, Q::one())]), spaces[m].dim))).collect();
        for k in m..max_shift {
            images = images
                .into_iter()
                .map(|x| {
                    let x = x?;
                    let frac = spaces[k].to_frac(g, &x);
                    spaces[k + 1].decompose(g, &t_frac(&frac))
                })
                .collect();
        }
        tower_dims.push(rank(&images.into_iter().flatten().collect::<Vec<_>>()));
    }
    debug_assert!(spaces.iter().all(|s| s.degree >= 0));
    Ok(TwistingReport { piece_dims, associative, t_compatible, pairing_is_unit, chart_dims, t_map_ranks, tower_dims })
}

#[cfg(test)]
mod tests {
    use super::super::{gr_n, tests::weyl};
    use super::*;
    use crate::ncalg::NcPoly;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), int(6));
        assert_eq!(binomial(0, 0), int(1));
        assert_eq!(binomial(3, 0), int(1));
    }

    #[test]
    fn commutative_localization_of_gr() {
        let g = gr_n(&weyl(4), 0).unwrap();
        let f = g.class_of_poly(1, &NcPoly::gen(1)).unwrap();
        let loc = localize_deg0(&g, &f, 3).unwrap();
        assert_eq!(loc.dims_by_order(), vec![5, 0, 0, 0]);
        assert!(loc.algebra().is_commutative());
    }

    #[test]
    fn first_order_localization_of_weyl() {
        let g = gr_n(&weyl(4), 1).unwrap();
        let f = g.class_of_poly(1, &NcPoly::gen(1)).unwrap();
        let loc = localize_deg0(&g, &f, 3).unwrap();
        assert_eq!(loc.dims_by_order(), vec![5, 5, 0, 0]);
        assert!(loc.algebra().associativity_failure().is_none());
        // s = t v squares to zero, so [s, x] = -s^2 vanishes
        assert!(loc.algebra().is_commutative());
        let g2 = gr_n(&weyl(4), 2).unwrap();
        let f2 = g2.class_of_poly(1, &NcPoly::gen(1)).unwrap();
        let loc2 = localize_deg0(&g2, &f2, 3).unwrap();
        let a = loc2.algebra();
        assert!(a.associativity_failure().is_none());
        let (s, x) = (a.generator("s").unwrap(), a.generator("x").unwrap());
        let lhs = a.commutator(s, x);
        assert!(!TruncatedAlgebra::is_zero(&lhs));
        assert_eq!(lhs, a.scale(&a.mul(s, s), &-Q::one()));
    }

    #[test]
    fn zero_symbol_is_rejected() {
        let g = gr_n(&weyl(4), 1).unwrap();
        let f = g.t().clone();
        assert_eq!(localize_deg0(&g, &f, 3).unwrap_err(), Error::ZeroSymbol);
    }

    #[test]
    fn lifts_give_isomorphic_localizations() {
        let g = gr_n(&weyl(4), 1).unwrap();
        let f = g.class_of_poly(1, &NcPoly::gen(1)).unwrap();
        let base = localize_deg0(&g, &f, 3).unwrap();
        let tx = g.algebra().mul(g.t(), &g.class_of_poly(0, &NcPoly::gen(0)).unwrap());
        let other = localize_deg0(&g, &g.algebra().add(&f, &tx), 3).unwrap();
        let cmp = compare_lifts(&other, &base).unwrap();
        assert!(cmp.is_isomorphism(), "{cmp:?}");
        let same = compare_lifts(&base, &base).unwrap();
        assert!(same.is_isomorphism());
    }

    #[test]
    fn twisting_pieces_on_weyl() {
        let g = gr_n(&weyl(4), 1).unwrap();
        let f = g.class_of_poly(1, &NcPoly::gen(1)).unwrap();
        let loc = localize_deg0(&g, &f, 3).unwrap();
        let r = twisting_check(&loc, 2).unwrap();
        assert!(r.holds(), "{r:?}");
        eprintln!("{r:?}");
    }
}

//! Microlocal constructions over a filtered algebra `A = ∪ A_i`: the
//! associated graded, the graded quotients `gr_(n) = ⊕ A_i / A_{i-n-1}`
//! with their central element `t`, degree-zero Ore localization at a
//! degree-one element, twisting bimodules and a rank-one criterion for
//! `t`-adic modules.
//!
//! Every algebra here is a truncation. Products whose factors reach past
//! the truncation are marked undefined and all checks run over the defined
//! products only.

mod localize;
mod rank_one;

pub use localize::{compare_lifts, localize_deg0, twisting_check, LiftComparison, Localization, TwistingReport};
pub use rank_one::{rank_one_criterion, RankOneReport, TAdicModule};

use std::ops::Range;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{rank, solve_affine, to_dense, to_sparse, Echelon, SparseVec, Subspace};
use crate::ncalg::{weight_filtration, Element, NcPoly, Presentation, TruncatedAlgebra};
use crate::rational::Q;

/// Expresses vectors in the span of a fixed independent family.
#[derive(Clone, Debug)]
pub(crate) struct SpanSolver {
    count: usize,
    echelon: Echelon,
}

impl SpanSolver {
    /// `family` must be linearly independent.
    pub(crate) fn new(family: &[SparseVec]) -> Self {
        let m = family.len();
        let mut echelon = Echelon::new();
        for (r, v) in family.iter().enumerate() {
            // tag columns below the data record the combination
            let mut row: SparseVec = v.iter().map(|(&c, q)| (c + m, q.clone())).collect();
            row.insert(r, Q::one());
            let inserted = echelon.insert(row);
            debug_assert!(inserted.is_some_and(|i| echelon.pivot_of_row(i) >= m), "dependent family");
        }
        SpanSolver { count: m, echelon }
    }

    /// Coefficients `c` with `v = Σ c_r family[r]`, if `v` lies in the span.
    pub(crate) fn solve(&self, v: &SparseVec) -> Option<Vec<Q>> {
        let m = self.count;
        let shifted: SparseVec = v.iter().map(|(&c, q)| (c + m, q.clone())).collect();
        let rest = self.echelon.reduce(shifted);
        if rest.keys().any(|&c| c >= m) {
            return None;
        }
        let mut out = vec![Q::zero(); m];
        for (c, q) in rest {
            out[c] = -q;
        }
        Some(out)
    }
}

/// Kernel of the linear map sending basis vector `i` to `images[i]`.
pub(crate) fn kernel_of(images: &[Element], target_dim: usize) -> Vec<Vec<Q>> {
    let eqs: Vec<(SparseVec, Q)> = (0..target_dim)
        .map(|r| {
            let row: SparseVec =
                images.iter().enumerate().filter(|(_, v)| !v[r].is_zero()).map(|(i, v)| (i, v[r].clone())).collect();
            (row, Q::zero())
        })
        .filter(|(row, _)| !row.is_empty())
        .collect();
    solve_affine(&eqs, images.len()).kernel
}

/// `Σ c_i images[i]`.
pub(crate) fn combine(coeffs: &[Q], images: &[Element], dim: usize) -> Element {
    let mut out = vec![Q::zero(); dim];
    for (c, img) in coeffs.iter().zip(images) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(img) {
            *o += c * x;
        }
    }
    out
}

/// A presented algebra with the increasing filtration by generator weight.
#[derive(Clone, Debug)]
pub struct FilteredAlgebra {
    presentation: Presentation,
    algebra: TruncatedAlgebra,
    levels: Vec<Subspace>,
    zero: Subspace,
}

impl FilteredAlgebra {
    /// Builds `A` at the presentation's bound and checks `1 ∈ A_0` and
    /// `A_i·A_j ⊆ A_{i+j}` on all defined products.
    pub fn new(pres: &Presentation) -> Result<Self> {
        let algebra = TruncatedAlgebra::from_presentation(pres)?;
        let levels = weight_filtration(pres, &algebra)?;
        let zero = Subspace::zero(algebra.dim());
        let fa = FilteredAlgebra { presentation: pres.clone(), algebra, levels, zero };
        fa.check()?;
        Ok(fa)
    }

    fn check(&self) -> Result<()> {
        let a = &self.algebra;
        let n = a.dim();
        if self.levels.last().map_or(0, Subspace::dim) != n {
            return Err(Error::NotFiltered("filtration does not exhaust the algebra".into()));
        }
        if !self.levels[0].contains(&to_sparse(a.unit())) {
            return Err(Error::NotFiltered("unit is not in A_0".into()));
        }
        for (i, li) in self.levels.iter().enumerate() {
            for (j, lj) in self.levels.iter().enumerate() {
                let target = self.level((i + j) as isize);
                for u in li.basis() {
                    let ud = to_dense(u, n);
                    for v in lj.basis() {
                        if !a.product_defined_for(&ud, &to_dense(v, n)) {
                            continue;
                        }
                        if !target.contains(&a.mul_sparse(u, v)) {
                            return Err(Error::NotFiltered(format!("A_{i}·A_{j} is not inside A_{}", i + j)));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn algebra(&self) -> &TruncatedAlgebra {
        &self.algebra
    }

    /// Largest weight occurring in the truncation.
    pub fn max_weight(&self) -> usize {
        self.levels.len() - 1
    }

    /// `A_k`; zero for negative `k`, everything beyond the top weight.
    pub fn level(&self, k: isize) -> &Subspace {
        if k < 0 {
            &self.zero
        } else {
            &self.levels[(k as usize).min(self.levels.len() - 1)]
        }
    }

    /// `dim A_k` for `k = 0..=max_weight`.
    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(Subspace::dim).collect()
    }

    /// Smallest `k` with `a ∈ A_k`.
    pub fn order_of(&self, a: &SparseVec) -> Option<usize> {
        self.levels.iter().position(|l| l.contains(a))
    }

    pub fn element(&self, p: &NcPoly) -> Element {
        self.algebra.eval_own(p)
    }
}

/// Representatives and coordinates for the pieces `A_k / A_{k-n-1}`.
#[derive(Clone, Debug)]
struct GradedPieces {
    reps: Vec<Vec<SparseVec>>,
    lower: Vec<Subspace>,
    solvers: Vec<SpanSolver>,
    offsets: Vec<usize>,
    dim: usize,
}

impl GradedPieces {
    fn new(fa: &FilteredAlgebra, n: usize) -> Self {
        let ambient = fa.algebra.dim();
        let top = fa.max_weight() + n;
        let mut pieces = GradedPieces { reps: vec![], lower: vec![], solvers: vec![], offsets: vec![], dim: 0 };
        for k in 0..=top {
            let lower = fa.level(k as isize - n as isize - 1).clone();
            let upper = fa.level(k as isize);
            let mut span = lower.clone();
            let mut reps = Vec::new();
            // basis vectors first so that monomials are their own representatives
            let units = (0..ambient).map(|i| SparseVec::from([(i, Q::one())]));
            for c in units.chain(upper.canonical_basis()) {
                if upper.contains(&c) && span.insert(c.clone()) {
                    reps.push(c);
                }
            }
            let reduced: Vec<SparseVec> = reps.iter().map(|r| lower.reduce(r.clone())).collect();
            pieces.offsets.push(pieces.dim);
            pieces.dim += reps.len();
            pieces.solvers.push(SpanSolver::new(&reduced));
            pieces.reps.push(reps);
            pieces.lower.push(lower);
        }
        pieces
    }

    fn top(&self) -> usize {
        self.reps.len() - 1
    }

    /// Coordinates of the class of `v` in `A_k / A_{k-n-1}`; `None` when
    /// `v ∉ A_k`.
    fn coords(&self, k: usize, v: &SparseVec) -> Option<Vec<Q>> {
        if k > self.top() {
            return Some(Vec::new());
        }
        self.solvers[k].solve(&self.lower[k].reduce(v.clone()))
    }

    fn embed(&self, k: usize, coords: &[Q]) -> Element {
        let mut out = vec![Q::zero(); self.dim];
        if k <= self.top() {
            for (i, c) in coords.iter().enumerate() {
                out[self.offsets[k] + i] = c.clone();
            }
        }
        out
    }
}

/// `G = gr_(n) A = ⊕_i A_i / A_{i-n-1}` with `t` the class of `1` in
/// degree one. `n = 0` gives the associated graded.
#[derive(Clone, Debug)]
pub struct MicroGraded {
    n: usize,
    algebra: TruncatedAlgebra,
    grades: Vec<usize>,
    lifts: Vec<SparseVec>,
    t: Element,
    pieces: GradedPieces,
    filtered: FilteredAlgebra,
}

fn grade_label(fa: &FilteredAlgebra, k: usize, rep: &SparseVec) -> String {
    let a = &fa.algebra;
    if let Some((&i, c)) = rep.iter().next().filter(|_| rep.len() == 1) {
        if c.is_one() {
            let base = &a.labels()[i];
            let pow = k - fa.order_of(rep).unwrap_or(k);
            return match (pow, base.as_str()) {
                (0, _) => base.clone(),
                (1, "1") => "t".into(),
                (p, "1") => format!("t^{p}"),
                (1, _) => format!("t*{base}"),
                (p, _) => format!("t^{p}*{base}"),
            };
        }
    }
    format!("[{}]_{k}", a.fmt_element(&to_dense(rep, a.dim())))
}

/// Builds `gr_(n) A`. Grades run over `0..=max_weight + n`.
pub fn gr_n(fa: &FilteredAlgebra, n: usize) -> Result<MicroGraded> {
    let pieces = GradedPieces::new(fa, n);
    let a = &fa.algebra;
    let ad = a.dim();
    let dim = pieces.dim;
    let mut grades = Vec::with_capacity(dim);
    let mut lifts = Vec::with_capacity(dim);
    let mut labels = Vec::with_capacity(dim);
    for (k, reps) in pieces.reps.iter().enumerate() {
        for r in reps {
            grades.push(k);
            lifts.push(r.clone());
            labels.push(grade_label(fa, k, r));
        }
    }
    let dense: Vec<Element> = lifts.iter().map(|l| to_dense(l, ad)).collect();
    let orders: Vec<usize> = lifts.iter().map(|l| fa.order_of(l).expect("lift lies in the filtration")).collect();
    let mut table = vec![vec![SparseVec::new(); dim]; dim];
    let mut defined = vec![vec![false; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let k = grades[i] + grades[j];
            // the product lies in A_{k-n-1} for filtration reasons alone
            if k > pieces.top() || orders[i] + orders[j] + n < k {
                defined[i][j] = true;
                continue;
            }
            if !a.product_defined_for(&dense[i], &dense[j]) {
                continue;
            }
            let p = a.mul_sparse(&lifts[i], &lifts[j]);
            let c = pieces
                .coords(k, &p)
                .ok_or_else(|| Error::NotFiltered(format!("product of `{}` and `{}` leaves A_{k}", labels[i], labels[j])))?;
            table[i][j] = to_sparse(&pieces.embed(k, &c));
            defined[i][j] = true;
        }
    }
    let unit_sparse = to_sparse(a.unit());
    let class = |k: usize, v: &SparseVec| -> Result<Element> {
        let c = pieces.coords(k, v).ok_or_else(|| Error::NotFiltered(format!("element outside A_{k}")))?;
        Ok(pieces.embed(k, &c))
    };
    let unit = class(0, &unit_sparse)?;
    let t = class(1, &unit_sparse)?;
    let weights = fa.presentation.weights();
    let mut generators = Vec::new();
    for ((name, img), w) in a.generators().iter().zip(&weights) {
        generators.push((name.clone(), class(*w as usize, &to_sparse(img))?));
    }
    generators.push(("t".to_string(), t.clone()));
    let algebra = TruncatedAlgebra::from_partial_table(labels, unit, table, defined, generators)?;
    Ok(MicroGraded { n, algebra, grades, lifts, t, pieces, filtered: fa.clone() })
}

/// The associated graded `gr A = gr_(0) A`.
pub fn associated_graded(fa: &FilteredAlgebra) -> Result<MicroGraded> {
    gr_n(fa, 0)
}

impl MicroGraded {
    /// The index `n` of `gr_(n)`.
    pub fn level(&self) -> usize {
        self.n
    }

    pub fn algebra(&self) -> &TruncatedAlgebra {
        &self.algebra
    }

    pub fn filtered(&self) -> &FilteredAlgebra {
        &self.filtered
    }

    pub fn t(&self) -> &Element {
        &self.t
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn grades(&self) -> &[usize] {
        &self.grades
    }

    pub fn top_grade(&self) -> usize {
        self.pieces.top()
    }

    pub fn grade_dims(&self) -> Vec<usize> {
        self.pieces.reps.iter().map(Vec::len).collect()
    }

    /// Basis indices of grade `k`.
    pub fn grade_range(&self, k: usize) -> Range<usize> {
        if k > self.top_grade() {
            return self.dim()..self.dim();
        }
        let start = self.pieces.offsets[k];
        start..start + self.pieces.reps[k].len()
    }

    /// Representative in `A` of basis element `i`.
    pub fn lift(&self, i: usize) -> &SparseVec {
        &self.lifts[i]
    }

    /// Class in grade `k` of `a ∈ A_k`.
    pub fn class_of(&self, k: usize, a: &Element) -> Result<Element> {
        let c = self
            .pieces
            .coords(k, &to_sparse(a))
            .ok_or_else(|| Error::NotFiltered(format!("element is not in A_{k}")))?;
        Ok(self.pieces.embed(k, &c))
    }

    pub fn class_of_poly(&self, k: usize, p: &NcPoly) -> Result<Element> {
        self.class_of(k, &self.filtered.element(p))
    }

    /// Whether `g` is supported in grade `k`.
    pub fn is_homogeneous(&self, g: &Element, k: usize) -> bool {
        g.iter().enumerate().all(|(i, x)| x.is_zero() || self.grades[i] == k)
    }

    pub fn t_power(&self, k: usize) -> Element {
        self.algebra.pow(&self.t, k)
    }

    pub fn t_is_central(&self) -> bool {
        (0..self.dim()).all(|i| {
            let e = self.algebra.basis_element(i);
            self.algebra.mul(&self.t, &e) == self.algebra.mul(&e, &self.t)
        })
    }

    /// `t^{n+1} = 0` while `t^n ≠ 0`.
    pub fn t_nilpotency_holds(&self) -> bool {
        TruncatedAlgebra::is_zero(&self.t_power(self.n + 1))
            && (self.n > self.top_grade() || !TruncatedAlgebra::is_zero(&self.t_power(self.n)))
    }

    /// `t·G` as a subspace.
    pub fn t_multiples(&self, power: usize) -> Subspace {
        let tk = self.t_power(power);
        Subspace::spanned_by(
            self.dim(),
            (0..self.dim()).map(|i| to_sparse(&self.algebra.mul(&tk, &self.algebra.basis_element(i)))),
        )
    }

    /// Images of the basis of `self` in `other`, both built on the same
    /// filtered algebra, via the identity on representatives.
    fn class_map(&self, other: &MicroGraded) -> Result<Vec<Element>> {
        let ad = self.filtered.algebra.dim();
        (0..self.dim())
            .map(|i| {
                let k = self.grades[i];
                if k > other.top_grade() {
                    Ok(vec![Q::zero(); other.dim()])
                } else {
                    other.class_of(k, &to_dense(&self.lifts[i], ad))
                }
            })
            .collect()
    }
}

/// Rank, kernel and multiplicativity of a linear map between partial
/// algebras, given by basis images.
struct MapSummary {
    rank: usize,
    kernel: Vec<Vec<Q>>,
    multiplicative: bool,
    checked_pairs: usize,
}

fn summarize_map(from: &TruncatedAlgebra, to: &TruncatedAlgebra, images: &[Element]) -> MapSummary {
    let n = from.dim();
    let apply = |v: &Element| combine(v, images, to.dim());
    let mut multiplicative = apply(from.unit()) == *to.unit();
    let mut checked_pairs = 0;
    for i in 0..n {
        for j in 0..n {
            if !from.product_defined(i, j) || !to.product_defined_for(&images[i], &images[j]) {
                continue;
            }
            checked_pairs += 1;
            let lhs = apply(&to_dense(&from.table()[i][j], n));
            if lhs != to.mul(&images[i], &images[j]) {
                multiplicative = false;
            }
        }
    }
    MapSummary { rank: rank(images), kernel: kernel_of(images, to.dim()), multiplicative, checked_pairs }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct QuotientReport {
    /// `dim (G/tG)_k`.
    pub quotient_dims: Vec<usize>,
    /// `dim gr_k A`.
    pub gr_dims: Vec<usize>,
    pub surjective: bool,
    pub kernel_is_t_multiples: bool,
    pub multiplicative: bool,
    pub checked_pairs: usize,
}

impl QuotientReport {
    pub fn is_isomorphism(&self) -> bool {
        self.surjective && self.kernel_is_t_multiples && self.multiplicative
    }
}

/// Compares `G/(t)` with `gr A` through `(k, [u]) ↦ [u] ∈ A_k / A_{k-1}`.
pub fn quotient_by_t(g: &MicroGraded) -> Result<QuotientReport> {
    let gr = associated_graded(&g.filtered)?;
    let images = g.class_map(&gr)?;
    let s = summarize_map(&g.algebra, &gr.algebra, &images);
    let kernel = Subspace::spanned_by(g.dim(), s.kernel.iter().map(|v| to_sparse(v)));
    let tg = g.t_multiples(1);
    let quotient_dims = (0..=g.top_grade())
        .map(|k| {
            let r = g.grade_range(k);
            let in_grade = tg.basis().iter().filter(|v| v.keys().all(|c| r.contains(c))).count();
            debug_assert!(tg.basis().iter().all(|v| v.keys().all(|c| r.contains(c)) || !v.keys().any(|c| r.contains(c))));
            r.len() - in_grade
        })
        .collect();
    Ok(QuotientReport {
        quotient_dims,
        gr_dims: gr.grade_dims(),
        surjective: s.rank == gr.dim(),
        kernel_is_t_multiples: kernel == tg,
        multiplicative: s.multiplicative,
        checked_pairs: s.checked_pairs,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ProjectionReport {
    pub surjective: bool,
    pub multiplicative: bool,
    pub checked_pairs: usize,
    /// Kernel dimension in each grade.
    pub kernel_dims: Vec<usize>,
    /// `dim A_{k-n-1} / A_{k-n-2}` for the target index `n`.
    pub expected_kernel_dims: Vec<usize>,
}

impl ProjectionReport {
    pub fn holds(&self) -> bool {
        self.surjective && self.multiplicative && self.kernel_dims == self.expected_kernel_dims
    }
}

/// The projection `gr_(n+1) A → gr_(n) A`.
pub fn projection_check(upper: &MicroGraded, lower: &MicroGraded) -> Result<ProjectionReport> {
    if upper.n != lower.n + 1 {
        return Err(Error::InvalidPresentation(format!("no projection from gr_({}) to gr_({})", upper.n, lower.n)));
    }
    let images = upper.class_map(lower)?;
    let s = summarize_map(&upper.algebra, &lower.algebra, &images);
    let fa = &upper.filtered;
    let n = lower.n as isize;
    let mut kernel_dims = Vec::new();
    let mut expected_kernel_dims = Vec::new();
    for k in 0..=upper.top_grade() {
        let r = upper.grade_range(k);
        kernel_dims.push(r.len() - rank(&images[r.clone()]));
        let k = k as isize;
        expected_kernel_dims.push(fa.level(k - n - 1).dim() - fa.level(k - n - 2).dim());
    }
    Ok(ProjectionReport {
        surjective: s.rank == lower.dim(),
        multiplicative: s.multiplicative,
        checked_pairs: s.checked_pairs,
        kernel_dims,
        expected_kernel_dims,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct IdealReport {
    /// `dims[k][i] = dim (t^k G)_i` for `k = 0..=n+1`.
    pub dims: Vec<Vec<usize>>,
    /// `t^{n+1} G = 0`.
    pub top_vanishes: bool,
    /// `t^n G ≠ 0`.
    pub last_nonzero: bool,
    /// `t^k G / t^{k+1} G ≅ gr A` shifted by `k`, degreewise.
    pub layers_match_gr: bool,
    /// The layer isomorphisms intertwine the actions of the generators.
    pub module_compatible: bool,
}

impl IdealReport {
    pub fn holds(&self) -> bool {
        self.top_vanishes && self.last_nonzero && self.layers_match_gr && self.module_compatible
    }
}

/// The ideals `I^k = t^k G` and their layers.
pub fn filtration_ideals(g: &MicroGraded) -> Result<(Vec<Subspace>, IdealReport)> {
    let gr = associated_graded(&g.filtered)?;
    let ad = g.filtered.algebra.dim();
    let ideals: Vec<Subspace> = (0..=g.n + 1).map(|k| g.t_multiples(k)).collect();
    let grade_dim = |s: &Subspace, i: usize| {
        let r = g.grade_range(i);
        let vs: Vec<Element> =
            s.basis().iter().map(|v| to_dense(v, g.dim())).map(|v| v[r.clone()].to_vec()).collect();
        rank(&vs)
    };
    let dims: Vec<Vec<usize>> =
        ideals.iter().map(|s| (0..=g.top_grade()).map(|i| grade_dim(s, i)).collect()).collect();
    let gr_dims = gr.grade_dims();
    let mut layers_match_gr = true;
    let mut module_compatible = true;
    for k in 0..=g.n {
        let tk = g.t_power(k);
        // ψ_k : gr_j → (t^k G)_{j+k} / (t^{k+1} G)_{j+k}, [a] ↦ t^k [a]
        let psi: Vec<Element> = (0..gr.dim())
            .map(|e| {
                let j = gr.grades[e];
                let cls = if j > g.top_grade() {
                    Ok(vec![Q::zero(); g.dim()])
                } else {
                    g.class_of(j, &to_dense(&gr.lifts[e], ad))
                };
                cls.map(|c| g.algebra.mul(&tk, &c))
            })
            .collect::<Result<_>>()?;
        for i in 0..=g.top_grade() {
            let expected = if i >= k { gr_dims.get(i - k).copied().unwrap_or(0) } else { 0 };
            if dims[k][i] - dims[k + 1][i] != expected {
                layers_match_gr = false;
            }
        }
        let mut with_next = ideals[k + 1].clone();
        let independent = psi
            .iter()
            .enumerate()
            .filter(|(e, _)| gr.grades[*e] + k <= g.top_grade())
            .all(|(_, v)| with_next.insert(to_sparse(v)));
        if !independent {
            layers_match_gr = false;
        }
        for (_, gen) in g.algebra.generators().iter().filter(|(name, _)| name != "t") {
            let phi = summarize_gen(g, &gr, gen)?;
            for e in 0..gr.dim() {
                let ge = gr.algebra.basis_element(e);
                if !g.algebra.product_defined_for(gen, &psi[e]) || !gr.algebra.product_defined_for(&phi, &ge) {
                    continue;
                }
                let lhs = g.algebra.mul(gen, &psi[e]);
                let rhs = combine(&gr.algebra.mul(&phi, &ge), &psi, g.dim());
                if !ideals[k + 1].contains(&to_sparse(&g.algebra.sub(&lhs, &rhs))) {
                    module_compatible = false;
                }
            }
        }
    }
    let report = IdealReport {
        top_vanishes: ideals[g.n + 1].is_zero(),
        last_nonzero: !ideals[g.n].is_zero(),
        dims,
        layers_match_gr,
        module_compatible,
    };
    Ok((ideals, report))
}

/// Image in `gr A` of a homogeneous element of `G`.
fn summarize_gen(g: &MicroGraded, gr: &MicroGraded, x: &Element) -> Result<Element> {
    let images = g.class_map(gr)?;
    Ok(combine(x, &images, gr.dim()))
}

use std::collections::VecDeque;

use num_traits::{One, Zero};

use super::poly::{NcPoly, Word};
use super::presentation::{Presentation, Rewriter};
use crate::error::{Error, Result};
use crate::linalg::{axpy, solve_affine, to_dense, to_sparse, Echelon, SparseVec, Subspace};
use crate::rational::Q;

/// Dense coordinates in a [`TruncatedAlgebra`] basis.
pub type Element = Vec<Q>;

/// Finite-dimensional algebra given by structure constants.
///
/// Algebras built from presentations carry a length for every basis
/// element. When the presentation is not length-homogeneous, the product of
/// two basis elements is only meaningful when their lengths sum to at most
/// the bound; outside that range the product is truncated to zero and the
/// algebra is flagged as not `honest`.
#[derive(Clone, Debug)]
pub struct TruncatedAlgebra {
    labels: Vec<String>,
    lengths: Vec<usize>,
    bound: usize,
    honest: bool,
    unit: Element,
    table: Vec<Vec<SparseVec>>,
    generators: Vec<(String, Element)>,
    words: Option<Vec<Word>>,
    /// Explicit pattern of defined basis products, overriding lengths.
    defined: Option<Vec<Vec<bool>>>,
}

impl TruncatedAlgebra {
    pub fn from_presentation(pres: &Presentation) -> Result<Self> {
        let rw = Rewriter::new(pres)?;
        if !rw.is_consistent() {
            return Err(Error::InconsistentPresentation(pres.bound));
        }
        Ok(Self::from_rewriter(pres, &rw))
    }

    pub(crate) fn from_rewriter(pres: &Presentation, rw: &Rewriter) -> Self {
        let basis = rw.basis_words();
        let space = rw.space();
        let col_of: std::collections::HashMap<usize, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, w)| (space.index_of(w).expect("basis word in space"), i))
            .collect();
        let to_basis = |v: SparseVec| -> SparseVec {
            v.into_iter().map(|(c, q)| (col_of[&c], q)).collect()
        };
        let n = basis.len();
        let bound = pres.bound;
        let mut table = vec![vec![SparseVec::new(); n]; n];
        for (i, wi) in basis.iter().enumerate() {
            for (j, wj) in basis.iter().enumerate() {
                if wi.len() + wj.len() > bound {
                    continue;
                }
                let w = wi.concat(wj);
                let v = SparseVec::from([(space.index_of(&w).unwrap(), Q::one())]);
                table[i][j] = to_basis(rw.reduce_sparse(v));
            }
        }
        let names = pres.names();
        let reduce_poly = |p: &NcPoly| -> Element {
            let v = space.to_sparse(p).expect("generator within bound");
            to_dense(&to_basis(rw.reduce_sparse(v)), n)
        };
        let generators = (0..pres.ngens())
            .map(|g| (names[g].clone(), reduce_poly(&NcPoly::gen(g))))
            .collect();
        let honest = pres.is_homogeneous() || basis.iter().all(|w| 2 * w.len() <= bound);
        TruncatedAlgebra {
            labels: basis.iter().map(|w| w.fmt_with(&names)).collect(),
            lengths: basis.iter().map(Word::len).collect(),
            bound,
            honest,
            unit: reduce_poly(&NcPoly::one()),
            table,
            generators,
            words: Some(basis),
            defined: None,
        }
    }

    /// Builds an algebra directly from structure constants. Lengths are all
    /// zero and the algebra is honest; the unit law is checked.
    pub fn from_table(
        labels: Vec<String>,
        unit: Element,
        table: Vec<Vec<SparseVec>>,
        generators: Vec<(String, Element)>,
    ) -> Result<Self> {
        let n = labels.len();
        let alg = TruncatedAlgebra {
            lengths: vec![0; n],
            labels,
            bound: 0,
            honest: true,
            unit,
            table,
            generators,
            words: None,
            defined: None,
        };
        if !alg.check_unit() {
            return Err(Error::InvalidPresentation("unit law fails".into()));
        }
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn is_honest(&self) -> bool {
        self.honest
    }

    pub fn unit(&self) -> &Element {
        &self.unit
    }

    pub fn words(&self) -> Option<&[Word]> {
        self.words.as_deref()
    }

    pub fn generators(&self) -> &[(String, Element)] {
        &self.generators
    }

    pub fn generator_images(&self) -> Vec<Element> {
        self.generators.iter().map(|(_, e)| e.clone()).collect()
    }

    pub fn generator(&self, name: &str) -> Result<&Element> {
        self.generators
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn table(&self) -> &[Vec<SparseVec>] {
        &self.table
    }

    pub fn zero(&self) -> Element {
        vec![Q::zero(); self.dim()]
    }

    pub fn basis_element(&self, i: usize) -> Element {
        let mut e = self.zero();
        e[i] = Q::one();
        e
    }

    pub fn scalar(&self, c: &Q) -> Element {
        self.unit.iter().map(|u| u * c).collect()
    }

    /// Builds an algebra whose products are only known on the pairs marked
    /// in `defined`; undefined entries of `table` must be zero.
    pub fn from_partial_table(
        labels: Vec<String>,
        unit: Element,
        table: Vec<Vec<SparseVec>>,
        defined: Vec<Vec<bool>>,
        generators: Vec<(String, Element)>,
    ) -> Result<Self> {
        let n = labels.len();
        let honest = defined.iter().all(|r| r.iter().all(|&d| d));
        let alg = TruncatedAlgebra {
            lengths: vec![0; n],
            labels,
            bound: 0,
            honest,
            unit,
            table,
            generators,
            words: None,
            defined: (!honest).then_some(defined),
        };
        let u = to_sparse(&alg.unit);
        let unit_defined = (0..n).all(|i| u.keys().all(|&k| alg.product_defined(k, i) && alg.product_defined(i, k)));
        if !unit_defined || !alg.check_unit() {
            return Err(Error::InvalidPresentation("unit law fails".into()));
        }
        Ok(alg)
    }

    /// Whether the product of basis elements `i` and `j` is computed exactly.
    pub fn product_defined(&self, i: usize, j: usize) -> bool {
        if self.honest {
            return true;
        }
        match &self.defined {
            Some(d) => d[i][j],
            None => self.lengths[i] + self.lengths[j] <= self.bound,
        }
    }

    /// Whether both bracketings of `b_i b_j b_k` only use defined products.
    pub fn triple_defined(&self, i: usize, j: usize, k: usize) -> bool {
        if self.honest {
            return true;
        }
        match &self.defined {
            Some(_) => {
                self.product_defined(i, j)
                    && self.product_defined(j, k)
                    && self.table[i][j].keys().all(|&l| self.product_defined(l, k))
                    && self.table[j][k].keys().all(|&l| self.product_defined(i, l))
            }
            None => self.lengths[i] + self.lengths[j] + self.lengths[k] <= self.bound,
        }
    }

    /// Whether `a·b` only involves defined basis products.
    pub fn product_defined_for(&self, a: &Element, b: &Element) -> bool {
        self.honest
            || a.iter().enumerate().filter(|(_, x)| !x.is_zero()).all(|(i, _)| {
                b.iter().enumerate().filter(|(_, y)| !y.is_zero()).all(|(j, _)| self.product_defined(i, j))
            })
    }

    pub fn mul_sparse(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, x) in a {
            for (&j, y) in b {
                let xy = x * y;
                axpy(&mut out, &xy, &self.table[i][j]);
            }
        }
        out
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        to_dense(&self.mul_sparse(&to_sparse(a), &to_sparse(b)), self.dim())
    }

    pub fn mul_strict(&self, a: &Element, b: &Element) -> Result<Element> {
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() && !self.product_defined(i, j) {
                    return Err(Error::DegreeOverflow {
                        degree: self.lengths[i] + self.lengths[j],
                        bound: self.bound,
                    });
                }
            }
        }
        Ok(self.mul(a, b))
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn scale(&self, a: &Element, c: &Q) -> Element {
        a.iter().map(|x| x * c).collect()
    }

    pub fn commutator(&self, a: &Element, b: &Element) -> Element {
        self.sub(&self.mul(a, b), &self.mul(b, a))
    }

    pub fn pow(&self, a: &Element, k: usize) -> Element {
        (0..k).fold(self.unit.clone(), |acc, _| self.mul(&acc, a))
    }

    pub fn is_zero(a: &Element) -> bool {
        a.iter().all(Zero::is_zero)
    }

    /// Evaluates a polynomial whose letters are sent to `images`.
    pub fn eval(&self, p: &NcPoly, images: &[Element]) -> Element {
        let mut out = self.zero();
        for (w, c) in p.terms() {
            let mut m = self.scalar(c);
            for &g in w.letters() {
                m = self.mul(&m, &images[g]);
            }
            out = self.add(&out, &m);
        }
        out
    }

    /// Evaluates a polynomial in this algebra's own generators.
    pub fn eval_own(&self, p: &NcPoly) -> Element {
        self.eval(p, &self.generator_images())
    }

    /// Element corresponding to a polynomial in basis-word coordinates,
    /// i.e. the inverse of [`Self::to_poly`].
    pub fn to_poly(&self, a: &Element) -> Option<NcPoly> {
        let words = self.words.as_ref()?;
        Some(NcPoly::from_terms(
            a.iter().zip(words).filter(|(c, _)| !c.is_zero()).map(|(c, w)| (w.clone(), c.clone())),
        ))
    }

    pub fn fmt_element(&self, a: &Element) -> String {
        let parts: Vec<String> = a
            .iter()
            .zip(&self.labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| format!("{}*[{}]", crate::rational::format(c), l))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn check_unit(&self) -> bool {
        (0..self.dim()).all(|i| {
            let e = self.basis_element(i);
            self.mul(&self.unit, &e) == e && self.mul(&e, &self.unit) == e
        })
    }

    /// First basis triple (among the defined ones) violating associativity.
    pub fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !self.triple_defined(i, j, k) {
                        continue;
                    }
                    let left = self.mul_sparse(&self.table[i][j], &SparseVec::from([(k, Q::one())]));
                    let right = self.mul_sparse(&SparseVec::from([(i, Q::one())]), &self.table[j][k]);
                    if left != right {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| !self.product_defined(i, j) || self.table[i][j] == self.table[j][i]))
    }

    /// Span of all products `u·v`, `u ∈ U`, `v ∈ V`.
    pub fn span_products(&self, u: &Subspace, v: &Subspace) -> Subspace {
        let mut out = Subspace::zero(self.dim());
        for a in u.basis() {
            for b in v.basis() {
                out.insert(self.mul_sparse(a, b));
            }
        }
        out
    }

    /// Two-sided ideal generated by a subspace.
    pub fn ideal_generated(&self, x: &Subspace) -> Subspace {
        let n = self.dim();
        let mut out = x.clone();
        let mut queue: VecDeque<SparseVec> = x.basis().iter().cloned().collect();
        while let Some(v) = queue.pop_front() {
            for i in 0..n {
                let e = SparseVec::from([(i, Q::one())]);
                for w in [self.mul_sparse(&e, &v), self.mul_sparse(&v, &e)] {
                    if out.insert(w.clone()) {
                        queue.push_back(w);
                    }
                }
            }
        }
        out
    }

    pub fn is_two_sided_ideal(&self, x: &Subspace) -> bool {
        let n = self.dim();
        x.basis().iter().all(|v| {
            (0..n).all(|i| {
                let e = SparseVec::from([(i, Q::one())]);
                x.contains(&self.mul_sparse(&e, v)) && x.contains(&self.mul_sparse(v, &e))
            })
        })
    }

    /// Quotient by a two-sided ideal. Returns the quotient and the images of
    /// the old basis elements under the canonical surjection.
    pub fn quotient(&self, ideal: &Subspace) -> Result<(TruncatedAlgebra, Vec<Element>)> {
        if !self.is_two_sided_ideal(ideal) {
            return Err(Error::InvalidPresentation("quotient by a non-ideal".into()));
        }
        let keep = ideal.non_pivot_columns();
        let new_index: std::collections::HashMap<usize, usize> =
            keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let m = keep.len();
        let project = |v: &SparseVec| -> Element {
            let r = ideal.reduce(v.clone());
            let mut out = vec![Q::zero(); m];
            for (c, q) in r {
                out[new_index[&c]] = q;
            }
            out
        };
        let unit = project(&to_sparse(&self.unit));
        if unit.iter().all(Zero::is_zero) {
            return Err(Error::InconsistentPresentation(self.bound));
        }
        let table = keep
            .iter()
            .map(|&a| keep.iter().map(|&b| to_sparse(&project(&self.table[a][b]))).collect())
            .collect();
        let images = (0..self.dim()).map(|i| project(&SparseVec::from([(i, Q::one())]))).collect();
        let generators = self.generators.iter().map(|(n, e)| (n.clone(), project(&to_sparse(e)))).collect();
        Ok((
            TruncatedAlgebra {
                labels: keep.iter().map(|&i| self.labels[i].clone()).collect(),
                lengths: keep.iter().map(|&i| self.lengths[i]).collect(),
                bound: self.bound,
                honest: self.honest,
                unit,
                table,
                generators,
                words: self.words.as_ref().map(|w| keep.iter().map(|&i| w[i].clone()).collect()),
                defined: self
                    .defined
                    .as_ref()
                    .map(|d| keep.iter().map(|&a| keep.iter().map(|&b| d[a][b]).collect()).collect()),
            },
            images,
        ))
    }

    /// Direct product `self × other`. Generators are the generators of each
    /// factor (suffixed `_1`/`_2`) and the idempotent `e_1 = (1, 0)`.
    pub fn direct_product(&self, other: &TruncatedAlgebra) -> TruncatedAlgebra {
        let (n, m) = (self.dim(), other.dim());
        let shift = |v: &SparseVec| -> SparseVec { v.iter().map(|(&i, q)| (i + n, q.clone())).collect() };
        let mut table = vec![vec![SparseVec::new(); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                table[i][j] = self.table[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                table[n + i][n + j] = shift(&other.table[i][j]);
            }
        }
        let left = |e: &Element| -> Element {
            let mut v = e.clone();
            v.extend(std::iter::repeat_n(Q::zero(), m));
            v
        };
        let right = |e: &Element| -> Element {
            let mut v = vec![Q::zero(); n];
            v.extend(e.iter().cloned());
            v
        };
        let mut generators: Vec<(String, Element)> =
            self.generators.iter().map(|(s, e)| (format!("{s}_1"), left(e))).collect();
        generators.extend(other.generators.iter().map(|(s, e)| (format!("{s}_2"), right(e))));
        generators.push(("e_1".into(), left(&self.unit)));
        let mut labels: Vec<String> = self.labels.iter().map(|l| format!("({l},0)")).collect();
        labels.extend(other.labels.iter().map(|l| format!("(0,{l})")));
        let mut lengths = self.lengths.clone();
        lengths.extend(other.lengths.iter().copied());
        TruncatedAlgebra {
            labels,
            lengths,
            bound: self.bound.max(other.bound),
            honest: self.honest && other.honest,
            unit: self.add(&left(&self.unit), &right(&other.unit)),
            table,
            generators,
            words: None,
            defined: (self.defined.is_some() || other.defined.is_some()).then(|| {
                (0..n + m)
                    .map(|i| {
                        (0..n + m)
                            .map(|j| match (i < n, j < n) {
                                (true, true) => self.product_defined(i, j),
                                (false, false) => other.product_defined(i - n, j - n),
                                _ => true,
                            })
                            .collect()
                    })
                    .collect()
            }),
        }
    }

    /// Subalgebra spanned by the basis elements in `indices`, which must be
    /// closed under multiplication.
    pub fn restrict_to_basis(&self, indices: &[usize]) -> Result<TruncatedAlgebra> {
        let pos: std::collections::HashMap<usize, usize> =
            indices.iter().enumerate().map(|(n, &o)| (o, n)).collect();
        let map = |v: &SparseVec| -> Option<SparseVec> {
            v.iter().map(|(i, q)| pos.get(i).map(|&n| (n, q.clone()))).collect()
        };
        let mut table = Vec::with_capacity(indices.len());
        for &a in indices {
            let mut row = Vec::with_capacity(indices.len());
            for &b in indices {
                row.push(map(&self.table[a][b]).ok_or_else(|| {
                    Error::InvalidPresentation("basis subset not closed under products".into())
                })?);
            }
            table.push(row);
        }
        let unit = map(&to_sparse(&self.unit))
            .ok_or_else(|| Error::InvalidPresentation("unit outside subalgebra".into()))?;
        Ok(TruncatedAlgebra {
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
            lengths: indices.iter().map(|&i| self.lengths[i]).collect(),
            bound: self.bound,
            honest: self.honest,
            unit: to_dense(&unit, indices.len()),
            table,
            generators: Vec::new(),
            words: self.words.as_ref().map(|w| indices.iter().map(|&i| w[i].clone()).collect()),
            defined: self
                .defined
                .as_ref()
                .map(|d| indices.iter().map(|&a| indices.iter().map(|&b| d[a][b]).collect()).collect()),
        })
    }

    pub fn with_generators(mut self, generators: Vec<(String, Element)>) -> Self {
        self.generators = generators;
        self
    }

    /// Subspace spanned by all products of generators (up to `max_len`
    /// factors, or until the span stabilises).
    pub fn generated_span(&self, images: &[Element]) -> Subspace {
        let mut span = Subspace::zero(self.dim());
        span.insert(to_sparse(&self.unit));
        let mut frontier = vec![self.unit.clone()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for f in &frontier {
                for g in images {
                    let p = self.mul(f, g);
                    if span.insert(to_sparse(&p)) {
                        next.push(p);
                    }
                }
            }
            frontier = next;
        }
        span
    }

    /// The character (algebra map to `Q`) with the given generator values,
    /// as a linear functional on the basis.
    pub fn character_from_generators(&self, values: &[Q]) -> Result<Element> {
        let n = self.dim();
        let gens = self.generator_images();
        if values.len() != gens.len() {
            return Err(Error::NotAMorphism("wrong number of generator values".into()));
        }
        let mut eqs = vec![(to_sparse(&self.unit), Q::one())];
        for (g, v) in gens.iter().zip(values) {
            eqs.push((to_sparse(g), v.clone()));
            for b in 0..n {
                // f(g·b) - v f(b) = 0
                let gb = self.mul(g, &self.basis_element(b));
                let mut row = to_sparse(&gb);
                let e = row.entry(b).or_insert_with(Q::zero);
                *e -= v;
                if e.is_zero() {
                    row.remove(&b);
                }
                eqs.push((row, Q::zero()));
            }
        }
        let sol = solve_affine(&eqs, n);
        let chi = sol.particular.ok_or_else(|| Error::NotAMorphism("no such character".into()))?;
        if sol.nullity != 0 {
            return Err(Error::NotAMorphism("generators do not determine the character".into()));
        }
        if !self.is_character(&chi) {
            return Err(Error::NotAMorphism("values do not define a multiplicative map".into()));
        }
        Ok(chi)
    }

    pub fn apply_functional(f: &Element, a: &Element) -> Q {
        f.iter().zip(a).map(|(x, y)| x * y).sum()
    }

    pub fn is_character(&self, chi: &Element) -> bool {
        let n = self.dim();
        Self::apply_functional(chi, &self.unit).is_one()
            && (0..n).all(|i| {
                (0..n).all(|j| {
                    let prod = Self::apply_functional(chi, &to_dense(&self.table[i][j], n));
                    prod == &chi[i] * &chi[j]
                })
            })
    }

    /// Basis of the space of `χ`-derivations `φ(ab) = χ(a)φ(b) + φ(a)χ(b)`.
    pub fn derivations_at(&self, chi: &Element) -> Vec<Element> {
        let n = self.dim();
        let mut eqs = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut row = self.table[i][j].clone();
                axpy(&mut row, &-chi[i].clone(), &SparseVec::from([(j, Q::one())]));
                axpy(&mut row, &-chi[j].clone(), &SparseVec::from([(i, Q::one())]));
                eqs.push((row, Q::zero()));
            }
        }
        solve_affine(&eqs, n).kernel
    }

    /// Linear map determined by sending generators to `images` in `target`.
    ///
    /// Walks words in the generators until they span `self`, checking that
    /// every linear dependency among source words is respected by the
    /// images. Returns the image of every basis element.
    pub fn linear_map_from_generators(
        &self,
        target: &TruncatedAlgebra,
        images: &[Element],
    ) -> Result<Vec<Element>> {
        let gens = self.generator_images();
        if gens.len() != images.len() {
            return Err(Error::NotAMorphism("generator count mismatch".into()));
        }
        let n = self.dim();
        let mut ech = Echelon::new();
        let mut row_images: Vec<Element> = Vec::new();
        let mut frontier: Vec<(Element, Element)> = vec![(self.unit.clone(), target.unit.clone())];
        let check_or_insert = |ech: &mut Echelon,
                                   row_images: &mut Vec<Element>,
                                   src: &Element,
                                   img: &Element|
         -> Result<bool> {
            let (coeffs, rest) = ech.decompose(to_sparse(src));
            let mut predicted = target.zero();
            for (r, c) in &coeffs {
                predicted = target.add(&predicted, &target.scale(&row_images[*r], c));
            }
            if rest.is_empty() {
                if &predicted != img {
                    return Err(Error::NotAMorphism("images violate a relation".into()));
                }
                return Ok(false);
            }
            let lead = rest.iter().next_back().map(|(_, q)| q.clone()).unwrap();
            // new row = rest / lead ; its image = (img - predicted) / lead
            let inv = lead.recip();
            let normalized: SparseVec = rest.iter().map(|(&c, q)| (c, q * &inv)).collect();
            let diff = target.scale(&target.sub(img, &predicted), &inv);
            ech.insert(normalized);
            row_images.push(diff);
            Ok(true)
        };
        check_or_insert(&mut ech, &mut row_images, &self.unit, &target.unit)?;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (s, t) in &frontier {
                for (g, img) in gens.iter().zip(images) {
                    let s2 = self.mul(s, g);
                    let t2 = target.mul(t, img);
                    if check_or_insert(&mut ech, &mut row_images, &s2, &t2)? {
                        next.push((s2, t2));
                    }
                }
            }
            frontier = next;
        }
        if ech.len() != n {
            return Err(Error::NotAMorphism("generators do not span the source".into()));
        }
        let out: Vec<Element> = (0..n)
            .map(|i| {
                let (coeffs, _) = ech.decompose(SparseVec::from([(i, Q::one())]));
                let mut img = target.zero();
                for (r, c) in coeffs {
                    img = target.add(&img, &target.scale(&row_images[r], &c));
                }
                img
            })
            .collect();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::presentation::build_truncated;

    #[test]
    fn free_one_generator() {
        let a = build_truncated(&Presentation::free(&["x"], 3)).unwrap();
        assert_eq!(a.labels(), &["1", "x", "x*x", "x*x*x"]);
        assert!(a.is_honest());
        assert!(a.check_unit());
        assert!(a.associativity_failure().is_none());
    }

    #[test]
    fn commutative_plane() {
        let p = Presentation::free(&["x", "y"], 2).commutative();
        let a = build_truncated(&p).unwrap();
        assert_eq!(a.dim(), 6);
        assert_eq!(a.labels(), &["1", "x", "y", "x*x", "x*y", "y*y"]);
        assert!(a.is_commutative());
    }

    #[test]
    fn weyl_basis() {
        let x = NcPoly::gen(0);
        let d = NcPoly::gen(1);
        let rel = &(&(&d * &x) - &(&x * &d)) - &NcPoly::one();
        let p = Presentation::new(&[("x", 0), ("d", 1)], vec![rel], 2).unwrap();
        let a = build_truncated(&p).unwrap();
        assert_eq!(a.labels(), &["1", "x", "d", "x*x", "x*d", "d*d"]);
        assert!(!a.is_honest());
        assert!(a.associativity_failure().is_none());
    }

    #[test]
    fn inconsistent_is_an_error() {
        let p = Presentation::new(&[("x", 0)], vec![NcPoly::one()], 2).unwrap();
        assert_eq!(build_truncated(&p).unwrap_err(), Error::InconsistentPresentation(2));
    }

    #[test]
    fn characters_and_linear_maps() {
        let p = Presentation::free(&["x"], 2).nilpotent_truncation();
        let a = build_truncated(&p).unwrap();
        let aug = a.character_from_generators(&[Q::zero()]).unwrap();
        assert!(a.is_character(&aug));
        assert!(a.character_from_generators(&[Q::one()]).is_err());
        let ders = a.derivations_at(&aug);
        assert_eq!(ders.len(), 1);
        let prod = a.direct_product(&a);
        assert_eq!(prod.dim(), 6);
        assert!(prod.associativity_failure().is_none());
        assert_eq!(prod.generated_span(&prod.generator_images()).dim(), 6);
        let id = a.linear_map_from_generators(&a, &a.generator_images()).unwrap();
        assert_eq!(id, (0..3).map(|i| a.basis_element(i)).collect::<Vec<_>>());
    }
}

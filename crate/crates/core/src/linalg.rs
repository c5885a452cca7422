//! Sparse exact linear algebra over the rationals.
//!
//! Rows are kept in echelon form with the pivot at the *largest* column
//! index. Reduction walks columns downward, so callers that order their
//! coordinates by increasing "size" (e.g. words length-then-lex) get normal
//! forms supported on the smallest non-pivot columns.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::rational::Q;

pub type SparseVec = BTreeMap<usize, Q>;

pub fn to_sparse(v: &[Q]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

pub fn to_dense(v: &SparseVec, n: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); n];
    for (&i, c) in v {
        out[i] = c.clone();
    }
    out
}

pub fn axpy(target: &mut SparseVec, coef: &Q, x: &SparseVec) {
    for (&j, a) in x {
        let entry = target.entry(j).or_insert_with(Q::zero);
        *entry += coef * a;
        if entry.is_zero() {
            target.remove(&j);
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivots: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    pub fn pivot_of_row(&self, row: usize) -> usize {
        *self.rows[row].keys().next_back().expect("rows are nonzero")
    }

    /// Splits `v` into row coefficients and the fully reduced remainder.
    pub fn decompose(&self, mut v: SparseVec) -> (Vec<(usize, Q)>, SparseVec) {
        let mut coeffs = Vec::new();
        let mut rest = SparseVec::new();
        while let Some((c, coef)) = v.pop_last() {
            match self.pivots.get(&c) {
                Some(&r) => {
                    for (&j, a) in &self.rows[r] {
                        if j == c {
                            continue;
                        }
                        let e = v.entry(j).or_insert_with(Q::zero);
                        *e -= &coef * a;
                        if e.is_zero() {
                            v.remove(&j);
                        }
                    }
                    coeffs.push((r, coef));
                }
                None => {
                    rest.insert(c, coef);
                }
            }
        }
        (coeffs, rest)
    }

    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        self.decompose(v).1
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Inserts `v`; returns the new row index when it was independent.
    pub fn insert(&mut self, v: SparseVec) -> Option<usize> {
        let mut r = self.reduce(v);
        let (&p, lead) = r.iter().next_back()?;
        if !lead.is_one() {
            let inv = lead.recip();
            for c in r.values_mut() {
                *c *= &inv;
            }
        }
        self.rows.push(r);
        self.pivots.insert(p, self.rows.len() - 1);
        Some(self.rows.len() - 1)
    }

    /// Fully reduced rows sorted by pivot: a canonical basis of the span.
    pub fn canonical_rows(&self) -> Vec<SparseVec> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.pivot_of_row(r));
        let mut out = Vec::with_capacity(order.len());
        for &r in &order {
            let p = self.pivot_of_row(r);
            let mut row = self.rows[r].clone();
            row.remove(&p);
            let mut reduced = self.reduce(row);
            reduced.insert(p, Q::one());
            out.push(reduced);
        }
        out
    }
}

/// A subspace of `Q^ambient` held in canonical echelon form.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    echelon: Echelon,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient
            && self.dim() == other.dim()
            && self.echelon.canonical_rows() == other.echelon.canonical_rows()
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, echelon: Echelon::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let mut s = Self::zero(ambient);
        for i in 0..ambient {
            s.insert(SparseVec::from([(i, Q::one())]));
        }
        s
    }

    pub fn spanned_by<I: IntoIterator<Item = SparseVec>>(ambient: usize, vs: I) -> Self {
        let mut s = Self::zero(ambient);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn insert(&mut self, v: SparseVec) -> bool {
        debug_assert!(v.keys().all(|&k| k < self.ambient));
        self.echelon.insert(v).is_some()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.echelon.len()
    }

    pub fn is_zero(&self) -> bool {
        self.echelon.is_empty()
    }

    pub fn basis(&self) -> &[SparseVec] {
        self.echelon.rows()
    }

    pub fn canonical_basis(&self) -> Vec<SparseVec> {
        self.echelon.canonical_rows()
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.echelon.contains(v)
    }

    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        self.echelon.reduce(v)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis().iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in other.basis() {
            s.insert(v.clone());
        }
        s
    }

    /// Columns not hit by any pivot; they index a complement basis.
    pub fn non_pivot_columns(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.echelon.is_pivot(*c)).collect()
    }
}

/// Solution summary of an affine system `Σ a_j x_j = b`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolution {
    pub particular: Option<Vec<Q>>,
    pub nullity: usize,
    pub kernel: Vec<Vec<Q>>,
}

impl AffineSolution {
    pub fn exists(&self) -> bool {
        self.particular.is_some()
    }
}

/// Solves a sparse affine system in `nvars` unknowns. Each equation is
/// `(coefficients, rhs)`.
pub fn solve_affine(equations: &[(SparseVec, Q)], nvars: usize) -> AffineSolution {
    // column 0 carries the constant, unknown j lives in column j + 1
    let mut ech = Echelon::new();
    for (coeffs, rhs) in equations {
        let mut row: SparseVec = coeffs.iter().map(|(&j, a)| (j + 1, a.clone())).collect();
        if !rhs.is_zero() {
            row.insert(0, -rhs.clone());
        }
        if ech.insert(row).is_some() && ech.is_pivot(0) {
            return AffineSolution { particular: None, nullity: 0, kernel: Vec::new() };
        }
    }
    let rank = ech.len();
    let back_substitute = |ech: &Echelon, constant: bool, free: Option<usize>| -> Vec<Q> {
        let mut x = vec![Q::zero(); nvars];
        if let Some(f) = free {
            x[f] = Q::one();
        }
        let mut order: Vec<usize> = (0..ech.len()).collect();
        order.sort_by_key(|&r| ech.pivot_of_row(r));
        for r in order {
            let p = ech.pivot_of_row(r);
            let mut acc = Q::zero();
            for (&j, a) in &ech.rows()[r] {
                if j == p {
                    continue;
                }
                if j == 0 {
                    if constant {
                        acc += a;
                    }
                } else {
                    acc += a * &x[j - 1];
                }
            }
            x[p - 1] = -acc;
        }
        x
    };
    let particular = back_substitute(&ech, true, None);
    let kernel = (0..nvars)
        .filter(|&j| !ech.is_pivot(j + 1))
        .map(|f| back_substitute(&ech, false, Some(f)))
        .collect();
    AffineSolution { particular: Some(particular), nullity: nvars - rank, kernel }
}

/// Rank of a list of dense vectors.
pub fn rank(vs: &[Vec<Q>]) -> usize {
    let mut e = Echelon::new();
    vs.iter().filter(|v| e.insert(to_sparse(v)).is_some()).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn sv(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(i, c)| (i, int(c))).collect()
    }

    #[test]
    fn reduce_lands_on_non_pivots() {
        let mut e = Echelon::new();
        e.insert(sv(&[(0, 1), (2, 1)]));
        let r = e.reduce(sv(&[(2, 3), (1, 1)]));
        assert_eq!(r, sv(&[(0, -3), (1, 1)]));
    }

    #[test]
    fn subspace_equality_is_basis_independent() {
        let a = Subspace::spanned_by(3, [sv(&[(0, 1), (1, 1)]), sv(&[(1, 1)])]);
        let b = Subspace::spanned_by(3, [sv(&[(0, 2)]), sv(&[(0, 1), (1, -1)])]);
        assert_eq!(a, b);
        assert_ne!(a, Subspace::full(3));
        assert_eq!(a.non_pivot_columns(), vec![2]);
    }

    #[test]
    fn affine_system() {
        // x + y = 1, x - y = 0
        let eqs = vec![(sv(&[(0, 1), (1, 1)]), int(1)), (sv(&[(0, 1), (1, -1)]), int(0))];
        let s = solve_affine(&eqs, 2);
        assert_eq!(s.particular, Some(vec![frac(1, 2), frac(1, 2)]));
        assert_eq!(s.nullity, 0);

        let s = solve_affine(&[(sv(&[(0, 1)]), int(1))], 3);
        assert_eq!(s.nullity, 2);
        assert_eq!(s.kernel.len(), 2);

        let s = solve_affine(&[(sv(&[(0, 1)]), int(1)), (sv(&[(0, 1)]), int(2))], 1);
        assert!(!s.exists());
    }
}

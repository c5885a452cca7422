//! Lower central series and the NC-filtration `F^d`.
//!
//! `F^d = Σ R·R_{i_1}·R ⋯ R·R_{i_m}·R` over compositions of `d` into
//! positive parts. Since `R·R = R`, each summand is a product of the ideals
//! `I_k = (R_k)`, so `F^d = Σ_{k=1}^{d} I_k · G(d-k)` with `G(0) = R`.

use num_traits::One;

use super::algebra::TruncatedAlgebra;
use super::presentation::Presentation;
use crate::error::Result;
use crate::linalg::{to_dense, SparseVec, Subspace};
use crate::rational::Q;

/// `R_0 = R`, `R_{i+1} = [R, R_i]`.
pub fn lcs_term(alg: &TruncatedAlgebra, i: usize) -> Subspace {
    lcs_terms(alg, i).pop().expect("at least R_0")
}

fn lcs_terms(alg: &TruncatedAlgebra, upto: usize) -> Vec<Subspace> {
    let n = alg.dim();
    let mut terms = vec![Subspace::full(n)];
    for _ in 0..upto {
        let prev = terms.last().unwrap();
        let mut next = Subspace::zero(n);
        for a in 0..n {
            let e = SparseVec::from([(a, Q::one())]);
            for s in prev.basis() {
                let mut c = alg.mul_sparse(&e, s);
                crate::linalg::axpy(&mut c, &-Q::one(), &alg.mul_sparse(s, &e));
                next.insert(c);
            }
        }
        terms.push(next);
    }
    terms
}

/// All filtration levels `F^0 ⊇ F^1 ⊇ … ⊇ F^max` of an algebra.
#[derive(Clone, Debug)]
pub struct NcFiltration {
    levels: Vec<Subspace>,
}

impl NcFiltration {
    pub fn new(alg: &TruncatedAlgebra, max_d: usize) -> Self {
        let n = alg.dim();
        let lcs = lcs_terms(alg, max_d);
        let ideals: Vec<Subspace> = lcs.iter().map(|r| alg.ideal_generated(r)).collect();
        // g[k] = sum over compositions of k of products of ideals; g[0] = R
        let mut g: Vec<Subspace> = vec![Subspace::full(n)];
        for d in 1..=max_d {
            let mut acc = Subspace::zero(n);
            for k in 1..=d {
                if ideals[k].is_zero() || g[d - k].is_zero() {
                    continue;
                }
                let prod = if d == k { ideals[k].clone() } else { alg.span_products(&ideals[k], &g[d - k]) };
                acc = acc.sum(&prod);
            }
            g.push(acc);
        }
        NcFiltration { levels: g }
    }

    /// `F^d`; zero past the computed range is not assumed, so `d` must be
    /// within it.
    pub fn level(&self, d: usize) -> &Subspace {
        &self.levels[d]
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(Subspace::dim).collect()
    }

    pub fn is_decreasing(&self) -> bool {
        self.levels.windows(2).all(|w| w[1].is_subspace_of(&w[0]))
    }

    /// Checks `F^i · F^j ⊆ F^{i+j}` for all `i + j` within range.
    pub fn multiplicativity_failure(&self, alg: &TruncatedAlgebra) -> Option<(usize, usize)> {
        let top = self.max_level();
        for i in 0..=top {
            for j in 0..=top - i {
                let prod = alg.span_products(&self.levels[i], &self.levels[j]);
                if !prod.is_subspace_of(&self.levels[i + j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

pub fn nc_filtration(alg: &TruncatedAlgebra, d: usize) -> Subspace {
    NcFiltration::new(alg, d).level(d).clone()
}

/// `r_d(R) = R / F^{d+1} R`, the largest quotient lying in `N_d`.
/// Fails with `InconsistentPresentation` when `F^{d+1} = R`, e.g. for the
/// Weyl algebra, whose unit is a commutator.
pub fn quotient_rd(alg: &TruncatedAlgebra, d: usize) -> Result<TruncatedAlgebra> {
    let f = nc_filtration(alg, d + 1);
    alg.quotient(&f).map(|q| q.0)
}

/// Presentation of `r_d` obtained by adding a basis of `F^{d+1}` (as
/// polynomials) to the relations of `pres`.
pub fn rd_presentation(pres: &Presentation, d: usize) -> Result<Presentation> {
    let alg = TruncatedAlgebra::from_presentation(pres)?;
    let f = nc_filtration(&alg, d + 1);
    let mut out = pres.clone();
    for v in f.canonical_basis() {
        let poly = alg.to_poly(&to_dense(&v, alg.dim())).expect("presented algebras carry words");
        out.relations.push(poly);
    }
    Ok(out)
}

/// Abelianization `r_0`.
pub fn abelianization(alg: &TruncatedAlgebra) -> Result<TruncatedAlgebra> {
    quotient_rd(alg, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::poly::NcPoly;
    use crate::ncalg::presentation::{build_truncated, Presentation};

    fn free2(bound: usize) -> TruncatedAlgebra {
        build_truncated(&Presentation::free(&["x", "y"], bound)).unwrap()
    }

    #[test]
    fn commutative_has_trivial_filtration() {
        let a = build_truncated(&Presentation::free(&["x", "y"], 3).commutative()).unwrap();
        assert!(lcs_term(&a, 1).is_zero());
        assert!(nc_filtration(&a, 1).is_zero());
        assert_eq!(lcs_term(&a, 0).dim(), a.dim());
        assert_eq!(quotient_rd(&a, 2).unwrap().dim(), a.dim());
    }

    #[test]
    fn free_lcs_degree_two() {
        let a = free2(2);
        let r1 = lcs_term(&a, 1);
        assert_eq!(r1.dim(), 1);
        let xy = a.eval_own(&(&NcPoly::gen(0) * &NcPoly::gen(1)));
        let yx = a.eval_own(&(&NcPoly::gen(1) * &NcPoly::gen(0)));
        assert!(r1.contains(&crate::linalg::to_sparse(&a.sub(&xy, &yx))));
    }

    #[test]
    fn rd_lands_in_nd_and_is_idempotent() {
        let a = free2(3);
        let r0 = quotient_rd(&a, 0).unwrap();
        assert!(r0.is_commutative());
        assert_eq!(r0.dim(), 10);
        let r1 = quotient_rd(&a, 1).unwrap();
        assert!(nc_filtration(&r1, 2).is_zero());
        assert_eq!(quotient_rd(&r1, 1).unwrap().dim(), r1.dim());
        assert_eq!(quotient_rd(&r1, 0).unwrap().dim(), r0.dim());
        let p = rd_presentation(&Presentation::free(&["x", "y"], 3), 1).unwrap();
        assert!(p.is_homogeneous());
        assert_eq!(build_truncated(&p).unwrap().dim(), r1.dim());
    }

    #[test]
    fn filtration_beyond_bound_vanishes() {
        let a = free2(2);
        let f = NcFiltration::new(&a, 3);
        assert!(f.level(3).is_zero());
        assert!(f.is_decreasing());
        assert!(f.multiplicativity_failure(&a).is_none());
    }
}

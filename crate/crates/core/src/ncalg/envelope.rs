//! Enveloping algebras of Lie algebroids given by generators over a
//! commutative base, with optional central-extension cocycle.

use std::collections::BTreeMap;

use num_traits::One;

use super::algebra::TruncatedAlgebra;
use super::poly::{NcPoly, Word};
use super::presentation::{Generator, Presentation, Rewriter};
use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::rational::Q;

/// Bracket of two algebroid generators: `O`-linear combination of the
/// generators plus a scalar-valued (in `O`) cocycle part.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct BracketEntry {
    pub coeffs: Vec<NcPoly>,
    pub cocycle: NcPoly,
}

#[derive(Clone, Debug)]
pub struct LieAlgebroidPresentation {
    /// Coordinate ring of the base; commutativity is imposed automatically.
    pub base: Presentation,
    pub l_names: Vec<String>,
    /// `anchor[i][j] = σ(ℓ_i)(x_j)` as a polynomial in the base generators.
    pub anchor: Vec<Vec<NcPoly>>,
    /// `[ℓ_i, ℓ_j]` for `i < j`; missing pairs bracket to zero.
    pub bracket: BTreeMap<(usize, usize), BracketEntry>,
}

#[derive(Clone, Debug, PartialEq)]
struct AlgebroidElement {
    coeffs: Vec<NcPoly>,
    central: NcPoly,
}

impl LieAlgebroidPresentation {
    /// Tangent algebroid of the line: `σ(d)(x) = 1`; `U°` is the Weyl algebra.
    pub fn weyl(bound: usize) -> Self {
        LieAlgebroidPresentation {
            base: Presentation::free(&["x"], bound),
            l_names: vec!["d".into()],
            anchor: vec![vec![NcPoly::one()]],
            bracket: BTreeMap::new(),
        }
    }

    /// Abelian rank-2 algebra over a point with cocycle `ω(p, q) = 1`.
    pub fn heisenberg(bound: usize) -> Self {
        LieAlgebroidPresentation {
            base: Presentation::free(&[], bound),
            l_names: vec!["p".into(), "q".into()],
            anchor: vec![vec![], vec![]],
            bracket: BTreeMap::from([((0, 1), BracketEntry { coeffs: vec![], cocycle: NcPoly::one() })]),
        }
    }

    pub fn rank(&self) -> usize {
        self.l_names.len()
    }

    fn base_rewriter(&self) -> Result<Rewriter> {
        Rewriter::new(&self.base.commutative())
    }

    fn bracket_of(&self, i: usize, j: usize) -> AlgebroidElement {
        let r = self.rank();
        let zero = AlgebroidElement { coeffs: vec![NcPoly::zero(); r], central: NcPoly::zero() };
        if i == j {
            return zero;
        }
        let (a, b, sign) = if i < j { (i, j, Q::one()) } else { (j, i, -Q::one()) };
        match self.bracket.get(&(a, b)) {
            None => zero,
            Some(e) => AlgebroidElement {
                coeffs: (0..r)
                    .map(|k| e.coeffs.get(k).cloned().unwrap_or_default().scale(&sign))
                    .collect(),
                central: e.cocycle.scale(&sign),
            },
        }
    }

    /// `σ(ℓ_i)` applied to a base polynomial, as a derivation.
    fn anchor_apply(&self, i: usize, p: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, c) in p.terms() {
            let letters = w.letters();
            for (pos, &g) in letters.iter().enumerate() {
                let left = NcPoly::monomial(Word(letters[..pos].to_vec()), c.clone());
                let right = NcPoly::monomial(Word(letters[pos + 1..].to_vec()), Q::one());
                out = &out + &(&(&left * &self.anchor[i][g]) * &right);
            }
        }
        out
    }

    fn reduce(&self, rw: &Rewriter, p: &NcPoly) -> NcPoly {
        rw.normal_form(&p.truncate(self.base.bound)).expect("truncated within bound")
    }

    /// Bracket in the central extension `L̃` (the central generator is `c`).
    fn bracket_elements(&self, rw: &Rewriter, x: &AlgebroidElement, y: &AlgebroidElement) -> AlgebroidElement {
        let r = self.rank();
        let mut coeffs = vec![NcPoly::zero(); r];
        let mut central = NcPoly::zero();
        for a in 0..r {
            if x.coeffs[a].is_zero() {
                continue;
            }
            for b in 0..r {
                if y.coeffs[b].is_zero() {
                    continue;
                }
                let (f, g) = (&x.coeffs[a], &y.coeffs[b]);
                let fg = f * g;
                let br = self.bracket_of(a, b);
                for k in 0..r {
                    coeffs[k] = &coeffs[k] + &(&fg * &br.coeffs[k]);
                }
                central = &central + &(&fg * &br.central);
                // f σ_a(g) ℓ_b - g σ_b(f) ℓ_a
                coeffs[b] = &coeffs[b] + &(f * &self.anchor_apply(a, g));
                coeffs[a] = &coeffs[a] - &(g * &self.anchor_apply(b, f));
            }
            central = &central + &(&x.coeffs[a] * &self.anchor_apply(a, &y.central));
        }
        for b in 0..r {
            central = &central - &(&y.coeffs[b] * &self.anchor_apply(b, &x.central));
        }
        AlgebroidElement {
            coeffs: coeffs.iter().map(|p| self.reduce(rw, p)).collect(),
            central: self.reduce(rw, &central),
        }
    }

    fn unit_vector(&self, i: usize) -> AlgebroidElement {
        let mut coeffs = vec![NcPoly::zero(); self.rank()];
        coeffs[i] = NcPoly::one();
        AlgebroidElement { coeffs, central: NcPoly::zero() }
    }

    /// Checks the Jacobi identity on generator triples, antisymmetry, that
    /// the anchor preserves base relations, and that the anchor is a Lie
    /// homomorphism on base generators.
    pub fn validate(&self) -> Result<()> {
        let r = self.rank();
        let nb = self.base.ngens();
        if self.anchor.len() != r || self.anchor.iter().any(|row| row.len() != nb) {
            return Err(Error::InvalidPresentation("anchor table has wrong shape".into()));
        }
        if self.bracket.keys().any(|&(i, j)| i >= j || j >= r) {
            return Err(Error::InvalidPresentation("bracket table must list pairs i < j".into()));
        }
        let rw = self.base_rewriter()?;
        for rel in &self.base.relations {
            for i in 0..r {
                if !self.reduce(&rw, &self.anchor_apply(i, rel)).is_zero() {
                    return Err(Error::InvalidPresentation(format!(
                        "anchor of {} does not preserve base relations",
                        self.l_names[i]
                    )));
                }
            }
        }
        for i in 0..r {
            for j in 0..r {
                let br = self.bracket_of(i, j);
                for x in 0..nb {
                    let lhs = &self.anchor_apply(i, &self.anchor[j][x]) - &self.anchor_apply(j, &self.anchor[i][x]);
                    let mut rhs = NcPoly::zero();
                    for k in 0..r {
                        rhs = &rhs + &(&br.coeffs[k] * &self.anchor[k][x]);
                    }
                    if !self.reduce(&rw, &(&lhs - &rhs)).is_zero() {
                        return Err(Error::InvalidPresentation(format!(
                            "anchor is not a Lie homomorphism on ({}, {})",
                            self.l_names[i], self.l_names[j]
                        )));
                    }
                }
            }
        }
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let e = |a: usize| self.unit_vector(a);
                    let t1 = self.bracket_elements(&rw, &e(i), &self.bracket_elements(&rw, &e(j), &e(k)));
                    let t2 = self.bracket_elements(&rw, &e(j), &self.bracket_elements(&rw, &e(k), &e(i)));
                    let t3 = self.bracket_elements(&rw, &e(k), &self.bracket_elements(&rw, &e(i), &e(j)));
                    let vanishes = (0..r).all(|a| {
                        self.reduce(&rw, &(&(&t1.coeffs[a] + &t2.coeffs[a]) + &t3.coeffs[a])).is_zero()
                    }) && self.reduce(&rw, &(&(&t1.central + &t2.central) + &t3.central)).is_zero();
                    if !vanishes {
                        return Err(Error::JacobiFailure(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Presentation of `U°(L̃)`: base generators (weight 0) followed by the
/// algebroid generators (weight 1), with the central element identified
/// with `1`.
pub fn enveloping_presentation(lp: &LieAlgebroidPresentation) -> Result<Presentation> {
    lp.validate()?;
    let nb = lp.base.ngens();
    let r = lp.rank();
    let mut generators = lp.base.generators.iter().map(|g| Generator { name: g.name.clone(), weight: 0 }).collect::<Vec<_>>();
    generators.extend(lp.l_names.iter().map(|n| Generator { name: n.clone(), weight: 1 }));
    let l = |i: usize| NcPoly::gen(nb + i);
    let mut relations = lp.base.commutative().relations;
    for i in 0..r {
        for x in 0..nb {
            relations.push(&l(i).commutator(&NcPoly::gen(x)) - &lp.anchor[i][x]);
        }
    }
    for i in 0..r {
        for j in i + 1..r {
            let br = lp.bracket_of(i, j);
            let mut rel = l(j).commutator(&l(i));
            // written as ℓ_j ℓ_i - ℓ_i ℓ_j + Σ f_k ℓ_k + ω so that the leading word is ℓ_j ℓ_i
            for k in 0..r {
                rel = &rel + &(&br.coeffs[k] * &l(k));
            }
            rel = &rel + &br.central;
            relations.push(rel);
        }
    }
    let bound = lp.base.bound.max(relations.iter().filter_map(NcPoly::degree).max().unwrap_or(0));
    Ok(Presentation { name: lp.base.name.clone(), generators, relations, bound })
}

/// Subspaces `A_i` spanned by normal forms of all words of weight `≤ i`.
pub fn weight_filtration(pres: &Presentation, alg: &TruncatedAlgebra) -> Result<Vec<Subspace>> {
    let rw = Rewriter::new(pres)?;
    let weights = pres.weights();
    let space = rw.space();
    let max_w = space.words().iter().map(|w| w.weight(&weights)).max().unwrap_or(0) as usize;
    let n = alg.dim();
    let mut levels = vec![Subspace::zero(n); max_w + 1];
    for w in space.words() {
        let nf = rw.normal_form(&NcPoly::monomial(w.clone(), Q::one()))?;
        let v = crate::linalg::to_sparse(&alg.eval_own(&nf));
        let wt = w.weight(&weights) as usize;
        for level in levels.iter_mut().skip(wt) {
            level.insert(v.clone());
        }
    }
    Ok(levels)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PbwReport {
    pub gr_dims: Vec<usize>,
    pub sym_dims: Vec<usize>,
    pub first_failure: Option<usize>,
}

impl PbwReport {
    pub fn matches(&self) -> bool {
        self.first_failure.is_none()
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Compares `dim gr_i U°(L̃)` with `dim Sym^i L ⊗ O` for `i ≤ bound`, both
/// truncated at total degree `bound`.
pub fn pbw_dimension_check(lp: &LieAlgebroidPresentation, bound: usize) -> Result<PbwReport> {
    let mut lp = lp.clone();
    lp.base.bound = bound;
    let pres = enveloping_presentation(&lp)?;
    let pres = Presentation { bound, ..pres };
    let alg = TruncatedAlgebra::from_presentation(&pres)?;
    let levels = weight_filtration(&pres, &alg)?;
    let gr_dims: Vec<usize> = (0..=bound)
        .map(|i| {
            let cur = levels.get(i).or(levels.last()).map_or(0, Subspace::dim);
            let prev = if i == 0 { 0 } else { levels.get(i - 1).or(levels.last()).map_or(0, Subspace::dim) };
            cur - prev
        })
        .collect();
    let r = lp.rank();
    let sym_dims: Vec<usize> = (0..=bound)
        .map(|i| {
            let sym = if r == 0 { usize::from(i == 0) } else { binomial(r + i - 1, i) };
            let base_dim = if bound - i == 0 {
                1
            } else {
                let base = Presentation { bound: bound - i, ..lp.base.commutative() };
                TruncatedAlgebra::from_presentation(&base).map(|a| a.dim()).unwrap_or(0)
            };
            sym * base_dim
        })
        .collect();
    let first_failure = (0..=bound).find(|&i| gr_dims[i] != sym_dims[i]);
    Ok(PbwReport { gr_dims, sym_dims, first_failure })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::int;

    pub(crate) fn weyl_algebroid(bound: usize) -> LieAlgebroidPresentation {
        LieAlgebroidPresentation::weyl(bound)
    }

    pub(crate) fn heisenberg_algebroid(bound: usize) -> LieAlgebroidPresentation {
        LieAlgebroidPresentation::heisenberg(bound)
    }

    #[test]
    fn weyl_relations() {
        let p = enveloping_presentation(&weyl_algebroid(3)).unwrap();
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.relations[0].fmt_with(&p.names()), "d*x - x*d - 1");
        let rep = pbw_dimension_check(&weyl_algebroid(3), 3).unwrap();
        assert_eq!(rep.gr_dims, vec![4, 3, 2, 1]);
        assert!(rep.matches());
    }

    #[test]
    fn heisenberg_relation() {
        let p = enveloping_presentation(&heisenberg_algebroid(2)).unwrap();
        assert_eq!(p.relations[0].fmt_with(&p.names()), "q*p - p*q + 1");
        let rep = pbw_dimension_check(&heisenberg_algebroid(2), 2).unwrap();
        assert_eq!(rep.gr_dims, vec![1, 2, 3]);
        assert!(rep.matches());
    }

    #[test]
    fn abelian_rank_one_over_point_is_polynomial() {
        let lp = LieAlgebroidPresentation {
            base: Presentation::free(&[], 3),
            l_names: vec!["l".into()],
            anchor: vec![vec![]],
            bracket: BTreeMap::new(),
        };
        let p = enveloping_presentation(&lp).unwrap();
        assert!(p.relations.is_empty());
        let a = TruncatedAlgebra::from_presentation(&p).unwrap();
        assert_eq!(a.dim(), 4);
    }

    #[test]
    fn zero_algebroid_is_base() {
        let lp = LieAlgebroidPresentation {
            base: Presentation::free(&["x"], 2),
            l_names: vec![],
            anchor: vec![],
            bracket: BTreeMap::new(),
        };
        let rep = pbw_dimension_check(&lp, 2).unwrap();
        assert_eq!(rep.gr_dims, vec![3, 0, 0]);
        assert!(rep.matches());
    }

    #[test]
    fn jacobi_failure_is_reported() {
        // sl2-like brackets with a broken structure constant
        let mk = |c: &[i64]| c.iter().map(|&v| NcPoly::constant(int(v))).collect::<Vec<_>>();
        let lp = LieAlgebroidPresentation {
            base: Presentation::free(&[], 3),
            l_names: vec!["e".into(), "f".into(), "h".into()],
            anchor: vec![vec![], vec![], vec![]],
            bracket: BTreeMap::from([
                ((0, 1), BracketEntry { coeffs: mk(&[0, 0, 1]), cocycle: NcPoly::zero() }),
                ((0, 2), BracketEntry { coeffs: mk(&[-2, 0, 0]), cocycle: NcPoly::zero() }),
                ((1, 2), BracketEntry { coeffs: mk(&[0, 3, 0]), cocycle: NcPoly::zero() }),
            ]),
        };
        assert!(matches!(enveloping_presentation(&lp), Err(Error::JacobiFailure(..))));
        let mut ok = lp.clone();
        ok.bracket.get_mut(&(1, 2)).unwrap().coeffs = mk(&[0, 2, 0]);
        assert!(enveloping_presentation(&ok).is_ok());
    }
}

use std::collections::HashMap;

use num_traits::One;

use super::algebra::TruncatedAlgebra;
use super::poly::{NcPoly, Word};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    /// Filtration weight, used by the microlocal constructions.
    pub weight: u32,
}

/// Finitely presented associative algebra, truncated at total degree `bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub name: Option<String>,
    pub generators: Vec<Generator>,
    pub relations: Vec<NcPoly>,
    pub bound: usize,
}

impl Presentation {
    pub fn new(gens: &[(&str, u32)], relations: Vec<NcPoly>, bound: usize) -> Result<Self> {
        let p = Presentation {
            name: None,
            generators: gens
                .iter()
                .map(|&(n, w)| Generator { name: n.to_string(), weight: w })
                .collect(),
            relations,
            bound,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn free(names: &[&str], bound: usize) -> Self {
        Presentation {
            name: None,
            generators: names.iter().map(|n| Generator { name: n.to_string(), weight: 0 }).collect(),
            relations: Vec::new(),
            bound,
        }
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn weights(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.weight).collect()
    }

    pub fn gen_index(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn gen(&self, name: &str) -> Result<NcPoly> {
        self.gen_index(name).map(NcPoly::gen)
    }

    pub fn validate(&self) -> Result<()> {
        if self.bound == 0 {
            return Err(Error::InvalidPresentation("degree bound must be positive".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for g in &self.generators {
            if !seen.insert(g.name.as_str()) {
                return Err(Error::InvalidPresentation(format!("duplicate generator `{}`", g.name)));
            }
        }
        for r in &self.relations {
            if let Some(m) = r.max_letter() {
                if m >= self.ngens() {
                    return Err(Error::InvalidPresentation(format!(
                        "relation uses undeclared generator index {m}"
                    )));
                }
            }
            if r.degree().unwrap_or(0) > self.bound {
                return Err(Error::InvalidPresentation(format!(
                    "relation of degree {} exceeds bound {}",
                    r.degree().unwrap_or(0),
                    self.bound
                )));
            }
        }
        Ok(())
    }

    /// True when every relation is homogeneous in word length; truncation
    /// at the bound is then an honest algebra quotient.
    pub fn is_homogeneous(&self) -> bool {
        self.relations.iter().all(|r| {
            let mut lens = r.terms().map(|(w, _)| w.len());
            match lens.next() {
                Some(l) => lens.all(|m| m == l),
                None => true,
            }
        })
    }

    /// Adds `g*h - h*g` for every generator pair.
    pub fn commutative(&self) -> Presentation {
        let mut p = self.clone();
        let n = self.ngens();
        for a in 0..n {
            for b in a + 1..n {
                p.relations.push(NcPoly::gen(b).commutator(&NcPoly::gen(a)));
            }
        }
        p
    }

    /// Kills every word longer than the bound by adding all words of
    /// length `bound + 1` as relations. The resulting truncation is honest.
    pub fn nilpotent_truncation(&self) -> Presentation {
        let mut p = self.clone();
        let top = self.bound + 1;
        p.relations
            .extend(Word::all_of_length(self.ngens(), top).into_iter().map(|w| NcPoly::monomial(w, Q::one())));
        p.bound = top;
        p
    }

    /// Canonical DSL text of this presentation.
    pub fn to_dsl(&self) -> String {
        let names = self.names();
        let mut s = String::new();
        if let Some(n) = &self.name {
            s.push_str(&format!("algebra {n};\n"));
        }
        let gens: Vec<String> = self.generators.iter().map(|g| format!("{}:{}", g.name, g.weight)).collect();
        s.push_str(&format!("gens {};\n", gens.join(", ")));
        for r in &self.relations {
            s.push_str(&format!("rel {};\n", r.fmt_with(&names)));
        }
        s.push_str(&format!("bound {};\n", self.bound));
        s
    }
}

/// All words of length at most `bound`, indexed in length-then-lex order.
#[derive(Clone, Debug)]
pub struct WordSpace {
    ngens: usize,
    bound: usize,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
}

impl WordSpace {
    pub fn new(ngens: usize, bound: usize) -> Self {
        let words: Vec<Word> = (0..=bound).flat_map(|l| Word::all_of_length(ngens, l)).collect();
        let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        WordSpace { ngens, bound, words, index }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn words_of_length(&self, len: usize) -> &[Word] {
        let start: usize = (0..len).map(|l| self.ngens.pow(l as u32)).sum();
        let count = self.ngens.pow(len as u32);
        &self.words[start..start + count]
    }

    pub fn to_sparse(&self, p: &NcPoly) -> Result<SparseVec> {
        let mut v = SparseVec::new();
        for (w, c) in p.terms() {
            let i = self.index_of(w).ok_or(Error::DegreeOverflow { degree: w.len(), bound: self.bound })?;
            v.insert(i, c.clone());
        }
        Ok(v)
    }

    pub fn to_poly(&self, v: &SparseVec) -> NcPoly {
        NcPoly::from_terms(v.iter().map(|(&i, c)| (self.words[i].clone(), c.clone())))
    }
}

/// Degree-bounded two-sided rewriting, realised as exhaustive linear
/// elimination of the span `{u·r·v : |u| + deg r + |v| ≤ D}`.
#[derive(Clone, Debug)]
pub struct Rewriter {
    space: WordSpace,
    ideal: Echelon,
}

impl Rewriter {
    pub fn new(pres: &Presentation) -> Result<Self> {
        pres.validate()?;
        let space = WordSpace::new(pres.ngens(), pres.bound);
        let mut ideal = Echelon::new();
        for r in &pres.relations {
            let Some(deg) = r.degree() else { continue };
            let slack = pres.bound - deg;
            for lu in 0..=slack {
                for lv in 0..=slack - lu {
                    for u in space.words_of_length(lu) {
                        for v in space.words_of_length(lv) {
                            let mut row = SparseVec::new();
                            for (w, c) in r.terms() {
                                let uwv = u.concat(w).concat(v);
                                row.insert(space.index_of(&uwv).expect("within bound"), c.clone());
                            }
                            ideal.insert(row);
                        }
                    }
                }
            }
        }
        Ok(Rewriter { space, ideal })
    }

    pub fn space(&self) -> &WordSpace {
        &self.space
    }

    pub fn ideal(&self) -> &Echelon {
        &self.ideal
    }

    pub fn is_consistent(&self) -> bool {
        !self.ideal.is_pivot(0)
    }

    pub fn normal_form(&self, p: &NcPoly) -> Result<NcPoly> {
        let v = self.space.to_sparse(p)?;
        Ok(self.space.to_poly(&self.ideal.reduce(v)))
    }

    pub fn reduce_sparse(&self, v: SparseVec) -> SparseVec {
        self.ideal.reduce(v)
    }

    /// Normal-form words: the columns that are not leading words of the ideal.
    pub fn basis_words(&self) -> Vec<Word> {
        (0..self.space.len())
            .filter(|&c| !self.ideal.is_pivot(c))
            .map(|c| self.space.words()[c].clone())
            .collect()
    }
}

/// Canonical representative of `p` in the degree-bounded quotient.
pub fn normal_form(p: &NcPoly, pres: &Presentation) -> Result<NcPoly> {
    Rewriter::new(pres)?.normal_form(p)
}

pub fn build_truncated(pres: &Presentation) -> Result<TruncatedAlgebra> {
    TruncatedAlgebra::from_presentation(pres)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    pub(crate) fn weyl(bound: usize) -> Presentation {
        let x = NcPoly::gen(0);
        let d = NcPoly::gen(1);
        let rel = &(&(&d * &x) - &(&x * &d)) - &NcPoly::one();
        Presentation::new(&[("x", 0), ("d", 1)], vec![rel], bound).unwrap()
    }

    #[test]
    fn weyl_single_rewrite() {
        let p = weyl(3);
        let dx = &NcPoly::gen(1) * &NcPoly::gen(0);
        let nf = normal_form(&dx, &p).unwrap();
        let expected = &(&NcPoly::gen(0) * &NcPoly::gen(1)) + &NcPoly::one();
        assert_eq!(nf, expected);
        assert_eq!(normal_form(&nf, &p).unwrap(), nf);
        assert!(normal_form(&NcPoly::zero(), &p).unwrap().is_zero());
    }

    #[test]
    fn double_point_squares_to_one() {
        let z = NcPoly::gen(0);
        let u = NcPoly::gen(1);
        let one = NcPoly::one();
        let two = NcPoly::constant(int(2));
        let rels = vec![&(&z * &z) - &one, &(&two * &(&u * &z)) - &one, &(&two * &(&z * &u)) - &one];
        let p = Presentation::new(&[("z", 0), ("u", 0)], rels, 3).unwrap();
        assert_eq!(normal_form(&(&z * &z), &p).unwrap(), one);
    }

    #[test]
    fn overflow_and_validation() {
        let p = weyl(2);
        let big = NcPoly::gen(0).pow(3);
        assert_eq!(normal_form(&big, &p), Err(Error::DegreeOverflow { degree: 3, bound: 2 }));
        let bad = Presentation::new(&[("x", 0)], vec![NcPoly::gen(3)], 2);
        assert!(matches!(bad, Err(Error::InvalidPresentation(_))));
        let bad = Presentation::new(&[("x", 0)], vec![NcPoly::gen(0).pow(3)], 2);
        assert!(matches!(bad, Err(Error::InvalidPresentation(_))));
    }
}

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Q};

/// A monomial in the free algebra: a sequence of generator indices.
/// Ordered length-then-lexicographic.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(pub Vec<usize>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: usize) -> Self {
        Word(vec![g])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn weight(&self, weights: &[u32]) -> u32 {
        self.0.iter().map(|&g| weights[g]).sum()
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0.iter().map(|&g| names[g].as_str()).collect::<Vec<_>>().join("*")
    }

    /// All words of exactly `len` letters over `ngens` generators, in order.
    pub fn all_of_length(ngens: usize, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .iter()
                .flat_map(|w| (0..ngens).map(move |g| w.concat(&Word::letter(g))))
                .collect();
        }
        out
    }
}

/// Exact-coefficient noncommutative polynomial.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NcPoly {
    terms: BTreeMap<Word, Q>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct JsonTerm {
    pub word: Vec<usize>,
    pub coeff: String,
}

impl NcPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(Word::empty(), c)
    }

    pub fn gen(g: usize) -> Self {
        Self::monomial(Word::letter(g), Q::one())
    }

    pub fn monomial(w: Word, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Q)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::len)
    }

    pub fn leading_word(&self) -> Option<&Word> {
        self.terms.keys().next_back()
    }

    pub fn max_letter(&self) -> Option<usize> {
        self.terms.keys().flat_map(|w| w.0.iter().copied()).max()
    }

    pub fn scale(&self, c: &Q) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero();
        }
        NcPoly { terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect() }
    }

    pub fn pow(&self, k: usize) -> NcPoly {
        (0..k).fold(NcPoly::one(), |acc, _| &acc * self)
    }

    pub fn commutator(&self, other: &NcPoly) -> NcPoly {
        &(self * other) - &(other * self)
    }

    /// Drops every term of degree above `bound`.
    pub fn truncate(&self, bound: usize) -> NcPoly {
        NcPoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= bound)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Renames letters through `map` (letter `g` becomes word `map[g]`).
    pub fn substitute(&self, map: &[NcPoly]) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            let mut m = NcPoly::constant(c.clone());
            for &g in &w.0 {
                m = &m * &map[g];
            }
            out = &out + &m;
        }
        out
    }

    /// Canonical text form, largest word first, e.g. `d*x - x*d - 1`.
    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if w.is_empty() {
                s.push_str(&rational::format(&abs));
            } else {
                if !abs.is_one() {
                    let _ = write!(s, "{}*", rational::format(&abs));
                }
                s.push_str(&w.fmt_with(names));
            }
        }
        s
    }

    pub fn to_json_terms(&self) -> Vec<JsonTerm> {
        self.terms
            .iter()
            .map(|(w, c)| JsonTerm { word: w.0.clone(), coeff: rational::format(c) })
            .collect()
    }

    pub fn from_json_terms(terms: &[JsonTerm]) -> Option<NcPoly> {
        let mut p = NcPoly::zero();
        for t in terms {
            p.add_term(Word(t.word.clone()), rational::parse(&t.coeff)?);
        }
        Some(p)
    }
}

impl Add for &NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        self.scale(&-Q::one())
    }
}

impl Mul for &NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for NcPoly {
            type Output = NcPoly;
            fn $m(self, rhs: NcPoly) -> NcPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn names() -> Vec<String> {
        vec!["x".into(), "d".into()]
    }

    #[test]
    fn word_order_is_length_then_lex() {
        let a = Word(vec![1]);
        let b = Word(vec![0, 0]);
        let c = Word(vec![0, 1]);
        assert!(a < b && b < c);
        assert!(Word::empty() < a);
        assert_eq!(Word::all_of_length(2, 3).len(), 8);
    }

    #[test]
    fn arithmetic_and_printing() {
        let x = NcPoly::gen(0);
        let d = NcPoly::gen(1);
        let rel = &(&(&d * &x) - &(&x * &d)) - &NcPoly::one();
        assert_eq!(rel.fmt_with(&names()), "d*x - x*d - 1");
        assert_eq!(rel.degree(), Some(2));
        assert!(x.commutator(&x).is_zero());
        let p = NcPoly::from_terms([(Word(vec![0]), frac(1, 2)), (Word::empty(), int(-3))]);
        assert_eq!(p.fmt_with(&names()), "1/2*x - 3");
        assert_eq!(NcPoly::zero().fmt_with(&names()), "0");
        assert_eq!(NcPoly::from_json_terms(&p.to_json_terms()), Some(p));
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = NcPoly::gen(0);
        assert!((&x - &x).is_zero());
        assert_eq!((&x + &x).len(), 1);
    }
}

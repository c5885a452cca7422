//! Central extensions, formally étale morphisms and the standard étale
//! extension `R → R⟨z, u⟩`.

mod extension;
pub mod family;
mod harness;
mod lift;
mod topology;

pub use extension::{characters_with_values, CentralExtension};
pub use harness::{derivation_transfer_check, nd_closure_check, ActionModule, DerivationReport, NdClosureReport};
pub use topology::{free_product_truncated, root_algebra, tensor_with_commutative, topological_invariance_harness, TopologyReport};
pub use lift::{
    check_formally_etale, lift_standard, solve_lifts, CaseResult, EtaleVerdict, LiftSpace, StandardLift,
};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ncalg::{Element, Generator, NcPoly, Presentation, TruncatedAlgebra, Word};
use crate::rational::int;

/// Algebra map from a presented algebra into a concrete finite algebra,
/// fixed by the images of the generators.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    pub source: Presentation,
    pub target: TruncatedAlgebra,
    pub images: Vec<Element>,
}

impl AlgebraMorphism {
    /// Checks that every source relation vanishes on the images.
    pub fn new(source: Presentation, target: TruncatedAlgebra, images: Vec<Element>) -> Result<Self> {
        let m = AlgebraMorphism { source, target, images };
        m.validate()?;
        Ok(m)
    }

    /// Images given as polynomials in the target's generators.
    pub fn from_polys(source: Presentation, target: TruncatedAlgebra, polys: &[NcPoly]) -> Result<Self> {
        let images = polys.iter().map(|p| target.eval_own(p)).collect();
        Self::new(source, target, images)
    }

    pub fn validate(&self) -> Result<()> {
        if self.images.len() != self.source.ngens() {
            return Err(Error::NotAMorphism(format!(
                "{} images for {} generators",
                self.images.len(),
                self.source.ngens()
            )));
        }
        let names = self.source.names();
        for rel in &self.source.relations {
            if !TruncatedAlgebra::is_zero(&self.apply(rel)) {
                return Err(Error::NotAMorphism(format!("relation `{}` fails in the target", rel.fmt_with(&names))));
            }
        }
        Ok(())
    }

    pub fn apply(&self, p: &NcPoly) -> Element {
        self.target.eval(p, &self.images)
    }
}

/// Symbolic map between presentations: each source generator goes to a
/// polynomial in the target generators.
#[derive(Clone, Debug, PartialEq)]
pub struct PresentationMap {
    pub source: Presentation,
    pub target: Presentation,
    pub images: Vec<NcPoly>,
}

impl PresentationMap {
    pub fn identity(p: &Presentation) -> Self {
        PresentationMap { source: p.clone(), target: p.clone(), images: (0..p.ngens()).map(NcPoly::gen).collect() }
    }

    /// Inclusion of `source` into a presentation whose first generators are
    /// those of `source`.
    pub fn inclusion(source: &Presentation, target: &Presentation) -> Self {
        PresentationMap {
            source: source.clone(),
            target: target.clone(),
            images: (0..source.ngens()).map(NcPoly::gen).collect(),
        }
    }

    /// Composes with a concrete map out of the target.
    pub fn then(&self, m: &AlgebraMorphism) -> Vec<Element> {
        self.images.iter().map(|p| m.apply(p)).collect()
    }

    /// Verifies that source relations map into the target's relation ideal
    /// (at the target's degree bound).
    pub fn validate(&self) -> Result<()> {
        let alg = TruncatedAlgebra::from_presentation(&self.target)?;
        let images: Vec<Element> = self.images.iter().map(|p| alg.eval_own(p)).collect();
        AlgebraMorphism::new(self.source.clone(), alg, images).map(|_| ())
    }
}

fn fresh_name(taken: &[String], base: &str) -> String {
    let mut n = base.to_string();
    while taken.contains(&n) {
        n.push('_');
    }
    n
}

/// `R⟨z, u⟩ / (Σ a_i z^i, u·Σ i a_i z^{i-1} - 1, Σ i a_i z^{i-1}·u - 1)`.
/// Coefficients are written to the left of the powers of `z`.
pub fn standard_etale(r: &Presentation, a: &[NcPoly]) -> Result<Presentation> {
    if a.len() < 2 {
        return Err(Error::InvalidPresentation("standard étale data needs a_0, ..., a_n with n ≥ 1".into()));
    }
    let nr = r.ngens();
    if let Some(m) = a.iter().filter_map(NcPoly::max_letter).max() {
        if m >= nr {
            return Err(Error::InvalidPresentation("coefficients must live in the base".into()));
        }
    }
    let names = r.names();
    let zn = fresh_name(&names, "z");
    let mut taken = names.clone();
    taken.push(zn.clone());
    let un = fresh_name(&taken, "u");
    let z = NcPoly::gen(nr);
    let u = NcPoly::gen(nr + 1);
    let mut f = NcPoly::zero();
    let mut df = NcPoly::zero();
    for (i, ai) in a.iter().enumerate() {
        f = &f + &(ai * &z.pow(i));
        if i > 0 {
            df = &df + &(&ai.scale(&int(i as i64)) * &z.pow(i - 1));
        }
    }
    let one = NcPoly::one();
    let mut relations = r.relations.clone();
    relations.push(f);
    relations.push(&(&u * &df) - &one);
    relations.push(&(&df * &u) - &one);
    let mut generators = r.generators.clone();
    generators.push(Generator { name: zn, weight: 0 });
    generators.push(Generator { name: un, weight: 0 });
    let bound = relations.iter().filter_map(NcPoly::degree).max().unwrap_or(0).max(r.bound);
    Ok(Presentation { name: r.name.clone(), generators, relations, bound })
}

/// A standard étale presentation together with its defining data.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardEtale {
    pub base: Presentation,
    pub a: Vec<NcPoly>,
    pub presentation: Presentation,
}

impl StandardEtale {
    pub fn new(base: &Presentation, a: Vec<NcPoly>) -> Result<Self> {
        let presentation = standard_etale(base, &a)?;
        Ok(StandardEtale { base: base.clone(), a, presentation })
    }

    pub fn z(&self) -> usize {
        self.base.ngens()
    }

    pub fn u(&self) -> usize {
        self.base.ngens() + 1
    }

    /// Recovers the coefficients when `s` has the standard shape over `r`.
    pub fn recognize(r: &Presentation, s: &Presentation) -> Option<Self> {
        let nr = r.ngens();
        if s.ngens() != nr + 2 || s.relations.len() != r.relations.len() + 3 {
            return None;
        }
        let f = &s.relations[r.relations.len()];
        let z = nr;
        let mut a: Vec<NcPoly> = Vec::new();
        for (w, c) in f.terms() {
            let letters = w.letters();
            let split = letters.iter().position(|&g| g >= nr).unwrap_or(letters.len());
            let (head, tail) = letters.split_at(split);
            if tail.iter().any(|&g| g != z) {
                return None;
            }
            let i = tail.len();
            if a.len() <= i {
                a.resize(i + 1, NcPoly::zero());
            }
            a[i].add_term(Word(head.to_vec()), c.clone());
        }
        if a.len() < 2 {
            return None;
        }
        let candidate = StandardEtale::new(r, a).ok()?;
        let same_names = candidate.presentation.names() == s.names();
        (same_names && candidate.presentation.relations == s.relations).then_some(candidate)
    }
}

/// Commutative square `γ∘δ = β∘α` with `γ` a central extension.
#[derive(Clone, Debug)]
pub struct EtaleDiagram {
    pub alpha: PresentationMap,
    pub beta: AlgebraMorphism,
    pub gamma: CentralExtension,
    pub delta: AlgebraMorphism,
}

impl EtaleDiagram {
    pub fn new(
        alpha: PresentationMap,
        beta: AlgebraMorphism,
        gamma: CentralExtension,
        delta: AlgebraMorphism,
    ) -> Result<Self> {
        if beta.source != alpha.target || delta.source != alpha.source {
            return Err(Error::NotAMorphism("diagram maps do not share R and S".into()));
        }
        if beta.target.dim() != gamma.quotient().dim() || delta.target.dim() != gamma.total().dim() {
            return Err(Error::NotAMorphism("diagram maps do not land in A and A'".into()));
        }
        Ok(EtaleDiagram { alpha, beta, gamma, delta })
    }

    pub fn r(&self) -> &Presentation {
        &self.alpha.source
    }

    pub fn s(&self) -> &Presentation {
        &self.alpha.target
    }

    /// `γ∘δ = β∘α` on the generators of `R`.
    pub fn commutes(&self) -> bool {
        let ba = self.alpha.then(&self.beta);
        self.delta.images.iter().zip(&ba).all(|(d, b)| &self.gamma.project(d) == b)
    }

    /// The affine space of `ε: S → A'` with `γ∘ε = β` and `ε∘α = δ`.
    pub fn lift_space(&self) -> LiftSpace {
        let base: Vec<Element> = self.beta.images.iter().map(|b| self.gamma.section(b)).collect();
        let extra: Vec<(NcPoly, Element)> =
            self.alpha.images.iter().cloned().zip(self.delta.images.iter().cloned()).collect();
        solve_lifts(self.s(), &base, &self.gamma, &extra)
    }

    /// A diagram for every `δ` lifting `β∘α`, choosing `δ` as a seeded
    /// random point of the (affine) space of lifts. `None` when no lift of
    /// `β∘α` through `γ` exists.
    pub fn complete<R: rand::Rng>(
        alpha: PresentationMap,
        beta: AlgebraMorphism,
        gamma: CentralExtension,
        rng: &mut R,
    ) -> Result<Option<Self>> {
        let ba = alpha.then(&beta);
        let base: Vec<Element> = ba.iter().map(|b| gamma.section(b)).collect();
        let space = solve_lifts(&alpha.source, &base, &gamma, &[]);
        let Some(mut images) = space.particular.clone() else { return Ok(None) };
        let total = gamma.total();
        for dir in &space.kernel {
            let c = int(rng.random_range(-2..=2));
            if c.is_zero() {
                continue;
            }
            for (img, d) in images.iter_mut().zip(dir) {
                *img = total.add(img, &total.scale(d, &c));
            }
        }
        let delta = AlgebraMorphism::new(alpha.source.clone(), total.clone(), images)?;
        Self::new(alpha, beta, gamma, delta).map(Some)
    }
}

//! Seeded families of étale diagrams over the split double point.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{characters_with_values, AlgebraMorphism, CentralExtension, EtaleDiagram, PresentationMap, StandardEtale};
use crate::error::Result;
use crate::ncalg::{rd_presentation, Element, NcPoly, Presentation, TruncatedAlgebra};
use crate::rational::{frac, int};

/// `r_d` of the free algebra on `names`, with every word longer than
/// `bound` killed so that the truncation is an honest algebra.
pub fn free_rd(names: &[&str], d: usize, bound: usize) -> Result<Presentation> {
    Ok(rd_presentation(&Presentation::free(names, bound), d)?.nilpotent_truncation())
}

/// `S = R⟨z, u⟩/(z² - 1, 2uz - 1, 2zu - 1)` mapping onto `A = R × R` by
/// `r ↦ (r, r)`, `z ↦ (1, -1)`, `u ↦ (1/2, -1/2)`.
#[derive(Clone, Debug)]
pub struct DoublePoint {
    pub etale: StandardEtale,
    pub alpha: PresentationMap,
    pub beta: AlgebraMorphism,
}

impl DoublePoint {
    pub fn over(base: &Presentation) -> Result<Self> {
        let c = |v: i64| NcPoly::constant(int(v));
        let etale = StandardEtale::new(base, vec![c(-1), c(0), c(1)])?;
        let r = TruncatedAlgebra::from_presentation(base)?;
        let a = r.direct_product(&r);
        let gens = a.generators();
        let ng = base.ngens();
        let e1 = gens[2 * ng].1.clone();
        let mut images: Vec<Element> = (0..ng).map(|g| a.add(&gens[g].1, &gens[ng + g].1)).collect();
        images.push(a.sub(&a.scale(&e1, &int(2)), a.unit()));
        images.push(a.sub(&e1, &a.scale(a.unit(), &frac(1, 2))));
        let beta = AlgebraMorphism::new(etale.presentation.clone(), a, images)?;
        let alpha = PresentationMap::inclusion(base, &etale.presentation);
        Ok(DoublePoint { etale, alpha, beta })
    }

    /// Characters of `A` that kill every generator of `R` (those of a
    /// local base).
    pub fn characters(&self) -> Vec<Element> {
        characters_with_values(&self.beta.target, &[int(0), int(1)])
    }

    /// Up to `count` diagrams, one per random central extension of `A` for
    /// which `β∘α` lifts. Gives up after `16·count` attempts.
    pub fn family(&self, count: usize, seed: u64, max_rank: usize) -> Result<Vec<EtaleDiagram>> {
        let chars = self.characters();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        for _ in 0..16 * count {
            if out.len() == count {
                break;
            }
            let gamma = CentralExtension::random(&self.beta.target, &chars, max_rank, &mut rng)?;
            if let Some(d) = EtaleDiagram::complete(self.alpha.clone(), self.beta.clone(), gamma, &mut rng)? {
                out.push(d);
            }
        }
        Ok(out)
    }
}

use num_traits::{One, Zero};
use serde::Serialize;

use super::{AlgebraMorphism, CentralExtension, EtaleDiagram, PresentationMap, StandardEtale};
use crate::error::{Error, Result};
use crate::linalg::{solve_affine, SparseVec};
use crate::ncalg::{Element, NcPoly, Presentation};
use crate::rational::{int, Q};

/// Solutions of a lifting problem: an affine space over `I`.
#[derive(Clone, Debug)]
pub struct LiftSpace {
    /// One lift (images of the generators), if any exists.
    pub particular: Option<Vec<Element>>,
    /// Dimension of the space of lifts.
    pub dimension: usize,
    /// Directions spanning the space, each a list of generator corrections.
    pub kernel: Vec<Vec<Element>>,
}

impl LiftSpace {
    pub fn exists(&self) -> bool {
        self.particular.is_some()
    }

    pub fn unique(&self) -> bool {
        self.exists() && self.dimension == 0
    }
}

/// Finds all generator images `x_g + c_g` (`c_g ∈ I`) under which every
/// relation of `source` vanishes in `A'` and every `(p, v)` in `extra`
/// satisfies `p(x + c) = v`.
///
/// Since `I` is central with `I² = 0`, each constraint is affine in the
/// corrections, so its linear part is read off from single-coordinate
/// perturbations.
pub fn solve_lifts(
    source: &Presentation,
    base: &[Element],
    ext: &CentralExtension,
    extra: &[(NcPoly, Element)],
) -> LiftSpace {
    let total = ext.total();
    let kb = ext.kernel_basis();
    let k = kb.len();
    let ng = base.len();
    let nvars = ng * k;
    let residual = |images: &[Element]| -> Vec<Element> {
        let mut out: Vec<Element> = source.relations.iter().map(|r| total.eval(r, images)).collect();
        out.extend(extra.iter().map(|(p, v)| total.sub(&total.eval(p, images), v)));
        out
    };
    let f0 = residual(base);
    let mut columns: Vec<Vec<Element>> = Vec::with_capacity(nvars);
    for g in 0..ng {
        for b in kb {
            let mut x = base.to_vec();
            x[g] = total.add(&x[g], b);
            let f = residual(&x);
            columns.push(f.iter().zip(&f0).map(|(a, c)| total.sub(a, c)).collect());
        }
    }
    let mut eqs: Vec<(SparseVec, Q)> = Vec::new();
    for (ci, block) in f0.iter().enumerate() {
        for (coord, c0) in block.iter().enumerate() {
            let row: SparseVec = columns
                .iter()
                .enumerate()
                .filter(|(_, col)| !col[ci][coord].is_zero())
                .map(|(j, col)| (j, col[ci][coord].clone()))
                .collect();
            if row.is_empty() && c0.is_zero() {
                continue;
            }
            eqs.push((row, -c0.clone()));
        }
    }
    let sol = solve_affine(&eqs, nvars);
    let assemble = |t: &[Q], with_base: bool| -> Vec<Element> {
        (0..ng)
            .map(|g| {
                let mut v = if with_base { base[g].clone() } else { total.zero() };
                for (b, dir) in kb.iter().enumerate() {
                    let c = &t[g * k + b];
                    if !c.is_zero() {
                        v = total.add(&v, &total.scale(dir, c));
                    }
                }
                v
            })
            .collect()
    };
    LiftSpace {
        particular: sol.particular.as_ref().map(|t| assemble(t, true)),
        dimension: sol.nullity,
        kernel: sol.kernel.iter().map(|t| assemble(t, false)).collect(),
    }
}

/// Output of the closed-form lift through a central extension.
#[derive(Clone, Debug)]
pub struct StandardLift {
    pub p: Element,
    pub q: Element,
    pub epsilon: AlgebraMorphism,
    /// Every relation of `S` vanishes under `ε`.
    pub relations_hold: bool,
    /// `p` and `q` lie in the kernel of `γ`.
    pub corrections_in_kernel: bool,
    /// Dimension of the space of all lifts (0 means `ε` is unique).
    pub lift_dimension: usize,
    /// The lift solver found exactly `ε`.
    pub matches_solver: bool,
}

/// Lifts `β: S → A` through `γ` for standard étale `S`, given any
/// preimages `x` of `β(z)` and `y` of `β(u)`:
/// `p = -y Σ δ(a_i) x^i`, `q = y(1 - Σ i δ(a_i) (x+p)^{i-1} y)`.
pub fn lift_standard(diag: &EtaleDiagram, std: &StandardEtale, x: &Element, y: &Element) -> Result<StandardLift> {
    if diag.s() != &std.presentation || diag.r() != &std.base {
        return Err(Error::NotAMorphism("diagram is not over this standard étale extension".into()));
    }
    let gamma = &diag.gamma;
    let total = gamma.total();
    let (zi, ui) = (std.z(), std.u());
    if gamma.project(x) != diag.beta.images[zi] {
        return Err(Error::PreimageMismatch("γ(x) ≠ β(z)".into()));
    }
    if gamma.project(y) != diag.beta.images[ui] {
        return Err(Error::PreimageMismatch("γ(y) ≠ β(u)".into()));
    }
    let da: Vec<Element> = std.a.iter().map(|a| diag.delta.apply(a)).collect();
    let mut fx = total.zero();
    for (i, d) in da.iter().enumerate() {
        fx = total.add(&fx, &total.mul(d, &total.pow(x, i)));
    }
    let p = total.scale(&total.mul(y, &fx), &-Q::one());
    let xp = total.add(x, &p);
    let mut dfy = total.zero();
    for (i, d) in da.iter().enumerate().skip(1) {
        let term = total.mul(&total.mul(d, &total.pow(&xp, i - 1)), y);
        dfy = total.add(&dfy, &total.scale(&term, &int(i as i64)));
    }
    let q = total.mul(y, &total.sub(total.unit(), &dfy));
    let mut images = diag.delta.images.clone();
    images.push(xp);
    images.push(total.add(y, &q));
    let epsilon = AlgebraMorphism { source: std.presentation.clone(), target: total.clone(), images };
    let relations_hold = epsilon.validate().is_ok();
    let corrections_in_kernel = gamma.in_kernel(&p) && gamma.in_kernel(&q);
    let space = diag.lift_space();
    let matches_solver = space.particular.as_ref().is_some_and(|sol| space.dimension == 0 && sol == &epsilon.images);
    Ok(StandardLift {
        p,
        q,
        epsilon,
        relations_hold,
        corrections_in_kernel,
        lift_dimension: space.dimension,
        matches_solver,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CaseResult {
    pub index: usize,
    pub alpha_matches: bool,
    pub commutes: bool,
    pub exists: bool,
    pub unique: bool,
    pub lift_dimension: usize,
    pub kernel_dim: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct EtaleVerdict {
    pub cases: Vec<CaseResult>,
    /// Formal étaleness holds for every diagram supplied (not for all
    /// central extensions).
    pub verified_over_family: bool,
    pub family_size: usize,
}

pub fn check_formally_etale(alpha: &PresentationMap, family: &[EtaleDiagram]) -> EtaleVerdict {
    let cases: Vec<CaseResult> = family
        .iter()
        .enumerate()
        .map(|(index, d)| {
            let alpha_matches = &d.alpha == alpha;
            let commutes = d.commutes();
            let (exists, unique, lift_dimension) = if alpha_matches && commutes {
                let s = d.lift_space();
                (s.exists(), s.unique(), s.dimension)
            } else {
                (false, false, 0)
            };
            CaseResult { index, alpha_matches, commutes, exists, unique, lift_dimension, kernel_dim: d.gamma.kernel_dim() }
        })
        .collect();
    let verified_over_family = cases.iter().all(|c| c.alpha_matches && c.commutes && c.exists && c.unique);
    EtaleVerdict { family_size: cases.len(), cases, verified_over_family }
}

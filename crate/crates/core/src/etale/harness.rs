use num_traits::{One, Zero};
use serde::Serialize;

use super::{EtaleDiagram, PresentationMap};
use crate::error::{Error, Result};
use crate::linalg::{rank, solve_affine, SparseVec};
use crate::ncalg::{nc_filtration, NcFiltration, NcPoly, Presentation};
use crate::rational::Q;

type Matrix = Vec<Vec<Q>>;

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| (0..m).map(|j| (0..b.len()).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
        .collect()
}

fn mat_add_scaled(a: &mut Matrix, b: &Matrix, c: &Q) {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (x, y) in ra.iter_mut().zip(rb) {
            *x += y * c;
        }
    }
}

/// A finite-dimensional module on which each generator acts by a matrix;
/// the matrices must commute, so left and right actions agree.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionModule {
    pub dim: usize,
    pub actions: Vec<Matrix>,
}

impl ActionModule {
    pub fn zero(ngens: usize) -> Self {
        ActionModule { dim: 0, actions: vec![Vec::new(); ngens] }
    }

    fn word_action(&self, letters: &[usize]) -> Matrix {
        letters.iter().fold(identity(self.dim), |acc, &g| mat_mul(&acc, &self.actions[g]))
    }

    /// Action of a polynomial in the generators.
    pub fn poly_action(&self, p: &NcPoly) -> Matrix {
        let mut out = vec![vec![Q::zero(); self.dim]; self.dim];
        for (w, c) in p.terms() {
            mat_add_scaled(&mut out, &self.word_action(w.letters()), c);
        }
        out
    }

    /// Pulls the module back along a map into the acting presentation.
    pub fn pullback(&self, map: &PresentationMap) -> ActionModule {
        ActionModule { dim: self.dim, actions: map.images.iter().map(|p| self.poly_action(p)).collect() }
    }

    pub fn validate(&self, pres: &Presentation) -> Result<()> {
        if self.actions.len() != pres.ngens()
            || self.actions.iter().any(|m| m.len() != self.dim || m.iter().any(|r| r.len() != self.dim))
        {
            return Err(Error::NotAModule("action matrices have the wrong shape".into()));
        }
        for (i, a) in self.actions.iter().enumerate() {
            for b in &self.actions[..i] {
                if mat_mul(a, b) != mat_mul(b, a) {
                    return Err(Error::NotAModule("generator actions do not commute".into()));
                }
            }
        }
        for r in &pres.relations {
            if self.poly_action(r).iter().flatten().any(|x| !x.is_zero()) {
                return Err(Error::NotAModule(format!("relation `{}` acts nontrivially", r.fmt_with(&pres.names()))));
            }
        }
        Ok(())
    }

    /// Linear map `(m_g)_g ↦ d(p)` for the derivation with `d(g) = m_g`,
    /// as a `dim × (ngens·dim)` matrix.
    fn derivative_matrix(&self, p: &NcPoly, ngens: usize) -> Matrix {
        let n = self.dim;
        let mut out = vec![vec![Q::zero(); ngens * n]; n];
        for (w, c) in p.terms() {
            let l = w.letters();
            for j in 0..l.len() {
                let m = mat_mul(&self.word_action(&l[..j]), &self.word_action(&l[j + 1..]));
                let g = l[j];
                for r in 0..n {
                    for s in 0..n {
                        out[r][g * n + s] += c * &m[r][s];
                    }
                }
            }
        }
        out
    }

    /// Basis of `Der(pres, M)` as vectors of generator values.
    pub fn derivations(&self, pres: &Presentation) -> Vec<Vec<Q>> {
        let ng = pres.ngens();
        let mut eqs = Vec::new();
        for r in &pres.relations {
            for row in self.derivative_matrix(r, ng) {
                let sparse: SparseVec =
                    row.into_iter().enumerate().filter(|(_, q)| !q.is_zero()).collect();
                if !sparse.is_empty() {
                    eqs.push((sparse, Q::zero()));
                }
            }
        }
        solve_affine(&eqs, ng * self.dim).kernel
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DerivationReport {
    pub source_dim: usize,
    pub target_dim: usize,
    pub restriction_rank: usize,
    pub bijective: bool,
}

/// Compares `Der(S, M)` and `Der(R, M)` through restriction along `α`.
/// `module` is given by the action of the generators of `S`.
pub fn derivation_transfer_check(alpha: &PresentationMap, module: &ActionModule) -> Result<DerivationReport> {
    module.validate(&alpha.target)?;
    let pulled = module.pullback(alpha);
    pulled.validate(&alpha.source)?;
    let ders_s = module.derivations(&alpha.target);
    let ders_r = pulled.derivations(&alpha.source);
    let ns = alpha.target.ngens();
    let n = module.dim;
    let restricted: Vec<Vec<Q>> = ders_s
        .iter()
        .map(|d| {
            alpha
                .images
                .iter()
                .flat_map(|p| {
                    let m = module.derivative_matrix(p, ns);
                    m.iter().map(|row| row.iter().zip(d).map(|(a, b)| a * b).sum::<Q>()).collect::<Vec<_>>()
                })
                .collect()
        })
        .collect();
    debug_assert!(restricted.iter().all(|v| v.len() == alpha.source.ngens() * n));
    let restriction_rank = rank(&restricted);
    Ok(DerivationReport {
        source_dim: ders_r.len(),
        target_dim: ders_s.len(),
        restriction_rank,
        bijective: restriction_rank == ders_s.len() && restriction_rank == ders_r.len(),
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct NdClosureReport {
    pub d: usize,
    pub beta_surjective: bool,
    pub base_in_nd: bool,
    /// `dim F^k(A')` for `k = 0..=d+1`.
    pub filtration_dims: Vec<usize>,
    pub total_in_nd: bool,
}

pub fn nd_closure_check(diag: &EtaleDiagram, d: usize) -> NdClosureReport {
    let a = diag.gamma.quotient();
    let span = a.generated_span(&diag.beta.images);
    let beta_surjective = span.dim() == a.dim();
    let base_in_nd = nc_filtration(a, d + 1).is_zero();
    let f = NcFiltration::new(diag.gamma.total(), d + 1);
    let filtration_dims = f.dims();
    NdClosureReport { d, beta_surjective, base_in_nd, total_in_nd: f.level(d + 1).is_zero(), filtration_dims }
}

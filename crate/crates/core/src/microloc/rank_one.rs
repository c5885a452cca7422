use num_traits::{One, Zero};
use serde::Serialize;

use super::{kernel_of, SpanSolver};
use crate::error::{Error, Result};
use crate::linalg::{rank, to_dense, to_sparse, SparseVec, Subspace};
use crate::ncalg::{Element, TruncatedAlgebra};
use crate::rational::Q;

type Matrix = Vec<Vec<Q>>;

fn apply(m: &Matrix, v: &[Q]) -> Vec<Q> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn compose(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
}

fn column_space(m: &Matrix, dim: usize) -> Subspace {
    Subspace::spanned_by(dim, (0..dim).map(|c| to_sparse(&m.iter().map(|r| r[c].clone()).collect::<Vec<_>>())))
}

/// A finite module over an algebra `A` with a central nilpotent `t`
/// (`t^order = 0`). Each basis element of `A` acts by a matrix.
#[derive(Clone, Debug)]
pub struct TAdicModule {
    algebra: TruncatedAlgebra,
    t: Element,
    order: usize,
    dim: usize,
    action: Vec<Matrix>,
}

impl TAdicModule {
    pub fn new(algebra: TruncatedAlgebra, t: Element, order: usize, dim: usize, action: Vec<Matrix>) -> Result<Self> {
        let m = TAdicModule { algebra, t, order, dim, action };
        m.validate()?;
        Ok(m)
    }

    /// `A` acting on itself by left multiplication.
    pub fn regular(algebra: &TruncatedAlgebra, t: &Element, order: usize) -> Result<Self> {
        let n = algebra.dim();
        let action = (0..n)
            .map(|i| {
                (0..n)
                    .map(|r| (0..n).map(|c| algebra.table()[i][c].get(&r).cloned().unwrap_or_else(Q::zero)).collect())
                    .collect()
            })
            .collect();
        Self::new(algebra.clone(), t.clone(), order, n, action)
    }

    pub fn direct_sum(&self, other: &TAdicModule) -> Result<Self> {
        let d = self.dim + other.dim;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut m = vec![vec![Q::zero(); d]; d];
                for (i, row) in a.iter().enumerate() {
                    m[i][..self.dim].clone_from_slice(row);
                }
                for (i, row) in b.iter().enumerate() {
                    m[self.dim + i][self.dim..].clone_from_slice(row);
                }
                m
            })
            .collect();
        Self::new(self.algebra.clone(), self.t.clone(), self.order, d, action)
    }

    /// The submodule generated by `gens`.
    pub fn submodule(&self, gens: &[Vec<Q>]) -> Result<Self> {
        let mut span = Subspace::zero(self.dim);
        let mut basis: Vec<Vec<Q>> = Vec::new();
        let mut queue: Vec<Vec<Q>> = gens.to_vec();
        while let Some(v) = queue.pop() {
            if span.insert(to_sparse(&v)) {
                basis.push(v.clone());
                queue.extend(self.action.iter().map(|m| apply(m, &v)));
            }
        }
        let solver = SpanSolver::new(&basis.iter().map(|v| to_sparse(v)).collect::<Vec<_>>());
        let k = basis.len();
        let action = self
            .action
            .iter()
            .map(|m| {
                let cols: Vec<Vec<Q>> =
                    basis.iter().map(|b| solver.solve(&to_sparse(&apply(m, b))).expect("closed under the action")).collect();
                (0..k).map(|r| (0..k).map(|c| cols[c][r].clone()).collect()).collect()
            })
            .collect();
        Self::new(self.algebra.clone(), self.t.clone(), self.order, k, action)
    }

    /// The left ideal `A·g` for `g ∈ A`.
    pub fn left_ideal(algebra: &TruncatedAlgebra, t: &Element, order: usize, gens: &[Element]) -> Result<Self> {
        Self::regular(algebra, t, order)?.submodule(gens)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn algebra(&self) -> &TruncatedAlgebra {
        &self.algebra
    }

    /// Matrix of the action of `a ∈ A`.
    pub fn action_of(&self, a: &Element) -> Matrix {
        let mut out = vec![vec![Q::zero(); self.dim]; self.dim];
        for (c, m) in a.iter().zip(&self.action).filter(|(c, _)| !c.is_zero()) {
            for (orow, mrow) in out.iter_mut().zip(m) {
                for (o, x) in orow.iter_mut().zip(mrow) {
                    *o += c * x;
                }
            }
        }
        out
    }

    pub fn act(&self, a: &Element, v: &[Q]) -> Vec<Q> {
        apply(&self.action_of(a), v)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.algebra.dim();
        let shape_ok = self.action.len() == n
            && self.action.iter().all(|m| m.len() == self.dim && m.iter().all(|r| r.len() == self.dim));
        if !shape_ok {
            return Err(Error::NotAModule("action matrices have the wrong shape".into()));
        }
        let unit = self.action_of(self.algebra.unit());
        let id_ok = (0..self.dim).all(|i| (0..self.dim).all(|j| unit[i][j] == if i == j { Q::one() } else { Q::zero() }));
        if !id_ok {
            return Err(Error::NotAModule("the unit does not act as the identity".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if !self.algebra.product_defined(i, j) {
                    continue;
                }
                let prod = to_dense(&self.algebra.table()[i][j], n);
                if compose(&self.action[i], &self.action[j]) != self.action_of(&prod) {
                    return Err(Error::NotAModule(format!("action is not multiplicative on basis pair ({i}, {j})")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RankOneReport {
    /// `dim A/tA`.
    pub residue_dim: usize,
    /// `dim M/tM`.
    pub quotient_dim: usize,
    /// `t` is regular on `M` up to the truncation: `ker(t|M) = t^{order-1} M`.
    pub t_regular: bool,
    /// `M/tM` is free of rank one over `A/tA`.
    pub quotient_free_rank_one: bool,
    /// Coordinates of a generator of `M/tM`, when one exists.
    pub generator: Option<Vec<String>>,
    /// `a ↦ a·m` is a bijection `A → M` for the chosen generator.
    pub generator_bijective: bool,
    pub holds: bool,
    pub reason: Option<String>,
}

/// Decides whether `M` is free of rank one over `A` by testing that `t` is
/// regular on `M` and that `M/tM` is free of rank one over `A/tA`, and
/// confirms the answer by building a generator.
pub fn rank_one_criterion(m: &TAdicModule) -> Result<RankOneReport> {
    let a = &m.algebra;
    let n = a.dim();
    if m.order == 0 || !TruncatedAlgebra::is_zero(&a.pow(&m.t, m.order)) {
        return Err(Error::HypothesisFailure(format!("t^{} is not zero in the algebra", m.order)));
    }
    let basis: Vec<Element> = (0..n).map(|i| a.basis_element(i)).collect();
    let at = Subspace::spanned_by(n, basis.iter().map(|b| to_sparse(&a.mul(b, &m.t))));
    let ta = Subspace::spanned_by(n, basis.iter().map(|b| to_sparse(&a.mul(&m.t, b))));
    if at != ta {
        return Err(Error::HypothesisFailure("At and tA differ".into()));
    }
    let t_top = a.pow(&m.t, m.order - 1);
    let t_images: Vec<Element> = basis.iter().map(|b| a.mul(&m.t, b)).collect();
    let ker_a = Subspace::spanned_by(n, kernel_of(&t_images, n).iter().map(|v| to_sparse(v)));
    let top_a = Subspace::spanned_by(n, basis.iter().map(|b| to_sparse(&a.mul(&t_top, b))));
    if ker_a != top_a {
        return Err(Error::HypothesisFailure("t is a zero divisor on the algebra beyond the truncation".into()));
    }
    let d = m.dim;
    let t_m = m.action_of(&m.t);
    let t_top_m = m.action_of(&t_top);
    let t_cols: Vec<Vec<Q>> = (0..d).map(|c| t_m.iter().map(|r| r[c].clone()).collect()).collect();
    let ker_m = Subspace::spanned_by(d, kernel_of(&t_cols, d).iter().map(|v| to_sparse(v)));
    let t_regular = ker_m == column_space(&t_top_m, d);
    let tm = column_space(&t_m, d);
    let residue_dim = n - ta.dim();
    let quotient_dim = d - tm.dim();
    let generates_mod_t = |v: &[Q]| {
        let mut s = tm.clone();
        for b in &basis {
            s.insert(to_sparse(&m.act(b, v)));
        }
        s.dim() == d
    };
    let unit = |i: usize| to_dense(&SparseVec::from([(i, Q::one())]), d);
    let candidates = (0..d).map(unit).chain((0..d).flat_map(|i| {
        (i + 1..d).map(move |j| {
            let mut v = unit(i);
            v[j] = Q::one();
            v
        })
    }));
    let generator = candidates.into_iter().find(|v| generates_mod_t(v));
    let quotient_free_rank_one = generator.is_some() && quotient_dim == residue_dim;
    let generator_bijective = generator.as_ref().is_some_and(|g| {
        let images: Vec<Vec<Q>> = basis.iter().map(|b| m.act(b, g)).collect();
        n == d && rank(&images) == d
    });
    let holds = t_regular && quotient_free_rank_one;
    let reason = if !t_regular {
        Some("t is a zero divisor on the module beyond the truncation".to_string())
    } else if !quotient_free_rank_one {
        Some(format!("M/tM has dimension {quotient_dim} over a residue algebra of dimension {residue_dim}"))
    } else {
        None
    };
    Ok(RankOneReport {
        residue_dim,
        quotient_dim,
        t_regular,
        quotient_free_rank_one,
        generator: generator.map(|g| g.iter().map(crate::rational::format).collect()),
        generator_bijective,
        holds,
        reason,
    })
}

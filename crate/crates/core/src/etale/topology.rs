//! Lifting commutative standard étale extensions to noncommutative
//! thickenings.
//!
//! With scalar coefficients the standard étale `X`-algebra is the free
//! product `X * E`, `E = Q[z]/(f)`, since `u` is forced to be `f'(z)^{-1}`.
//! For a length-graded local `X` the free product is filtered by the total
//! `X`-weight, and quotienting by weight `> W` is an honest algebra, so
//! no word-length artifacts appear.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{axpy, rank, solve_affine, to_sparse, SparseVec};
use crate::ncalg::{abelianization, nc_filtration, quotient_rd, Element, NcPoly, Presentation, TruncatedAlgebra};
use crate::rational::Q;

/// `Q[z]/(Σ a_i z^i)` with basis `1, z, …, z^{n-1}` and generators `z` and
/// `u = f'(z)^{-1}`.
pub fn root_algebra(a: &[Q]) -> Result<TruncatedAlgebra> {
    let n = a.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    if n == 0 {
        return Err(Error::InvalidPresentation("polynomial must have positive degree".into()));
    }
    // z^k in the basis, for k ≤ 2n - 2
    let mut powers: Vec<Vec<Q>> = Vec::with_capacity(2 * n - 1);
    for k in 0..2 * n - 1 {
        let v = if k < n {
            let mut v = vec![Q::zero(); n];
            v[k] = Q::one();
            v
        } else {
            let prev = &powers[k - 1];
            let mut v = vec![Q::zero(); n];
            for i in 1..n {
                v[i] = prev[i - 1].clone();
            }
            let top = &prev[n - 1];
            for i in 0..n {
                v[i] -= top * &a[i] / &a[n];
            }
            v
        };
        powers.push(v);
    }
    let table: Vec<Vec<SparseVec>> = (0..n).map(|i| (0..n).map(|j| to_sparse(&powers[i + j])).collect()).collect();
    let labels = (0..n)
        .map(|k| match k {
            0 => "1".to_string(),
            1 => "z".to_string(),
            _ => format!("z^{k}"),
        })
        .collect();
    let mut unit = vec![Q::zero(); n];
    unit[0] = Q::one();
    let mut z = vec![Q::zero(); n];
    if n > 1 {
        z[1] = Q::one();
    } else {
        z = powers[1].clone();
    }
    let alg = TruncatedAlgebra::from_table(labels, unit.clone(), table, vec![])?;
    let mut df = vec![Q::zero(); n];
    for (i, ai) in a.iter().enumerate().skip(1).take(n) {
        df = alg.add(&df, &alg.scale(&alg.pow(&z, i - 1), &(ai * Q::from_integer((i as i64).into()))));
    }
    // u with f'(z)·u = 1
    let eqs: Vec<(SparseVec, Q)> = (0..n)
        .map(|r| {
            let row = (0..n)
                .filter_map(|c| {
                    let v = alg.mul(&df, &alg.basis_element(c))[r].clone();
                    (!v.is_zero()).then_some((c, v))
                })
                .collect();
            (row, unit[r].clone())
        })
        .collect();
    let u = solve_affine(&eqs, n)
        .particular
        .ok_or_else(|| Error::LiftInconsistent("f and f' are not coprime".into()))?;
    Ok(alg.with_generators(vec![("z".into(), z), ("u".into(), u)]))
}

/// `A ⊗ E` for commutative `E`; generators are those of `A` followed by
/// those of `E`.
pub fn tensor_with_commutative(a: &TruncatedAlgebra, e: &TruncatedAlgebra) -> TruncatedAlgebra {
    let (n, m) = (a.dim(), e.dim());
    let idx = |i: usize, j: usize| i * m + j;
    let mut table = vec![vec![SparseVec::new(); n * m]; n * m];
    for i in 0..n {
        for j in 0..m {
            for k in 0..n {
                for l in 0..m {
                    let mut v = SparseVec::new();
                    for (p, x) in &a.table()[i][k] {
                        for (q, y) in &e.table()[j][l] {
                            axpy(&mut v, &(x * y), &SparseVec::from([(idx(*p, *q), Q::one())]));
                        }
                    }
                    table[idx(i, j)][idx(k, l)] = v;
                }
            }
        }
    }
    let tensor = |x: &Element, y: &Element| -> Element {
        let mut out = vec![Q::zero(); n * m];
        for (i, p) in x.iter().enumerate() {
            for (j, q) in y.iter().enumerate() {
                out[idx(i, j)] += p * q;
            }
        }
        out
    };
    let mut gens: Vec<(String, Element)> =
        a.generators().iter().map(|(s, x)| (s.clone(), tensor(x, e.unit()))).collect();
    gens.extend(e.generators().iter().map(|(s, y)| (s.clone(), tensor(a.unit(), y))));
    let labels = (0..n)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| format!("{}⊗{}", a.labels()[i], e.labels()[j]))
        .collect();
    TruncatedAlgebra::from_table(labels, tensor(a.unit(), e.unit()), table, gens).expect("tensor of unital algebras")
}

type Seq = (Vec<usize>, Vec<usize>);

/// Free product `X * E` modulo total `X`-weight above `weight_bound`.
///
/// `X` must come from a length-homogeneous presentation whose only
/// weight-zero basis element is the unit; basis elements of the product
/// are alternating sequences `e_0 b_1 e_1 … b_k e_k` with `b_i` non-unit
/// basis elements of `X` and interior `e_i` non-unit basis elements of `E`.
pub fn free_product_truncated(x: &TruncatedAlgebra, e: &TruncatedAlgebra, weight_bound: usize) -> Result<TruncatedAlgebra> {
    let xl = x.lengths();
    let x_unit = (0..x.dim()).find(|&i| xl[i] == 0).filter(|&i| x.unit() == &x.basis_element(i));
    let Some(x_unit) = x_unit else {
        return Err(Error::InvalidPresentation("base must be local with unit of weight zero".into()));
    };
    if xl.iter().enumerate().any(|(i, &l)| l == 0 && i != x_unit) {
        return Err(Error::InvalidPresentation("base has extra weight-zero elements".into()));
    }
    let e_unit = (0..e.dim()).find(|&i| e.unit() == &e.basis_element(i));
    let Some(e_unit) = e_unit else {
        return Err(Error::InvalidPresentation("root algebra unit is not a basis element".into()));
    };
    let m_basis: Vec<usize> = (0..x.dim()).filter(|&i| i != x_unit).collect();
    let weight = |s: &Seq| -> usize { s.1.iter().map(|&b| xl[b]).sum() };

    let mut seqs: Vec<Seq> = (0..e.dim()).map(|j| (vec![j], vec![])).collect();
    let mut frontier = seqs.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            let last = *s.0.last().unwrap();
            if !s.1.is_empty() && last == e_unit {
                continue;
            }
            let w = weight(s);
            for &b in &m_basis {
                if w + xl[b] > weight_bound {
                    continue;
                }
                for j in 0..e.dim() {
                    let mut t = s.clone();
                    t.0.push(j);
                    t.1.push(b);
                    next.push(t);
                }
            }
        }
        seqs.extend(next.iter().cloned());
        frontier = next;
    }
    seqs.sort_by(|a, b| (weight(a), a.1.len(), &a.1, &a.0).cmp(&(weight(b), b.1.len(), &b.1, &b.0)));
    let index: HashMap<Seq, usize> = seqs.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let dim = seqs.len();

    let mul = |s: &Seq, t: &Seq| -> SparseVec {
        let mut out = SparseVec::new();
        if weight(s) + weight(t) > weight_bound {
            return out;
        }
        let (le, re) = (*s.0.last().unwrap(), t.0[0]);
        for (&j, c) in &e.table()[le][re] {
            let mut es: Vec<usize> = s.0[..s.0.len() - 1].to_vec();
            if j != e_unit || s.1.is_empty() || t.1.is_empty() {
                es.push(j);
                es.extend_from_slice(&t.0[1..]);
                let mut bs = s.1.clone();
                bs.extend_from_slice(&t.1);
                axpy(&mut out, c, &SparseVec::from([(index[&(es, bs)], Q::one())]));
                continue;
            }
            let (lb, rb) = (*s.1.last().unwrap(), t.1[0]);
            es.extend_from_slice(&t.0[1..]);
            for (&b, d) in &x.table()[lb][rb] {
                debug_assert!(b != x_unit);
                let mut bs = s.1[..s.1.len() - 1].to_vec();
                bs.push(b);
                bs.extend_from_slice(&t.1[1..]);
                axpy(&mut out, &(c * d), &SparseVec::from([(index[&(es.clone(), bs)], Q::one())]));
            }
        }
        out
    };
    let table: Vec<Vec<SparseVec>> = seqs.iter().map(|s| seqs.iter().map(|t| mul(s, t)).collect()).collect();

    let embed_x = |v: &Element| -> Element {
        let mut out = vec![Q::zero(); dim];
        for (b, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let key = if b == x_unit { (vec![e_unit], vec![]) } else { (vec![e_unit, e_unit], vec![b]) };
            out[index[&key]] += c;
        }
        out
    };
    let embed_e = |v: &Element| -> Element {
        let mut out = vec![Q::zero(); dim];
        for (j, c) in v.iter().enumerate() {
            out[index[&(vec![j], vec![])]] += c;
        }
        out
    };
    let mut gens: Vec<(String, Element)> = x.generators().iter().map(|(s, v)| (s.clone(), embed_x(v))).collect();
    gens.extend(e.generators().iter().map(|(s, v)| (s.clone(), embed_e(v))));
    let labels = seqs
        .iter()
        .map(|(es, bs)| {
            let mut parts = Vec::new();
            for (k, &j) in es.iter().enumerate() {
                if j != e_unit {
                    parts.push(e.labels()[j].clone());
                }
                if let Some(&b) = bs.get(k) {
                    parts.push(x.labels()[b].clone());
                }
            }
            if parts.is_empty() {
                "1".to_string()
            } else {
                parts.join("·")
            }
        })
        .collect();
    TruncatedAlgebra::from_table(labels, embed_e(e.unit()), table, gens)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct TopologyReport {
    pub d: usize,
    pub weight_bound: usize,
    pub lifted_dim: usize,
    pub completed_dim: usize,
    pub completed_in_nd: bool,
    pub abelianization_dim: usize,
    pub commutative_dim: usize,
    pub abelianization_matches: bool,
    /// `dim X · dim E`, the size of `X ⊗ E`.
    pub tensor_dim: usize,
    /// The completed lift is `X ⊗ E` (through the generator map).
    pub completed_is_tensor: bool,
}

fn generator_iso(source: &TruncatedAlgebra, target: &TruncatedAlgebra) -> bool {
    source.dim() == target.dim()
        && source
            .linear_map_from_generators(target, &target.generator_images())
            .is_ok_and(|images| rank(&images) == target.dim())
}

/// Lifts the commutative standard étale extension `X^ab[z]/(f)` (scalar
/// coefficients `a`) to the thickening `X`, completes it to `r_d` and
/// compares: the result must lie in `N_d`, its abelianization must be the
/// commutative extension, and it must agree with `X ⊗ Q[z]/(f)`.
pub fn topological_invariance_harness(x: &Presentation, d: usize, a: &[NcPoly]) -> Result<TopologyReport> {
    if !x.is_homogeneous() {
        return Err(Error::InvalidPresentation("thickening must be length-homogeneous".into()));
    }
    let scalars: Vec<Q> = a
        .iter()
        .map(|p| match p.degree() {
            None => Ok(Q::zero()),
            Some(0) => Ok(p.coeff(&crate::ncalg::Word::empty())),
            Some(_) => Err(Error::InvalidPresentation("coefficients must be scalars".into())),
        })
        .collect::<Result<_>>()?;
    let e = root_algebra(&scalars)?;
    let xa = TruncatedAlgebra::from_presentation(x)?;
    let weight_bound = xa.lengths().iter().copied().max().unwrap_or(0);
    let lifted = free_product_truncated(&xa, &e, weight_bound)?;
    let completed = quotient_rd(&lifted, d)?;
    let completed_in_nd = nc_filtration(&completed, d + 1).is_zero();
    let ab = abelianization(&completed)?;
    let comm = tensor_with_commutative(&abelianization(&xa)?, &e);
    let tensor = tensor_with_commutative(&xa, &e);
    Ok(TopologyReport {
        d,
        weight_bound,
        lifted_dim: lifted.dim(),
        completed_dim: completed.dim(),
        completed_in_nd,
        abelianization_dim: ab.dim(),
        commutative_dim: comm.dim(),
        abelianization_matches: generator_iso(&comm, &ab),
        tensor_dim: tensor.dim(),
        completed_is_tensor: generator_iso(&tensor, &completed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn split_double_point() {
        let e = root_algebra(&[int(-1), int(0), int(1)]).unwrap();
        assert_eq!(e.dim(), 2);
        let u = e.generator("u").unwrap();
        assert_eq!(u, &vec![Q::zero(), frac(1, 2)]);
        assert!(e.associativity_failure().is_none());
        assert!(root_algebra(&[int(0), int(0), int(1)]).is_err());
    }

    #[test]
    fn free_product_is_associative() {
        let x = TruncatedAlgebra::from_presentation(&Presentation::free(&["x", "y"], 2).nilpotent_truncation()).unwrap();
        let e = root_algebra(&[int(-1), int(0), int(1)]).unwrap();
        let p = free_product_truncated(&x, &e, 2).unwrap();
        // weight 0: 2, weight 1: 2·2·2, weight 2: 2·4·2 + 2·2·1·2·2
        assert_eq!(p.dim(), 2 + 8 + 16 + 16);
        assert!(p.associativity_failure().is_none());
        assert!(!p.is_commutative());
    }
}

//! Brute-force oracles that recompute quantities by their definitions,
//! sharing no code path with the fast implementations they check.
//!
//! Instance sizes are capped by a budget (see [`budget_from_env`]): the
//! dimension of the truncated algebra for filtrations and the square of the
//! group order for kernel oracles.

use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::fmkernel::{inverse_kernel, poincare, FiniteAbGroup, Kernel};
use crate::linalg::{axpy, SparseVec, Subspace};
use crate::ncalg::{NcFiltration, Presentation, TruncatedAlgebra};
use crate::rational::{int, Q};
use crate::report::Report;

/// Environment variable holding the oracle budget.
pub const BUDGET_VAR: &str = "NCF_BUDGET";

/// Reads `NCF_BUDGET`; unset means unlimited.
pub fn budget_from_env() -> Result<Option<usize>> {
    match std::env::var(BUDGET_VAR) {
        Err(_) => Ok(None),
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidInput(format!("{BUDGET_VAR} must be a non-negative integer, got `{s}`"))),
    }
}

pub fn enforce_budget(size: usize, budget: Option<usize>) -> Result<()> {
    match budget {
        Some(b) if size > b => Err(Error::BudgetExceeded { size, budget: b }),
        _ => Ok(()),
    }
}

fn span_products(alg: &TruncatedAlgebra, u: &Subspace, v: &Subspace) -> Subspace {
    let mut out = Subspace::zero(alg.dim());
    for a in u.basis() {
        for b in v.basis() {
            out.insert(alg.mul_sparse(a, b));
        }
    }
    out
}

/// `R_0 = R`, `R_{i+1} = span{ab - ba : a ∈ R, b ∈ R_i}` over basis pairs.
fn lcs_by_definition(alg: &TruncatedAlgebra, upto: usize) -> Vec<Subspace> {
    let n = alg.dim();
    let mut terms = vec![Subspace::full(n)];
    for _ in 0..upto {
        let mut next = Subspace::zero(n);
        for a in 0..n {
            let e = SparseVec::from([(a, Q::one())]);
            for b in terms.last().unwrap().canonical_basis() {
                let mut c = alg.mul_sparse(&e, &b);
                axpy(&mut c, &-Q::one(), &alg.mul_sparse(&b, &e));
                next.insert(c);
            }
        }
        terms.push(next);
    }
    terms
}

fn compositions(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    (1..=d)
        .flat_map(|first| {
            compositions(d - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// `F^d` as the sum over compositions `(i_1, …, i_m)` of `d` of
/// `R·R_{i_1}·R ⋯ R·R_{i_m}·R`, each product spanned explicitly.
pub fn filtration_by_compositions(alg: &TruncatedAlgebra, max_d: usize) -> Vec<Subspace> {
    let n = alg.dim();
    let lcs = lcs_by_definition(alg, max_d);
    let full = Subspace::full(n);
    (0..=max_d)
        .map(|d| {
            if d == 0 {
                return full.clone();
            }
            let mut acc = Subspace::zero(n);
            for comp in compositions(d) {
                let mut x = full.clone();
                for &i in &comp {
                    x = span_products(alg, &x, &lcs[i]);
                    x = span_products(alg, &x, &full);
                    if x.is_zero() {
                        break;
                    }
                }
                acc = acc.sum(&x);
            }
            acc
        })
        .collect()
}

/// Compares the fast filtration with [`filtration_by_compositions`].
pub fn filtration_oracle(pres: &Presentation, max_d: usize, budget: Option<usize>) -> Result<Report> {
    let alg = TruncatedAlgebra::from_presentation(pres)?;
    enforce_budget(alg.dim(), budget)?;
    let fast = NcFiltration::new(&alg, max_d);
    let slow = filtration_by_compositions(&alg, max_d);
    let mut r = Report::new("oracle filtration");
    r.set("dim", alg.dim());
    r.set("max_d", max_d);
    r.set("dims", fast.dims());
    r.set("oracle_dims", slow.iter().map(Subspace::dim).collect::<Vec<_>>());
    for (d, s) in slow.iter().enumerate() {
        let f = fast.level(d);
        let same = f.is_subspace_of(s) && s.is_subspace_of(f);
        r.check_with(&format!("level_{d}"), same, (f.dim(), s.dim()));
    }
    Ok(r)
}

/// Character orthogonality by direct summation, plus `P∘Q = Δ` and
/// `Q∘P = Δ` entry by entry from the closed forms.
pub fn orthogonality_oracle(group: &FiniteAbGroup, budget: Option<usize>) -> Result<Report> {
    let n = group.order();
    enforce_budget(n * n, budget)?;
    let f = group.field().clone();
    let order = Cyclotomic::rational(&f, int(n as i64));
    let zero = Cyclotomic::zero(&f);
    let chi = |c: usize, x: usize| Cyclotomic::zeta_pow(&f, group.pairing_exponent(c, x) as i64);
    let chi_inv = |c: usize, x: usize| Cyclotomic::zeta_pow(&f, -(group.pairing_exponent(c, x) as i64));

    let mut rows_ok = true;
    let mut cols_ok = true;
    let mut witness = None;
    for a in 0..n {
        for b in 0..n {
            let expect = if a == b { &order } else { &zero };
            // Σ_x χ_a(x) χ_b(x)^{-1}
            let mut s = zero.clone();
            for x in 0..n {
                s = &s + &(&chi(a, x) * &chi_inv(b, x));
            }
            if &s != expect {
                rows_ok = false;
                witness.get_or_insert((group.element(a), group.element(b)));
            }
            // Σ_χ χ(a) χ(b)^{-1}
            let mut s = zero.clone();
            for c in 0..n {
                s = &s + &(&chi(c, a) * &chi_inv(c, b));
            }
            if &s != expect {
                cols_ok = false;
                witness.get_or_insert((group.element(a), group.element(b)));
            }
        }
    }
    let p = poincare(group);
    let q = inverse_kernel(group);
    let delta = Kernel::diagonal(group);
    let pq = p.circle(&q)?;
    let qp = q.circle(&p)?;
    let mut r = Report::new("oracle orthogonality");
    r.set("group", group.to_string());
    r.set("order", n);
    r.check_with("characters_orthogonal", rows_ok, &witness);
    r.check_with("points_orthogonal", cols_ok, &witness);
    r.check_with("p_then_q", pq == delta, pq.first_difference(&delta));
    r.check_with("q_then_p", qp == delta, qp.first_difference(&delta));
    Ok(r)
}

fn triple_sum(a: &Kernel, b: &Kernel, c: &Kernel) -> Vec<Cyclotomic> {
    let n = a.rows().order();
    let f = a.field().clone();
    let mut out = Vec::with_capacity(n * n);
    for x in 0..n {
        for w in 0..n {
            let mut s = Cyclotomic::zero(&f);
            for y in 0..n {
                for z in 0..n {
                    s = &s + &(&(a.get(x, y) * b.get(y, z)) * c.get(z, w));
                }
            }
            out.push(s);
        }
    }
    out
}

fn entries(k: &Kernel) -> Vec<Cyclotomic> {
    let n = k.rows().order();
    (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| k.get(x, y).clone()).collect()
}

/// Associativity of composition on seeded random kernels, against the
/// naive sum `Σ_{y,z} A(x,y) B(y,z) C(z,w)`.
pub fn assoc_oracle(group: &FiniteAbGroup, count: usize, seed: u64, budget: Option<usize>) -> Result<Report> {
    let n = group.order();
    enforce_budget(n * n, budget)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for i in 0..count {
        let a = Kernel::random(group, group, &mut rng)?;
        let b = Kernel::random(group, group, &mut rng)?;
        let c = Kernel::random(group, group, &mut rng)?;
        let left = a.circle(&b)?.circle(&c)?;
        let right = a.circle(&b.circle(&c)?)?;
        let naive = triple_sum(&a, &b, &c);
        if entries(&left) != naive || entries(&right) != naive {
            failures.push(i);
        }
    }
    let mut r = Report::new("oracle assoc");
    r.set("group", group.to_string());
    r.set("count", count);
    r.set("seed", seed);
    r.check_with("associative", failures.is_empty(), &failures);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_group, parse_presentation};

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(0).len(), 1);
        assert_eq!(compositions(4).len(), 8);
        assert!(compositions(3).contains(&vec![1, 2]));
    }

    #[test]
    fn filtration_agrees_on_weyl_and_free() {
        let weyl = parse_presentation("gens x, d; rel d*x - x*d - 1; bound 3;").unwrap();
        assert!(filtration_oracle(&weyl, 3, None).unwrap().passed());
        let free = Presentation::free(&["x", "y"], 3);
        let r = filtration_oracle(&free, 3, None).unwrap();
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn kernel_oracles_pass() {
        let g = parse_group("Z3xZ2").unwrap();
        assert!(orthogonality_oracle(&g, None).unwrap().passed());
        assert!(assoc_oracle(&g, 3, 7, None).unwrap().passed());
    }

    #[test]
    fn budget_is_enforced() {
        let g = parse_group("Z4xZ2").unwrap();
        assert_eq!(orthogonality_oracle(&g, Some(63)).unwrap_err(), Error::BudgetExceeded { size: 64, budget: 63 });
        assert!(orthogonality_oracle(&g, Some(64)).is_ok());
        let free = Presentation::free(&["x", "y"], 2);
        assert!(matches!(filtration_oracle(&free, 2, Some(3)), Err(Error::BudgetExceeded { size: 7, .. })));
    }
}

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{rank, solve_affine, to_dense, to_sparse, SparseVec, Subspace};
use crate::ncalg::{Element, TruncatedAlgebra};
use crate::rational::{int, Q};

/// Surjection `γ: A' → A` with central square-zero kernel.
#[derive(Clone, Debug)]
pub struct CentralExtension {
    total: TruncatedAlgebra,
    quotient: TruncatedAlgebra,
    projection: Vec<Element>,
    kernel: Subspace,
    kernel_basis: Vec<Element>,
}

impl CentralExtension {
    /// `projection[i]` is `γ` of the `i`-th basis element of `total`.
    pub fn new(total: TruncatedAlgebra, quotient: TruncatedAlgebra, projection: Vec<Element>) -> Result<Self> {
        let (n, m) = (total.dim(), quotient.dim());
        if projection.len() != n || projection.iter().any(|v| v.len() != m) {
            return Err(Error::NotCentralExtension("projection has wrong shape".into()));
        }
        let ext = {
            let mut eqs = Vec::with_capacity(m);
            for i in 0..m {
                let row: SparseVec =
                    (0..n).filter(|&j| !projection[j][i].is_zero()).map(|j| (j, projection[j][i].clone())).collect();
                eqs.push((row, Q::zero()));
            }
            let kernel_basis = solve_affine(&eqs, n).kernel;
            let kernel = Subspace::spanned_by(n, kernel_basis.iter().map(|v| to_sparse(v)));
            CentralExtension { total, quotient, projection, kernel, kernel_basis }
        };
        ext.validate()?;
        Ok(ext)
    }

    /// Builds `γ` from the images of the generators of `total`.
    pub fn from_generator_images(
        total: TruncatedAlgebra,
        quotient: TruncatedAlgebra,
        images: &[Element],
    ) -> Result<Self> {
        let projection = total
            .linear_map_from_generators(&quotient, images)
            .map_err(|e| Error::NotCentralExtension(format!("projection is not well defined: {e}")))?;
        Self::new(total, quotient, projection)
    }

    /// The identity extension, with zero kernel.
    pub fn trivial(alg: TruncatedAlgebra) -> Self {
        let projection = (0..alg.dim()).map(|i| alg.basis_element(i)).collect();
        Self::new(alg.clone(), alg, projection).expect("identity is a central extension")
    }

    fn validate(&self) -> Result<()> {
        let (n, m) = (self.total.dim(), self.quotient.dim());
        if rank(&self.projection) != m {
            return Err(Error::NotCentralExtension("projection is not surjective".into()));
        }
        if self.project(self.total.unit()) != *self.quotient.unit() {
            return Err(Error::NotCentralExtension("projection does not preserve the unit".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if !self.total.product_defined(i, j) {
                    continue;
                }
                let prod = self.total.mul(&self.total.basis_element(i), &self.total.basis_element(j));
                if self.project(&prod) != self.quotient.mul(&self.projection[i], &self.projection[j]) {
                    return Err(Error::NotCentralExtension(format!("projection not multiplicative on ({i}, {j})")));
                }
            }
        }
        for k in &self.kernel_basis {
            for j in 0..n {
                let e = self.total.basis_element(j);
                if !TruncatedAlgebra::is_zero(&self.total.commutator(k, &e)) {
                    return Err(Error::NotCentralExtension(format!("kernel not central against basis {j}")));
                }
            }
            for l in &self.kernel_basis {
                if !TruncatedAlgebra::is_zero(&self.total.mul(k, l)) {
                    return Err(Error::NotCentralExtension("kernel does not square to zero".into()));
                }
            }
        }
        Ok(())
    }

    pub fn total(&self) -> &TruncatedAlgebra {
        &self.total
    }

    pub fn quotient(&self) -> &TruncatedAlgebra {
        &self.quotient
    }

    pub fn projection(&self) -> &[Element] {
        &self.projection
    }

    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    pub fn kernel_basis(&self) -> &[Element] {
        &self.kernel_basis
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel_basis.len()
    }

    pub fn project(&self, a: &Element) -> Element {
        let mut out = self.quotient.zero();
        for (c, img) in a.iter().zip(&self.projection) {
            if !c.is_zero() {
                out = self.quotient.add(&out, &self.quotient.scale(img, c));
            }
        }
        out
    }

    /// Some preimage of `a` under `γ`.
    pub fn section(&self, a: &Element) -> Element {
        let (n, m) = (self.total.dim(), self.quotient.dim());
        let eqs: Vec<(SparseVec, Q)> = (0..m)
            .map(|i| {
                let row =
                    (0..n).filter(|&j| !self.projection[j][i].is_zero()).map(|j| (j, self.projection[j][i].clone())).collect();
                (row, a[i].clone())
            })
            .collect();
        solve_affine(&eqs, n).particular.expect("projection is surjective")
    }

    pub fn in_kernel(&self, a: &Element) -> bool {
        TruncatedAlgebra::is_zero(&self.project(a))
    }

    /// `A' = A ⊕ Q^k` where `e_l` is acted on through the character
    /// `chars[l]` on both sides and `e_a e_b = Σ_l cocycle[l][a][b] e_l`.
    /// The cocycle must satisfy the Hochschild condition and vanish
    /// when either argument is the unit.
    pub fn from_cocycle(base: &TruncatedAlgebra, chars: &[Element], cocycle: &[Vec<Vec<Q>>]) -> Result<Self> {
        let n = base.dim();
        let k = chars.len();
        let mut table = vec![vec![SparseVec::new(); n + k]; n + k];
        for a in 0..n {
            for b in 0..n {
                let mut v = base.table()[a][b].clone();
                for (l, c) in cocycle.iter().enumerate() {
                    if !c[a][b].is_zero() {
                        v.insert(n + l, c[a][b].clone());
                    }
                }
                table[a][b] = v;
            }
            for (l, chi) in chars.iter().enumerate() {
                if !chi[a].is_zero() {
                    table[a][n + l] = SparseVec::from([(n + l, chi[a].clone())]);
                    table[n + l][a] = SparseVec::from([(n + l, chi[a].clone())]);
                }
            }
        }
        let lift = |e: &Element| -> Element {
            let mut v = e.clone();
            v.extend(std::iter::repeat_n(Q::zero(), k));
            v
        };
        let mut labels: Vec<String> = base.labels().to_vec();
        labels.extend((1..=k).map(|l| format!("e{l}")));
        let mut generators: Vec<(String, Element)> =
            base.generators().iter().map(|(s, e)| (s.clone(), lift(e))).collect();
        for l in 0..k {
            let mut v = vec![Q::zero(); n + k];
            v[n + l] = Q::one();
            generators.push((format!("e{}", l + 1), v));
        }
        let total = TruncatedAlgebra::from_table(labels, lift(base.unit()), table, generators)
            .map_err(|e| Error::NotCentralExtension(e.to_string()))?;
        if let Some(t) = total.associativity_failure() {
            return Err(Error::NotCentralExtension(format!("cocycle condition fails on {t:?}")));
        }
        let projection = (0..n + k)
            .map(|i| if i < n { base.basis_element(i) } else { base.zero() })
            .collect();
        Self::new(total, base.clone(), projection)
    }

    /// A random extension of `base` by `Q^k` (`1 ≤ k ≤ max_rank`): each
    /// coordinate uses a character from `chars`, and the cocycle is a
    /// random combination of cup products of derivations plus a random
    /// coboundary.
    pub fn random<R: Rng>(base: &TruncatedAlgebra, chars: &[Element], max_rank: usize, rng: &mut R) -> Result<Self> {
        assert!(!chars.is_empty() && max_rank >= 1);
        let n = base.dim();
        let k = rng.random_range(1..=max_rank);
        let mut picked = Vec::with_capacity(k);
        let mut cocycle = Vec::with_capacity(k);
        let unit = base.unit();
        let pivot = unit.iter().position(|c| !c.is_zero()).expect("nonzero unit");
        for _ in 0..k {
            let chi = chars[rng.random_range(0..chars.len())].clone();
            let ders = base.derivations_at(&chi);
            let mut c = vec![vec![Q::zero(); n]; n];
            for p in &ders {
                for q in &ders {
                    let lambda = int(rng.random_range(-2..=2));
                    if lambda.is_zero() {
                        continue;
                    }
                    for a in 0..n {
                        for b in 0..n {
                            c[a][b] += &lambda * &p[a] * &q[b];
                        }
                    }
                }
            }
            // coboundary of f with f(1) = 0
            let mut f: Vec<Q> = (0..n).map(|_| int(rng.random_range(-2..=2))).collect();
            let f1: Q = TruncatedAlgebra::apply_functional(&f, unit);
            f[pivot] -= f1 / &unit[pivot];
            for a in 0..n {
                for b in 0..n {
                    let fab = TruncatedAlgebra::apply_functional(&f, &to_dense(&base.table()[a][b], n));
                    c[a][b] += &chi[a] * &f[b] - fab + &f[a] * &chi[b];
                }
            }
            picked.push(chi);
            cocycle.push(c);
        }
        Self::from_cocycle(base, &picked, &cocycle)
    }
}

/// All characters of `alg` whose generator values lie in `candidates`
/// (tried exhaustively; intended for tiny generator sets).
pub fn characters_with_values(alg: &TruncatedAlgebra, candidates: &[Q]) -> Vec<Element> {
    let ng = alg.generators().len();
    let mut out = Vec::new();
    let total = candidates.len().pow(ng as u32);
    for code in 0..total {
        let mut c = code;
        let values: Vec<Q> = (0..ng)
            .map(|_| {
                let v = candidates[c % candidates.len()].clone();
                c /= candidates.len();
                v
            })
            .collect();
        if let Ok(chi) = alg.character_from_generators(&values) {
            out.push(chi);
        }
    }
    out
}

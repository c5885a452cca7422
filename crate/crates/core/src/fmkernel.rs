//! Kernel calculus on finite abelian groups: convolution of kernels, the
//! Poincaré kernel and its inverse, the transform `Φ(K) = P∘K∘Q`,
//! twisted group algebras of shift/twist kernels and their modules.
//!
//! The dual `X^` is the character group, indexed by the elements of `X`
//! itself: `χ_c(x) = ζ_e^{Σ c_j x_j e/n_j}` with `e` the exponent.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use rand::Rng;
use serde::Serialize;

use crate::cyclotomic::{Cyclotomic, CyclotomicField};
use crate::error::{Error, Result};
use crate::rational::{frac, int, Q};

/// Stamped into every kernel report.
pub const MODEL_NOTE: &str =
    "finite abelian group model: dual = character group, P(x,chi) = chi(x), Q(chi,x) = chi(x)^-1/|X|";

/// `Z/n_1 × … × Z/n_k`; elements are indexed in mixed radix with the first
/// factor most significant.
#[derive(Clone, Debug)]
pub struct FiniteAbGroup {
    moduli: Vec<u64>,
    field: Arc<CyclotomicField>,
}

impl PartialEq for FiniteAbGroup {
    fn eq(&self, other: &Self) -> bool {
        self.moduli == other.moduli
    }
}

impl Eq for FiniteAbGroup {}

impl FiniteAbGroup {
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        if moduli.contains(&0) {
            return Err(Error::ZeroModulus);
        }
        let e = moduli.iter().fold(1u64, |acc, n| acc.lcm(n));
        Ok(FiniteAbGroup { moduli, field: CyclotomicField::new(e) })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> usize {
        self.moduli.iter().product::<u64>() as usize
    }

    pub fn exponent(&self) -> u64 {
        self.field.order()
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    /// The character group, identified with `X` through the indexing.
    pub fn dual(&self) -> FiniteAbGroup {
        self.clone()
    }

    pub fn element(&self, mut i: usize) -> Vec<u64> {
        let mut out = vec![0; self.moduli.len()];
        for (slot, &n) in out.iter_mut().zip(&self.moduli).rev() {
            *slot = (i as u64) % n;
            i /= n as usize;
        }
        out
    }

    pub fn index(&self, x: &[u64]) -> usize {
        x.iter().zip(&self.moduli).fold(0usize, |acc, (&v, &n)| acc * n as usize + (v % n) as usize)
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        let (a, b) = (self.element(i), self.element(j));
        self.index(&a.iter().zip(&b).zip(&self.moduli).map(|((x, y), n)| (x + y) % n).collect::<Vec<_>>())
    }

    pub fn neg(&self, i: usize) -> usize {
        let a = self.element(i);
        self.index(&a.iter().zip(&self.moduli).map(|(x, n)| (n - x) % n).collect::<Vec<_>>())
    }

    pub fn sub(&self, i: usize, j: usize) -> usize {
        self.add(i, self.neg(j))
    }

    /// `k` with `χ_c(x) = ζ_e^k`.
    pub fn pairing_exponent(&self, c: usize, x: usize) -> u64 {
        let e = self.exponent();
        let (c, x) = (self.element(c), self.element(x));
        c.iter().zip(&x).zip(&self.moduli).map(|((a, b), n)| (a * b % n) * (e / n)).sum::<u64>() % e
    }

    /// `χ_c(x)`.
    pub fn pairing(&self, c: usize, x: usize) -> Cyclotomic {
        Cyclotomic::zeta_pow(&self.field, self.pairing_exponent(c, x) as i64)
    }

    /// Every nontrivial character takes a nontrivial value somewhere.
    pub fn pairing_nondegenerate(&self) -> bool {
        (1..self.order()).all(|c| (0..self.order()).any(|x| self.pairing_exponent(c, x) != 0))
    }
}

impl fmt::Display for FiniteAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moduli.is_empty() {
            return write!(f, "Z1");
        }
        let parts: Vec<String> = self.moduli.iter().map(|n| format!("Z{n}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Function on `rows × cols` with values in `Q(ζ_e)`; composition sums
/// over the middle group.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    rows: FiniteAbGroup,
    cols: FiniteAbGroup,
    values: Vec<Cyclotomic>,
}

impl Kernel {
    pub fn from_fn(rows: &FiniteAbGroup, cols: &FiniteAbGroup, f: impl Fn(usize, usize) -> Cyclotomic) -> Result<Self> {
        if rows.exponent() != cols.exponent() {
            return Err(Error::GroupMismatch(format!("{rows} and {cols} have different exponents")));
        }
        let values = (0..rows.order()).flat_map(|x| (0..cols.order()).map(move |y| (x, y))).map(|(x, y)| f(x, y)).collect();
        Ok(Kernel { rows: rows.clone(), cols: cols.clone(), values })
    }

    pub fn zero(rows: &FiniteAbGroup, cols: &FiniteAbGroup) -> Result<Self> {
        let f = rows.field().clone();
        Self::from_fn(rows, cols, |_, _| Cyclotomic::zero(&f))
    }

    /// `Δ`, the unit for composition.
    pub fn diagonal(g: &FiniteAbGroup) -> Self {
        let f = g.field().clone();
        Self::from_fn(g, g, |x, y| if x == y { Cyclotomic::one(&f) } else { Cyclotomic::zero(&f) })
            .expect("same group")
    }

    /// Dense kernel with coefficients drawn from `-2..=2`.
    pub fn random<R: Rng>(rows: &FiniteAbGroup, cols: &FiniteAbGroup, rng: &mut R) -> Result<Self> {
        let f = rows.field().clone();
        let n = f.degree();
        let vals: Vec<Cyclotomic> = (0..rows.order() * cols.order())
            .map(|_| Cyclotomic::from_coeffs(&f, (0..n).map(|_| int(rng.random_range(-2..=2))).collect()))
            .collect();
        Self::from_fn(rows, cols, |x, y| vals[x * cols.order() + y].clone())
    }

    pub fn rows(&self) -> &FiniteAbGroup {
        &self.rows
    }

    pub fn cols(&self) -> &FiniteAbGroup {
        &self.cols
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        self.rows.field()
    }

    pub fn get(&self, x: usize, y: usize) -> &Cyclotomic {
        &self.values[x * self.cols.order() + y]
    }

    /// `(K∘L)(x, z) = Σ_y K(x, y) L(y, z)`.
    pub fn circle(&self, other: &Kernel) -> Result<Kernel> {
        if self.cols != other.rows {
            return Err(Error::GroupMismatch(format!("cannot compose over {} and {}", self.cols, other.rows)));
        }
        let f = self.field().clone();
        let (n, m, k) = (self.rows.order(), self.cols.order(), other.cols.order());
        let mut values = vec![Cyclotomic::zero(&f); n * k];
        for x in 0..n {
            for y in 0..m {
                let a = self.get(x, y);
                if a.is_zero() {
                    continue;
                }
                for z in 0..k {
                    let b = other.get(y, z);
                    if !b.is_zero() {
                        values[x * k + z] = &values[x * k + z] + &(a * b);
                    }
                }
            }
        }
        Ok(Kernel { rows: self.rows.clone(), cols: other.cols.clone(), values })
    }

    pub fn scale(&self, c: &Cyclotomic) -> Kernel {
        Kernel { rows: self.rows.clone(), cols: self.cols.clone(), values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn add(&self, other: &Kernel) -> Result<Kernel> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::GroupMismatch("kernels live on different groups".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Kernel { rows: self.rows.clone(), cols: self.cols.clone(), values })
    }

    /// First entry where the kernels differ, as group elements.
    pub fn first_difference(&self, other: &Kernel) -> Option<(Vec<u64>, Vec<u64>)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((vec![], vec![]));
        }
        let c = self.cols.order();
        self.values
            .iter()
            .zip(&other.values)
            .position(|(a, b)| a != b)
            .map(|i| (self.rows.element(i / c), self.cols.element(i % c)))
    }
}

/// `P(x, χ) = χ(x)` on `X × X^`.
pub fn poincare(x: &FiniteAbGroup) -> Kernel {
    Kernel::from_fn(x, &x.dual(), |a, c| x.pairing(c, a)).expect("same exponent")
}

/// `Q(χ, x) = χ(x)^{-1}/|X|` on `X^ × X`.
pub fn inverse_kernel(x: &FiniteAbGroup) -> Kernel {
    let inv = frac(1, x.order() as i64);
    let e = x.exponent() as i64;
    Kernel::from_fn(&x.dual(), x, |c, a| {
        Cyclotomic::zeta_pow(x.field(), e - x.pairing_exponent(c, a) as i64).scale(&inv)
    })
    .expect("same exponent")
}

fn square_group(k: &Kernel) -> Result<&FiniteAbGroup> {
    if k.rows != k.cols {
        return Err(Error::GroupMismatch(format!("kernel on {}×{} is not square", k.rows, k.cols)));
    }
    Ok(&k.rows)
}

/// `Φ(K) = P∘K∘Q`, taking kernels on `X^ × X^` to kernels on `X × X`.
pub fn transform_kernel(k: &Kernel) -> Result<Kernel> {
    let x = square_group(k)?;
    poincare(x).circle(k)?.circle(&inverse_kernel(x))
}

/// `Φ^{-1}(K') = Q∘K'∘P`.
pub fn inverse_transform(k: &Kernel) -> Result<Kernel> {
    let x = square_group(k)?;
    inverse_kernel(x).circle(k)?.circle(&poincare(x))
}

/// `K(a, b) = c·ψ(a)·[b = a + x]` on `G × G`, with `ψ = χ_twist`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransKernel {
    pub group: FiniteAbGroup,
    pub shift: usize,
    pub twist: usize,
    pub scalar: Cyclotomic,
}

impl TransKernel {
    pub fn new(group: &FiniteAbGroup, shift: usize, twist: usize) -> Self {
        TransKernel { group: group.clone(), shift, twist, scalar: Cyclotomic::one(group.field()) }
    }

    pub fn to_kernel(&self) -> Kernel {
        let g = &self.group;
        let f = g.field().clone();
        Kernel::from_fn(g, g, |a, b| {
            if b == g.add(a, self.shift) {
                &self.scalar * &g.pairing(self.twist, a)
            } else {
                Cyclotomic::zero(&f)
            }
        })
        .expect("same group")
    }

    /// `ψ'(x)`, the scalar in `(x, ψ)∘(x', ψ') = ψ'(x)·(x + x', ψψ')`.
    pub fn cocycle(&self, other: &TransKernel) -> Cyclotomic {
        self.group.pairing(other.twist, self.shift)
    }

    pub fn compose(&self, other: &TransKernel) -> TransKernel {
        let g = &self.group;
        TransKernel {
            group: g.clone(),
            shift: g.add(self.shift, other.shift),
            twist: g.add(self.twist, other.twist),
            scalar: &(&self.scalar * &other.scalar) * &self.cocycle(other),
        }
    }

    /// Reads a kernel as a scaled shift/twist kernel, if it is one.
    pub fn recognize(k: &Kernel) -> Option<TransKernel> {
        let g = square_group(k).ok()?;
        let n = g.order();
        let support: Vec<usize> = (0..n).filter(|&b| !k.get(0, b).is_zero()).collect();
        let [shift] = support[..] else { return None };
        let scalar = k.get(0, shift).clone();
        let inv = scalar.inverse()?;
        let twist = (0..n).find(|&t| {
            (0..n).all(|a| {
                (0..n).all(|b| {
                    let v = k.get(a, b);
                    if b == g.add(a, shift) {
                        (v * &inv) == g.pairing(t, a)
                    } else {
                        v.is_zero()
                    }
                })
            })
        })?;
        Some(TransKernel { group: g.clone(), shift, twist, scalar })
    }

    /// `Φ` in closed form: shift and twist are exchanged, the new twist is
    /// inverted and the scalar picks up `χ_shift(twist)^{-1}`.
    pub fn transform_closed_form(&self) -> TransKernel {
        let g = &self.group;
        let e = g.exponent() as i64;
        let c = Cyclotomic::zeta_pow(g.field(), e - g.pairing_exponent(self.shift, self.twist) as i64);
        TransKernel { group: g.clone(), shift: self.twist, twist: g.neg(self.shift), scalar: &self.scalar * &c }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ExchangeCase {
    pub shift: Vec<u64>,
    pub twist: Vec<u64>,
    pub image_shift: Option<Vec<u64>>,
    pub image_twist: Option<Vec<u64>>,
    pub scalar: Option<String>,
    /// The image is a shift/twist kernel with shift = old twist and
    /// twist = inverse of old shift.
    pub exchanged: bool,
    pub matches_closed_form: bool,
}

/// Transforms every shift/twist kernel on `X^ × X^` densely and reads the
/// result back as a shift/twist kernel on `X × X`.
pub fn shift_twist_exchange(x: &FiniteAbGroup) -> Result<Vec<ExchangeCase>> {
    let (p, q) = (poincare(x), inverse_kernel(x));
    let mut out = Vec::with_capacity(x.order() * x.order());
    for s in 0..x.order() {
        for t in 0..x.order() {
            let tk = TransKernel::new(x, s, t);
            let image = p.circle(&tk.to_kernel())?.circle(&q)?;
            let rec = TransKernel::recognize(&image);
            let closed = tk.transform_closed_form();
            out.push(ExchangeCase {
                shift: x.element(s),
                twist: x.element(t),
                image_shift: rec.as_ref().map(|r| x.element(r.shift)),
                image_twist: rec.as_ref().map(|r| x.element(r.twist)),
                scalar: rec.as_ref().map(|r| r.scalar.to_string()),
                exchanged: rec.as_ref().is_some_and(|r| r.shift == t && r.twist == x.neg(s)),
                matches_closed_form: rec.as_ref() == Some(&closed),
            });
        }
    }
    Ok(out)
}

/// Twisted group algebra spanned by the unit-scalar shift/twist kernels
/// of a finite subgroup of `G × G^`.
#[derive(Clone, Debug)]
pub struct QuasiSpecialAlgebra {
    group: FiniteAbGroup,
    basis: Vec<(usize, usize)>,
    index: BTreeMap<(usize, usize), usize>,
    /// `b_i ∘ b_j = c · b_k`, stored as `(k, c)`.
    table: Vec<Vec<(usize, Cyclotomic)>>,
}

impl QuasiSpecialAlgebra {
    /// Closure of `gens` (pairs of shift and twist indices) under
    /// composition; `NotClosed` if the rank would exceed `max_rank`.
    pub fn generate(group: &FiniteAbGroup, gens: &[(usize, usize)], max_rank: usize) -> Result<Self> {
        let n = group.order();
        if gens.iter().any(|&(s, t)| s >= n || t >= n) {
            return Err(Error::GroupMismatch(format!("generator outside {group}")));
        }
        let mut seen = std::collections::BTreeSet::from([(0usize, 0usize)]);
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        while let Some((s, t)) = queue.pop_front() {
            for &(gs, gt) in gens {
                let p = (group.add(s, gs), group.add(t, gt));
                if seen.insert(p) {
                    if seen.len() > max_rank {
                        return Err(Error::NotClosed(max_rank));
                    }
                    queue.push_back(p);
                }
            }
        }
        Ok(Self::from_basis(group, seen.into_iter().collect()))
    }

    fn from_basis(group: &FiniteAbGroup, basis: Vec<(usize, usize)>) -> Self {
        let index: BTreeMap<(usize, usize), usize> = basis.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let table = basis
            .iter()
            .map(|&(s, t)| {
                basis
                    .iter()
                    .map(|&(s2, t2)| (index[&(group.add(s, s2), group.add(t, t2))], group.pairing(t2, s)))
                    .collect()
            })
            .collect();
        QuasiSpecialAlgebra { group: group.clone(), basis, index, table }
    }

    pub fn group(&self) -> &FiniteAbGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// `(shift, twist)` index pairs.
    pub fn basis(&self) -> &[(usize, usize)] {
        &self.basis
    }

    pub fn index_of(&self, shift: usize, twist: usize) -> Option<usize> {
        self.index.get(&(shift, twist)).copied()
    }

    pub fn unit(&self) -> usize {
        self.index[&(0, 0)]
    }

    pub fn product(&self, i: usize, j: usize) -> &(usize, Cyclotomic) {
        &self.table[i][j]
    }

    pub fn basis_kernel(&self, i: usize) -> TransKernel {
        let (s, t) = self.basis[i];
        TransKernel::new(&self.group, s, t)
    }

    /// First `(i, j)` where the table disagrees with composing the
    /// kernels densely.
    pub fn cocycle_failure(&self) -> Option<(usize, usize)> {
        let kernels: Vec<Kernel> = (0..self.rank()).map(|i| self.basis_kernel(i).to_kernel()).collect();
        (0..self.rank()).flat_map(|i| (0..self.rank()).map(move |j| (i, j))).find(|&(i, j)| {
            let (k, c) = &self.table[i][j];
            kernels[i].circle(&kernels[j]).expect("same group") != kernels[*k].scale(c)
        })
    }

    pub fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let r = self.rank();
        for i in 0..r {
            for j in 0..r {
                let (ij, c1) = &self.table[i][j];
                for k in 0..r {
                    let (l1, c2) = &self.table[*ij][k];
                    let (jk, c3) = &self.table[j][k];
                    let (l2, c4) = &self.table[i][*jk];
                    if l1 != l2 || c1 * c2 != c3 * c4 {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.rank()).all(|i| (0..i).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// `c` with `b_i b_j = c · b_j b_i`.
    pub fn commutator_scalar(&self, i: usize, j: usize) -> Cyclotomic {
        &self.table[i][j].1 * &self.table[j][i].1.inverse().expect("roots of unity")
    }
}

#[derive(Clone, Debug)]
pub struct TransformedAlgebra {
    pub algebra: QuasiSpecialAlgebra,
    /// `Φ(b_i) = λ_i · b'_i`.
    pub scalars: Vec<Cyclotomic>,
    /// Every `Φ(b_i)` is a shift/twist kernel with exchanged data.
    pub basiswise: bool,
    /// First `(i, j)` with `Φ(b_i∘b_j) ≠ Φ(b_i)∘Φ(b_j)`.
    pub multiplicativity_failure: Option<(usize, usize)>,
    /// First `(i, j)` where the constants of `A`, moved through `λ`,
    /// differ from those of `Φ(A)`.
    pub transport_failure: Option<(usize, usize)>,
}

impl TransformedAlgebra {
    pub fn passed(&self) -> bool {
        self.basiswise && self.multiplicativity_failure.is_none() && self.transport_failure.is_none()
    }
}

/// Applies `Φ` to every basis kernel of `a` (an algebra on `X^`), yielding
/// the transformed algebra on `X`.
pub fn transform_algebra(a: &QuasiSpecialAlgebra) -> Result<TransformedAlgebra> {
    let g = a.group();
    let images: Vec<Kernel> =
        (0..a.rank()).map(|i| transform_kernel(&a.basis_kernel(i).to_kernel())).collect::<Result<_>>()?;
    let recognized: Vec<Option<TransKernel>> = images.iter().map(TransKernel::recognize).collect();
    let basiswise = recognized.iter().zip(a.basis()).all(|(r, &(s, t))| {
        r.as_ref().is_some_and(|r| r.shift == t && r.twist == g.neg(s))
    });
    let new_basis: Vec<(usize, usize)> = a.basis().iter().map(|&(s, t)| (t, g.neg(s))).collect();
    let mut sorted = new_basis.clone();
    sorted.sort();
    let algebra = QuasiSpecialAlgebra::from_basis(g, sorted);
    let scalars: Vec<Cyclotomic> = recognized
        .iter()
        .map(|r| r.as_ref().map_or_else(|| Cyclotomic::zero(g.field()), |r| r.scalar.clone()))
        .collect();
    let mut multiplicativity_failure = None;
    let mut transport_failure = None;
    'outer: for i in 0..a.rank() {
        for j in 0..a.rank() {
            let (k, c) = a.product(i, j);
            if images[i].circle(&images[j])? != images[*k].scale(c) {
                multiplicativity_failure = Some((i, j));
                break 'outer;
            }
        }
    }
    if basiswise {
        let idx = |i: usize| algebra.index_of(new_basis[i].0, new_basis[i].1).expect("basis pair");
        'outer2: for i in 0..a.rank() {
            for j in 0..a.rank() {
                let (k, c) = a.product(i, j);
                let moved = &(c * &scalars[*k]) * &(&scalars[i] * &scalars[j]).inverse().expect("nonzero");
                if algebra.product(idx(i), idx(j)) != &(idx(*k), moved) {
                    transport_failure = Some((i, j));
                    break 'outer2;
                }
            }
        }
    }
    Ok(TransformedAlgebra { algebra, scalars, basiswise, multiplicativity_failure, transport_failure })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RoundTripReport {
    /// The basis pair `(s, t)` returns as `(-s, -t)`.
    pub inversion: bool,
    /// Composite scalars of the two transforms, as strings.
    pub scalars: Vec<String>,
    /// Structure constants of `ΦΦ(A)` equal those of `A` moved along the
    /// inversion and the composite scalars.
    pub constants_match: bool,
}

/// Transforms twice, identifying `X^^` with `X` through the indexing.
pub fn double_transform(a: &QuasiSpecialAlgebra) -> Result<RoundTripReport> {
    let g = a.group();
    let once = transform_algebra(a)?;
    let twice = transform_algebra(&once.algebra)?;
    let mid = |i: usize| {
        let (s, t) = a.basis()[i];
        once.algebra.index_of(t, g.neg(s)).expect("basis pair")
    };
    let end = |i: usize| {
        let (s, t) = a.basis()[i];
        twice.algebra.index_of(g.neg(s), g.neg(t))
    };
    let inversion = (0..a.rank()).all(|i| end(i).is_some()) && once.basiswise && twice.basiswise;
    if !inversion {
        return Ok(RoundTripReport { inversion, scalars: vec![], constants_match: false });
    }
    let mu: Vec<Cyclotomic> = (0..a.rank()).map(|i| &once.scalars[i] * &twice.scalars[mid(i)]).collect();
    let constants_match = (0..a.rank()).all(|i| {
        (0..a.rank()).all(|j| {
            let (k, c) = a.product(i, j);
            let moved = &(c * &mu[*k]) * &(&mu[i] * &mu[j]).inverse().expect("nonzero");
            twice.algebra.product(end(i).unwrap(), end(j).unwrap()) == &(end(*k).unwrap(), moved)
        })
    });
    Ok(RoundTripReport { inversion, scalars: mu.iter().map(ToString::to_string).collect(), constants_match })
}

/// Fibers `m(x) ∈ Q(ζ_e)^r` over the elements of a group; kernels act by
/// `(K·m)(x) = Σ_y K(x, y) m(y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedModule {
    pub group: FiniteAbGroup,
    pub rank: usize,
    pub fibers: Vec<Vec<Cyclotomic>>,
}

impl GradedModule {
    pub fn random<R: Rng>(group: &FiniteAbGroup, rank: usize, rng: &mut R) -> Self {
        let f = group.field();
        let fibers = (0..group.order())
            .map(|_| {
                (0..rank)
                    .map(|_| Cyclotomic::from_coeffs(f, (0..f.degree()).map(|_| int(rng.random_range(-3..=3))).collect()))
                    .collect()
            })
            .collect();
        GradedModule { group: group.clone(), rank, fibers }
    }

    /// `m = e_x`, rank one.
    pub fn delta(group: &FiniteAbGroup, x: usize) -> Self {
        let f = group.field();
        let fibers = (0..group.order())
            .map(|y| vec![if y == x { Cyclotomic::one(f) } else { Cyclotomic::zero(f) }])
            .collect();
        GradedModule { group: group.clone(), rank: 1, fibers }
    }

    pub fn act(&self, k: &Kernel) -> Result<GradedModule> {
        if k.cols() != &self.group {
            return Err(Error::GroupMismatch(format!("kernel on {} cannot act on a module over {}", k.cols(), self.group)));
        }
        let f = self.group.field();
        let fibers = (0..k.rows().order())
            .map(|x| {
                (0..self.rank)
                    .map(|r| {
                        (0..self.group.order()).fold(Cyclotomic::zero(f), |acc, y| {
                            let a = k.get(x, y);
                            if a.is_zero() {
                                acc
                            } else {
                                &acc + &(a * &self.fibers[y][r])
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(GradedModule { group: k.rows().clone(), rank: self.rank, fibers })
    }

    pub fn scale(&self, c: &Cyclotomic) -> GradedModule {
        GradedModule {
            group: self.group.clone(),
            rank: self.rank,
            fibers: self.fibers.iter().map(|v| v.iter().map(|a| a * c).collect()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.fibers.iter().flatten().all(Cyclotomic::is_zero)
    }
}

#[derive(Clone, Debug)]
pub struct ModuleTransform {
    /// `Φ(m) = P·m`, a module over `X`.
    pub image: GradedModule,
    /// First basis index `i` with `Φ(b_i·m) ≠ Φ(b_i)·Φ(m)`.
    pub functoriality_failure: Option<usize>,
    /// `Q·Φ(m) = m`.
    pub round_trip: bool,
}

/// Transforms a module over `a` (an algebra on `X^`) with the kernel `P`
/// and checks compatibility with the transformed action.
pub fn transform_module(a: &QuasiSpecialAlgebra, m: &GradedModule) -> Result<ModuleTransform> {
    let g = a.group();
    if &m.group != g {
        return Err(Error::GroupMismatch(format!("module over {} for an algebra on {g}", m.group)));
    }
    let kernels: Vec<Kernel> = (0..a.rank()).map(|i| a.basis_kernel(i).to_kernel()).collect();
    let actions: Vec<GradedModule> = kernels.iter().map(|k| m.act(k)).collect::<Result<_>>()?;
    for i in 0..a.rank() {
        for j in 0..a.rank() {
            let (k, c) = a.product(i, j);
            if actions[j].act(&kernels[i])? != actions[*k].scale(c) {
                return Err(Error::NotAModule(format!(
                    "b{i}·(b{j}·m) ≠ ({c})·b{k}·m for basis pairs {:?}, {:?}",
                    a.basis()[i],
                    a.basis()[j]
                )));
            }
        }
    }
    let p = poincare(g);
    let image = m.act(&p)?;
    let mut functoriality_failure = None;
    for (i, k) in kernels.iter().enumerate() {
        if actions[i].act(&p)? != image.act(&transform_kernel(k)?)? {
            functoriality_failure = Some(i);
            break;
        }
    }
    let round_trip = &image.act(&inverse_kernel(g))? == m;
    Ok(ModuleTransform { image, functoriality_failure, round_trip })
}

/// Rational `1/|X|` as a field element, for reports.
pub fn normalization(x: &FiniteAbGroup) -> Q {
    frac(1, x.order() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(m: &[u64]) -> FiniteAbGroup {
        FiniteAbGroup::new(m.to_vec()).unwrap()
    }

    #[test]
    fn group_arithmetic() {
        let x = g(&[2, 4]);
        assert_eq!(x.order(), 8);
        assert_eq!(x.exponent(), 4);
        assert_eq!(x.element(5), vec![1, 1]);
        assert_eq!(x.index(&[1, 1]), 5);
        assert_eq!(x.element(x.add(5, 7)), vec![0, 0]);
        assert_eq!(x.neg(5), 7);
        assert!(x.pairing_nondegenerate());
        assert_eq!(x.to_string(), "Z2xZ4");
        assert!(matches!(FiniteAbGroup::new(vec![0]), Err(Error::ZeroModulus)));
    }

    #[test]
    fn z2_poincare() {
        let x = g(&[2]);
        let p = poincare(&x);
        let vals: Vec<String> = (0..2).flat_map(|a| (0..2).map(move |c| (a, c))).map(|(a, c)| p.get(a, c).to_string()).collect();
        assert_eq!(vals, ["1", "1", "1", "-1"]);
        assert_eq!(p.circle(&inverse_kernel(&x)).unwrap(), Kernel::diagonal(&x));
    }

    #[test]
    fn z3_primitive_character() {
        let x = g(&[3]);
        assert_eq!(x.pairing(1, 1), Cyclotomic::zeta_pow(x.field(), 1));
    }

    #[test]
    fn trivial_group() {
        let x = g(&[1]);
        assert_eq!(poincare(&x), Kernel::diagonal(&x));
        assert_eq!(inverse_kernel(&x), Kernel::diagonal(&x));
    }

    #[test]
    fn transform_inverts() {
        let x = g(&[4]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let k = Kernel::random(&x, &x, &mut rng).unwrap();
        let l = Kernel::random(&x, &x, &mut rng).unwrap();
        assert_eq!(inverse_transform(&transform_kernel(&k).unwrap()).unwrap(), k);
        assert_eq!(transform_kernel(&Kernel::diagonal(&x)).unwrap(), Kernel::diagonal(&x));
        let lhs = transform_kernel(&k.circle(&l).unwrap()).unwrap();
        let rhs = transform_kernel(&k).unwrap().circle(&transform_kernel(&l).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(k.circle(&poincare(&g(&[2]))).is_err());
    }

    #[test]
    fn exchange_on_z6() {
        let cases = shift_twist_exchange(&g(&[6])).unwrap();
        assert_eq!(cases.len(), 36);
        assert!(cases.iter().all(|c| c.exchanged && c.matches_closed_form));
    }

    #[test]
    fn translation_algebra_is_commutative() {
        let x = g(&[4]);
        let a = QuasiSpecialAlgebra::generate(&x, &[(1, 0)], 64).unwrap();
        assert_eq!(a.rank(), 4);
        assert!(a.is_commutative());
        assert!(a.cocycle_failure().is_none());
    }

    #[test]
    fn heisenberg_commutator() {
        let x = g(&[4]);
        let a = QuasiSpecialAlgebra::generate(&x, &[(1, 0), (0, 1)], 64).unwrap();
        assert_eq!(a.rank(), 16);
        let (s, t) = (a.index_of(1, 0).unwrap(), a.index_of(0, 1).unwrap());
        // b_s b_t = ψ(x) · b_t b_s with x = 1, ψ = χ_1
        assert_eq!(a.commutator_scalar(s, t), x.pairing(1, 1));
        assert!(!a.commutator_scalar(s, t).is_one());
        assert!(a.associativity_failure().is_none());
        assert!(matches!(QuasiSpecialAlgebra::generate(&x, &[(1, 0), (0, 1)], 8), Err(Error::NotClosed(8))));
    }

    #[test]
    fn transform_of_translations_is_twists() {
        let x = g(&[4]);
        let a = QuasiSpecialAlgebra::generate(&x, &[(1, 0)], 64).unwrap();
        let t = transform_algebra(&a).unwrap();
        assert!(t.passed());
        assert!(t.algebra.basis().iter().all(|&(s, _)| s == 0));
        let rt = double_transform(&a).unwrap();
        assert!(rt.inversion && rt.constants_match);
    }

    #[test]
    fn fourier_of_delta_is_constant() {
        let x = g(&[3]);
        let a = QuasiSpecialAlgebra::generate(&x, &[], 1).unwrap();
        let m = GradedModule::delta(&x, 0);
        let t = transform_module(&a, &m).unwrap();
        assert!(t.image.fibers.iter().all(|v| v[0].is_one()));
        assert!(t.round_trip && t.functoriality_failure.is_none());
    }
}

//! Exact arithmetic in `Q(ζ_e)`, elements stored as residues modulo the
//! `e`-th cyclotomic polynomial in the power basis `1, ζ, …, ζ^{φ(e)-1}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::linalg::{solve_affine, SparseVec};
use crate::rational::{self, Q};

fn poly_divide(num: &[Q], den: &[Q]) -> Vec<Q> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let lead = &den[dd];
    let mut quot = vec![Q::zero(); r.len().saturating_sub(dd)];
    for k in (0..quot.len()).rev() {
        let c = &r[k + dd] / lead;
        for (i, d) in den.iter().enumerate() {
            r[k + i] -= &c * d;
        }
        quot[k] = c;
    }
    debug_assert!(r.iter().all(Zero::is_zero));
    quot
}

/// `Q(ζ_e)` with the minimal polynomial `Φ_e` and the table of `ζ^k`.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    e: u64,
    /// Monic `Φ_e`, lowest coefficient first.
    modulus: Vec<Q>,
    powers: Vec<Vec<Q>>,
}

impl CyclotomicField {
    pub fn new(e: u64) -> Arc<Self> {
        assert!(e >= 1, "cyclotomic order must be positive");
        let modulus = Self::cyclotomic_polynomial(e);
        let deg = modulus.len() - 1;
        let mut powers = Vec::with_capacity(e as usize);
        let mut cur = vec![Q::zero(); deg];
        cur[0] = Q::one();
        for _ in 0..e {
            powers.push(cur.clone());
            cur = Self::shift_reduce(&cur, &modulus);
        }
        Arc::new(CyclotomicField { e, modulus, powers })
    }

    fn cyclotomic_polynomial(e: u64) -> Vec<Q> {
        let mut p = vec![Q::zero(); e as usize + 1];
        p[0] = -Q::one();
        p[e as usize] = Q::one();
        for d in (1..e).filter(|d| e.is_multiple_of(*d)) {
            p = poly_divide(&p, &Self::cyclotomic_polynomial(d));
        }
        p
    }

    fn shift_reduce(v: &[Q], modulus: &[Q]) -> Vec<Q> {
        let deg = v.len();
        let top = v[deg - 1].clone();
        let mut out = vec![Q::zero(); deg];
        for i in 1..deg {
            out[i] = v[i - 1].clone();
        }
        for i in 0..deg {
            out[i] -= &top * &modulus[i];
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.e
    }

    /// `φ(e)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[Q] {
        &self.modulus
    }
}

/// Element of a cyclotomic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Q>,
}

impl Cyclotomic {
    pub fn from_coeffs(field: &Arc<CyclotomicField>, coeffs: Vec<Q>) -> Self {
        assert_eq!(coeffs.len(), field.degree(), "coefficient vector has wrong length");
        Cyclotomic { field: field.clone(), coeffs }
    }

    pub fn rational(field: &Arc<CyclotomicField>, q: Q) -> Self {
        let mut coeffs = vec![Q::zero(); field.degree()];
        coeffs[0] = q;
        Self::from_coeffs(field, coeffs)
    }

    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Self::rational(field, Q::zero())
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::rational(field, Q::one())
    }

    /// `ζ^k`, any integer `k`.
    pub fn zeta_pow(field: &Arc<CyclotomicField>, k: i64) -> Self {
        let k = k.rem_euclid(field.e as i64) as usize;
        Self::from_coeffs(field, field.powers[k].clone())
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Q> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    pub fn scale(&self, q: &Q) -> Self {
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    fn check_field(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field.e == other.field.e,
            "elements of different cyclotomic fields"
        );
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.field.degree();
        // columns: self · ζ^j
        let cols: Vec<Cyclotomic> = (0..n).map(|j| self * &Self::zeta_pow(&self.field, j as i64)).collect();
        let eqs: Vec<(SparseVec, Q)> = (0..n)
            .map(|r| {
                let row = (0..n).filter(|&j| !cols[j].coeffs[r].is_zero()).map(|j| (j, cols[j].coeffs[r].clone())).collect();
                (row, if r == 0 { Q::one() } else { Q::zero() })
            })
            .collect();
        let sol = solve_affine(&eqs, n).particular?;
        Some(Self::from_coeffs(&self.field, sol))
    }

    /// If the element is `c·ζ^k` for rational `c`, returns `(c, k)` with
    /// the smallest such `k`.
    pub fn as_root_multiple(&self) -> Option<(Q, u64)> {
        (0..self.field.e).find_map(|k| {
            let r = self * &Self::zeta_pow(&self.field, -(k as i64));
            r.as_rational().filter(|c| !c.is_zero()).map(|c| (c, k))
        })
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_field(rhs);
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_field(rhs);
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_field(rhs);
        let n = self.field.degree();
        let mut prod = vec![Q::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in rhs.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                prod[i + j] += a * b;
            }
        }
        let m = &self.field.modulus;
        for k in (n..2 * n - 1).rev() {
            let top = std::mem::replace(&mut prod[k], Q::zero());
            if top.is_zero() {
                continue;
            }
            for i in 0..n {
                prod[k - n + i] -= &top * &m[i];
            }
        }
        prod.truncate(n);
        Cyclotomic { field: self.field.clone(), coeffs: prod }
    }
}

impl fmt::Display for Cyclotomic {
    /// `3/2 + z^2 - z^3` style, `z` standing for `ζ_e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let neg = c < &Q::zero();
            let a = if neg { -c } else { c.clone() };
            let mono = match k {
                0 => rational::format(&a),
                _ => {
                    let z = if k == 1 { "z".to_string() } else { format!("z^{k}") };
                    if a.is_one() {
                        z
                    } else {
                        format!("{}*{z}", rational::format(&a))
                    }
                }
            };
            parts.push(match (parts.is_empty(), neg) {
                (true, false) => mono,
                (true, true) => format!("-{mono}"),
                (false, false) => format!(" + {mono}"),
                (false, true) => format!(" - {mono}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.concat())
        }
    }
}

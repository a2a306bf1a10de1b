//! Finite fields `GF(p^n)` with table-driven arithmetic.
//!
//! Elements are stored in polynomial-basis coordinates packed as the base-`p`
//! integer `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`. That packed integer is also
//! the "lexicographic" order used when a modulus or primitive element has to be
//! chosen: the highest-degree coordinate is the most significant digit.
//!
//! Multiplication goes through log/antilog tables, addition through a Zech
//! logarithm table, and the absolute trace is tabulated for every element, so
//! everything used inside correlation loops is a handful of lookups.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field size accepted by [`FieldSpec::new`].
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

/// An element of a [`FieldSpec`], stored as packed polynomial-basis coordinates.
///
/// A `FieldElement` carries no reference to its field; mixing elements of
/// different fields is a logic error that the field methods cannot detect
/// beyond range checks.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The packed base-`p` encoding of the coordinates.
    pub fn packed(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({})", self.0)
    }
}

/// A concrete model of `GF(p^n)`.
///
/// Immutable once built; all lookup tables are filled by the constructor.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    alpha: FieldElement,
    /// `exp[k] = alpha^k` for `0 <= k < q - 1`.
    exp: Vec<u32>,
    /// `log[x]` for packed `x`; `NO_LOG` at zero.
    log: Vec<u32>,
    /// `zech[d] = log(1 + alpha^d)`, `NO_LOG` when `1 + alpha^d = 0`.
    zech: Vec<u32>,
    trace: Vec<u32>,
    /// log of `-1`.
    neg_one_log: u32,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .field("alpha", &self.coeffs(self.alpha))
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.n == other.n
            && self.modulus == other.modulus
            && self.alpha == other.alpha
    }
}

impl Eq for FieldSpec {}

/// The serialized form of a field: `{p, n, modulus, alpha}` with coefficient
/// lists constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescription {
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
    pub alpha: Vec<u32>,
}

impl FieldSpec {
    /// Builds `GF(p^n)` with the smallest monic irreducible modulus and the
    /// smallest primitive element. Deterministic in `(p, n)`.
    pub fn new(p: u32, n: u32) -> Result<Self> {
        Self::with_cap(p, n, DEFAULT_FIELD_CAP)
    }

    pub fn with_cap(p: u32, n: u32, cap: u64) -> Result<Self> {
        let q = checked_order(p, n, cap)?;
        let modulus = smallest_irreducible(p, n).ok_or(Error::NoIrreducible { p, n })?;
        let alpha = smallest_primitive(p, q, &modulus);
        Ok(Self::from_parts(p, n, q, modulus, alpha))
    }

    /// Rebuilds a field from an explicit modulus and primitive element,
    /// validating both.
    pub fn from_description(desc: &FieldDescription) -> Result<Self> {
        let (p, n) = (desc.p, desc.n);
        let q = checked_order(p, n, DEFAULT_FIELD_CAP)?;
        let modulus = desc.modulus.clone();
        if modulus.len() != n as usize + 1
            || modulus[n as usize] != 1
            || modulus.iter().any(|&c| c >= p)
        {
            return Err(Error::NotIrreducible(modulus));
        }
        let f: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        if !is_irreducible(&f, p as u64) {
            return Err(Error::NotIrreducible(modulus));
        }
        if desc.alpha.len() != n as usize || desc.alpha.iter().any(|&c| c >= p) {
            return Err(Error::InvalidElement(format!("{:?}", desc.alpha)));
        }
        let alpha = pack(&desc.alpha, p);
        if !is_primitive(alpha, p, q, &f) {
            return Err(Error::NotPrimitive(desc.alpha.clone()));
        }
        Ok(Self::from_parts(p, n, q, modulus, alpha))
    }

    pub fn description(&self) -> FieldDescription {
        FieldDescription {
            p: self.p,
            n: self.n,
            modulus: self.modulus.clone(),
            alpha: self.coeffs(self.alpha),
        }
    }

    fn from_parts(p: u32, n: u32, q: u32, modulus: Vec<u32>, alpha: u32) -> Self {
        let f: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        let order = (q - 1) as usize;

        let mut exp = Vec::with_capacity(order);
        let mut log = vec![NO_LOG; q as usize];
        let a = unpack(alpha, p, n);
        let mut cur = vec![0u64; n as usize];
        cur[0] = 1;
        for k in 0..order {
            let packed = pack_u64(&cur, p);
            exp.push(packed);
            log[packed as usize] = k as u32;
            cur = poly_mulmod(&cur, &a, &f, p as u64);
        }

        let mut zech = vec![NO_LOG; order];
        for (d, z) in zech.iter_mut().enumerate() {
            let s = add_digits(1, exp[d], p, n);
            *z = log[s as usize];
        }

        let neg_one_log = if p == 2 { 0 } else { (q - 1) / 2 };

        let mut spec = FieldSpec {
            p,
            n,
            q,
            modulus,
            alpha: FieldElement(alpha),
            exp,
            log,
            zech,
            trace: Vec::new(),
            neg_one_log,
        };
        spec.trace = spec.build_trace_table();
        spec
    }

    /// Trace of every element, using linearity over the basis `1, x, ..., x^{n-1}`.
    fn build_trace_table(&self) -> Vec<u32> {
        let p = self.p;
        let basis_traces: Vec<u32> = (0..self.n)
            .map(|i| {
                let x = FieldElement(p.pow(i));
                self.trace_by_powers(x)
            })
            .collect();
        (0..self.q)
            .map(|packed| {
                let mut rest = packed;
                let mut acc = 0u64;
                for &t in &basis_traces {
                    acc += (rest % p) as u64 * t as u64;
                    rest /= p;
                }
                (acc % p as u64) as u32
            })
            .collect()
    }

    /// `x + x^p + ... + x^{p^{n-1}}`, evaluated directly in the field.
    fn trace_by_powers(&self, x: FieldElement) -> u32 {
        let mut acc = FieldElement::ZERO;
        let mut y = x;
        for _ in 0..self.n {
            acc = self.add(acc, y);
            y = self.frobenius(y, 1);
        }
        debug_assert!(acc.0 < self.p, "trace left the prime subfield");
        acc.0
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Order of the multiplicative group, `q - 1`.
    pub fn unit_order(&self) -> u32 {
        self.q - 1
    }

    /// Monic modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn alpha(&self) -> FieldElement {
        self.alpha
    }

    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.n as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidElement(format!(
                "{coeffs:?} is not a length-{} vector over Z_{}",
                self.n, self.p
            )));
        }
        Ok(FieldElement(pack(coeffs, self.p)))
    }

    pub fn from_packed(&self, packed: u32) -> Result<FieldElement> {
        if packed >= self.q {
            return Err(Error::InvalidElement(format!(
                "packed value {packed} outside GF({})",
                self.q
            )));
        }
        Ok(FieldElement(packed))
    }

    /// Embeds a residue of the prime subfield.
    pub fn from_residue(&self, r: u32) -> FieldElement {
        FieldElement(r % self.p)
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        unpack(x.0, self.p, self.n)
            .into_iter()
            .map(|c| c as u32)
            .collect()
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let order = self.q - 1;
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let d = if lb >= la { lb - la } else { lb + order - la };
        let z = self.zech[d as usize];
        if z == NO_LOG {
            return FieldElement::ZERO;
        }
        FieldElement(self.exp[add_mod(la, z, order) as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        let order = self.q - 1;
        let l = self.log[a.0 as usize];
        FieldElement(self.exp[add_mod(l, self.neg_one_log, order) as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let order = self.q - 1;
        let l = add_mod(self.log[a.0 as usize], self.log[b.0 as usize], order);
        FieldElement(self.exp[l as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.0 == 0 {
            return None;
        }
        let order = self.q - 1;
        let l = self.log[a.0 as usize];
        Some(FieldElement(self.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Option<FieldElement> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let order = (self.q - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (e % order)) % order;
        FieldElement(self.exp[l as usize])
    }

    /// `alpha^k` for any `k` (reduced modulo `q - 1`).
    #[inline]
    pub fn alpha_pow(&self, k: u64) -> FieldElement {
        FieldElement(self.exp[(k % (self.q - 1) as u64) as usize])
    }

    /// The Frobenius power `x^{p^k}`.
    pub fn frobenius(&self, x: FieldElement, k: u32) -> FieldElement {
        if x.0 == 0 {
            return x;
        }
        let order = (self.q - 1) as u64;
        let mut l = self.log[x.0 as usize] as u64;
        for _ in 0..k {
            l = (l * self.p as u64) % order;
        }
        FieldElement(self.exp[l as usize])
    }

    /// Discrete logarithm to base `alpha`, in `[0, q - 1)`.
    pub fn dlog(&self, x: FieldElement) -> Result<u32> {
        if x.0 >= self.q {
            return Err(Error::InvalidElement(format!("{x:?}")));
        }
        match self.log[x.0 as usize] {
            NO_LOG => Err(Error::Domain("discrete logarithm of zero".into())),
            l => Ok(l),
        }
    }

    /// Absolute trace `Tr_{q/p}(x)` as a residue mod `p`.
    #[inline]
    pub fn trace(&self, x: FieldElement) -> u32 {
        self.trace[x.0 as usize]
    }

    /// `Tr(alpha^k)`.
    #[inline]
    pub fn trace_alpha_pow(&self, k: u64) -> u32 {
        self.trace[self.exp[(k % (self.q - 1) as u64) as usize] as usize]
    }

    /// The canonical enumeration: `d_0 = 0`, `d_l = alpha^{l-1}`.
    pub fn element_at(&self, l: u32) -> Result<FieldElement> {
        if l >= self.q {
            return Err(Error::IndexOutOfRange {
                index: l as u64,
                len: self.q as u64,
            });
        }
        Ok(self.element_at_unchecked(l))
    }

    #[inline]
    pub(crate) fn element_at_unchecked(&self, l: u32) -> FieldElement {
        if l == 0 {
            FieldElement::ZERO
        } else {
            FieldElement(self.exp[(l - 1) as usize])
        }
    }

    /// Inverse of [`FieldSpec::element_at`].
    pub fn index_of(&self, x: FieldElement) -> u32 {
        if x.0 == 0 {
            0
        } else {
            self.log[x.0 as usize] + 1
        }
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |l| self.element_at_unchecked(l))
    }

    /// All elements in packed-coordinate order.
    pub fn elements_packed_order(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.description().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let desc = FieldDescription::deserialize(d)?;
        FieldSpec::from_description(&desc).map_err(serde::de::Error::custom)
    }
}

/// Convenience wrapper with the default size cap.
pub fn make_field(p: u32, n: u32) -> Result<FieldSpec> {
    FieldSpec::new(p, n)
}

pub fn is_prime(v: u64) -> bool {
    if v < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= v {
        if v % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(d);
            while v % d == 0 {
                v /= d;
            }
        }
        d += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn checked_order(p: u32, n: u32, cap: u64) -> Result<u32> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if n == 0 {
        return Err(Error::ZeroDegree);
    }
    let too_large = || Error::FieldTooLarge {
        p: p as u64,
        n,
        cap,
    };
    let q = (p as u64).checked_pow(n).ok_or_else(too_large)?;
    if q > cap || q > u32::MAX as u64 {
        return Err(too_large());
    }
    Ok(q as u32)
}

#[inline]
fn add_mod(a: u32, b: u32, m: u32) -> u32 {
    let s = a as u64 + b as u64;
    (s % m as u64) as u32
}

fn pack(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

fn pack_u64(coeffs: &[u64], p: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c as u32)
}

fn unpack(mut v: u32, p: u32, n: u32) -> Vec<u64> {
    (0..n)
        .map(|_| {
            let c = v % p;
            v /= p;
            c as u64
        })
        .collect()
}

fn add_digits(a: u32, b: u32, p: u32, n: u32) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0u32;
    let mut place = 1u32;
    for _ in 0..n {
        let d = (a % p + b % p) % p;
        out += d * place;
        a /= p;
        b /= p;
        place = place.wrapping_mul(p);
    }
    out
}

// --- polynomials over Z_p, constant term first ----------------------------

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime; Fermat.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Remainder of `a` modulo `f` (any nonzero `f`).
fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let f = trim(f.to_vec());
    let mut r = trim(a.to_vec());
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p);
    while r.len() > df {
        let dr = r.len() - 1;
        let coef = r[dr] * lead_inv % p;
        let shift = dr - df;
        for (i, &fc) in f.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - coef * fc % p) % p;
        }
        r = trim(r);
    }
    r
}

/// `a * b mod f`, returned padded to `deg f` coefficients.
fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let n = f.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, f, p);
    r.resize(n, 0);
    r
}

fn poly_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let n = f.len() - 1;
    let mut result = vec![0u64; n.max(1)];
    result[0] = 1;
    let mut b = poly_rem(base, f, p);
    b.resize(n, 0);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &b, f, p);
        }
        b = poly_mulmod(&b, &b, f, p);
        e >>= 1;
    }
    result
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or style test: `f` of degree `n` is irreducible iff it has no factor of
/// degree `i <= n/2`, i.e. `gcd(x^{p^i} - x, f) = 1` for each such `i`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    if f.len() < 2 {
        return false;
    }
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut h = x.clone();
    for _ in 1..=n / 2 {
        h = poly_powmod(&h, p, &f, p);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(&f, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u32, n: u32) -> Option<Vec<u32>> {
    let tails = (p as u64).pow(n);
    (0..tails).find_map(|tail| {
        let mut f: Vec<u64> = unpack(tail as u32, p, n);
        f.push(1);
        is_irreducible(&f, p as u64).then(|| f.iter().map(|&c| c as u32).collect())
    })
}

fn is_primitive(candidate: u32, p: u32, q: u32, f: &[u64]) -> bool {
    if candidate == 0 {
        return false;
    }
    let n = (f.len() - 1) as u32;
    let order = (q - 1) as u64;
    let g = unpack(candidate, p, n);
    let mut one = vec![0u64; n as usize];
    one[0] = 1;
    if poly_powmod(&g, order, f, p as u64) != one {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|r| poly_powmod(&g, order / r, f, p as u64) != one)
}

fn smallest_primitive(p: u32, q: u32, modulus: &[u32]) -> u32 {
    let f: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
    (1..q)
        .find(|&c| is_primitive(c, p, q, &f))
        .expect("every finite field has a primitive element")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Schoolbook multiplication straight from the modulus, bypassing the tables.
    fn naive_mul(fs: &FieldSpec, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = fs.p() as u64;
        let f: Vec<u64> = fs.modulus().iter().map(|&c| c as u64).collect();
        let ca: Vec<u64> = fs.coeffs(a).iter().map(|&c| c as u64).collect();
        let cb: Vec<u64> = fs.coeffs(b).iter().map(|&c| c as u64).collect();
        let r = poly_mulmod(&ca, &cb, &f, p);
        FieldElement(pack_u64(&r, fs.p()))
    }

    fn naive_add(fs: &FieldSpec, a: FieldElement, b: FieldElement) -> FieldElement {
        let ca = fs.coeffs(a);
        let cb = fs.coeffs(b);
        let s: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % fs.p()).collect();
        fs.element(&s).unwrap()
    }

    fn naive_pow(fs: &FieldSpec, a: FieldElement, e: u64) -> FieldElement {
        (0..e).fold(FieldElement::ONE, |acc, _| naive_mul(fs, acc, a))
    }

    #[test]
    fn prime_field_of_two() {
        let fs = make_field(2, 1).unwrap();
        assert_eq!(fs.q(), 2);
        assert_eq!(fs.alpha(), FieldElement::ONE);
        assert_eq!(fs.modulus(), &[0, 1]);
    }

    #[test]
    fn alpha_has_full_order() {
        for (p, n) in [(5, 2), (2, 4), (3, 3), (7, 2), (2, 8)] {
            let fs = make_field(p, n).unwrap();
            let order = (fs.q() - 1) as u64;
            let a = fs.alpha();
            assert_eq!(naive_pow(&fs, a, order), FieldElement::ONE);
            for r in prime_factors(order) {
                assert_ne!(naive_pow(&fs, a, order / r), FieldElement::ONE, "({p},{n})");
            }
        }
    }

    #[test]
    fn smallest_moduli() {
        assert_eq!(make_field(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(make_field(5, 2).unwrap().modulus(), &[2, 0, 1]);
        assert_eq!(make_field(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(make_field(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(make_field(3, 0).unwrap_err(), Error::ZeroDegree);
        assert!(matches!(
            make_field(2, 21).unwrap_err(),
            Error::FieldTooLarge { .. }
        ));
        assert!(FieldSpec::with_cap(3, 3, 26).is_err());
        assert!(FieldSpec::with_cap(3, 3, 27).is_ok());
    }

    #[test]
    fn trace_basics() {
        let fs = make_field(2, 4).unwrap();
        assert_eq!(fs.trace(FieldElement::ZERO), 0);
        let ones = fs.elements().filter(|&x| fs.trace(x) == 1).count();
        assert_eq!(ones, 8);

        let f7 = make_field(7, 1).unwrap();
        for x in f7.elements() {
            assert_eq!(f7.trace(x), x.packed());
        }
    }

    #[test]
    fn trace_table_matches_definition() {
        for (p, n) in [(3, 3), (2, 5), (5, 2)] {
            let fs = make_field(p, n).unwrap();
            for x in fs.elements() {
                assert_eq!(fs.trace(x), fs.trace_by_powers(x));
            }
        }
    }

    #[test]
    fn dlog_examples() {
        let fs = make_field(5, 2).unwrap();
        assert_eq!(fs.dlog(FieldElement::ONE).unwrap(), 0);
        assert_eq!(fs.dlog(fs.alpha()).unwrap(), 1);
        let a7 = (0..7).fold(FieldElement::ONE, |acc, _| naive_mul(&fs, acc, fs.alpha()));
        assert_eq!(fs.dlog(a7).unwrap(), 7);
        assert!(matches!(fs.dlog(FieldElement::ZERO), Err(Error::Domain(_))));
    }

    #[test]
    fn canonical_enumeration() {
        let fs = make_field(2, 4).unwrap();
        assert_eq!(fs.element_at(0).unwrap(), FieldElement::ZERO);
        assert_eq!(fs.element_at(1).unwrap(), FieldElement::ONE);
        assert_eq!(fs.element_at(2).unwrap(), fs.alpha());
        for l in 0..fs.q() {
            assert_eq!(fs.index_of(fs.element_at(l).unwrap()), l);
        }
        assert!(fs.element_at(16).is_err());
    }

    #[test]
    fn arithmetic_agrees_with_schoolbook() {
        for (p, n) in [
            (2, 1),
            (3, 1),
            (2, 3),
            (2, 6),
            (3, 2),
            (5, 2),
            (7, 2),
            (3, 3),
        ] {
            let fs = make_field(p, n).unwrap();
            for a in fs.elements() {
                if let Some(ai) = fs.inv(a) {
                    assert_eq!(fs.mul(a, ai), FieldElement::ONE);
                }
                assert_eq!(fs.add(a, fs.neg(a)), FieldElement::ZERO);
                for b in fs.elements() {
                    assert_eq!(fs.mul(a, b), naive_mul(&fs, a, b));
                    assert_eq!(fs.add(a, b), naive_add(&fs, a, b));
                }
            }
        }
    }

    #[test]
    fn field_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, n) in [(2, 6), (7, 2), (3, 3), (5, 2)] {
            let fs = make_field(p, n).unwrap();
            for _ in 0..10_000 {
                let mut pick = || FieldElement(rng.gen_range(0..fs.q()));
                let (a, b, c) = (pick(), pick(), pick());
                assert_eq!(fs.mul(fs.mul(a, b), c), fs.mul(a, fs.mul(b, c)));
                assert_eq!(fs.add(fs.add(a, b), c), fs.add(a, fs.add(b, c)));
                assert_eq!(fs.mul(a, fs.add(b, c)), fs.add(fs.mul(a, b), fs.mul(a, c)));
            }
        }
    }

    #[test]
    fn alpha_generates_the_unit_group() {
        for (p, n) in [(2, 16), (3, 10), (257, 2), (5, 6)] {
            let fs = make_field(p, n).unwrap();
            let mut seen = vec![false; fs.q() as usize];
            let mut x = FieldElement::ONE;
            for _ in 0..fs.q() - 1 {
                assert!(!seen[x.packed() as usize]);
                seen[x.packed() as usize] = true;
                x = fs.mul(x, fs.alpha());
            }
            assert_eq!(x, FieldElement::ONE);
            assert_eq!(seen.iter().filter(|&&s| s).count() as u32, fs.q() - 1);
        }
    }

    #[test]
    fn frobenius_fixes_trace() {
        for (p, n) in [(2, 12), (3, 7), (5, 5), (7, 4), (11, 3)] {
            let fs = make_field(p, n).unwrap();
            for x in fs.elements() {
                assert_eq!(fs.trace(fs.pow(x, p as u64)), fs.trace(x));
            }
        }
    }

    #[test]
    fn serialization_is_deterministic_and_round_trips() {
        let a = serde_json::to_string(&make_field(5, 2).unwrap()).unwrap();
        let b = serde_json::to_string(&make_field(5, 2).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, r#"{"p":5,"n":2,"modulus":[2,0,1],"alpha":[1,1]}"#);
        let back: FieldSpec = serde_json::from_str(&a).unwrap();
        assert_eq!(back, make_field(5, 2).unwrap());
    }

    #[test]
    fn description_validation() {
        let reducible = FieldDescription {
            p: 2,
            n: 2,
            modulus: vec![1, 0, 1],
            alpha: vec![0, 1],
        };
        assert!(matches!(
            FieldSpec::from_description(&reducible),
            Err(Error::NotIrreducible(_))
        ));
        // x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5.
        let not_primitive = FieldDescription {
            p: 2,
            n: 4,
            modulus: vec![1, 1, 1, 1, 1],
            alpha: vec![0, 1, 0, 0],
        };
        assert!(matches!(
            FieldSpec::from_description(&not_primitive),
            Err(Error::NotPrimitive(_))
        ));
        let other = FieldDescription {
            p: 2,
            n: 4,
            modulus: vec![1, 0, 0, 1, 1],
            alpha: vec![0, 1, 0, 0],
        };
        let fs = FieldSpec::from_description(&other).unwrap();
        assert_eq!(fs.description(), other);
    }
}

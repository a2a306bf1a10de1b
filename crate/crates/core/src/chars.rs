//! Characters of `GF(q)` carried as root-of-unity exponents, and exact sums of
//! roots of unity.
//!
//! A character value `zeta_m^e` is represented by the pair `(e, m)`. Sums of
//! such values are [`CycloSum`]s: a count vector over the powers of `zeta_m`.
//! Nothing here touches floating point until a magnitude or complex value is
//! explicitly requested.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gf::{gcd, is_prime, FieldElement, FieldSpec};

/// `zeta_modulus^value`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct CharExponent {
    value: u32,
    modulus: u32,
}

impl CharExponent {
    pub fn new(value: u64, modulus: u32) -> Self {
        assert!(modulus > 0, "root-of-unity order must be positive");
        CharExponent {
            value: (value % modulus as u64) as u32,
            modulus,
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    /// Re-expresses the same root of unity as a power of `zeta_target`.
    pub fn lift(self, target: u32) -> Result<Self> {
        if target % self.modulus != 0 {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: target,
            });
        }
        let scale = (target / self.modulus) as u64;
        Ok(CharExponent::new(self.value as u64 * scale, target))
    }

    pub fn conj(self) -> Self {
        CharExponent::new((self.modulus - self.value) as u64, self.modulus)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.value as f64 / self.modulus as f64)
    }
}

/// Product of two character values, over the lcm of their orders.
impl std::ops::Mul for CharExponent {
    type Output = CharExponent;

    fn mul(self, other: Self) -> Self {
        let g = gcd(self.modulus as u64, other.modulus as u64);
        let lcm = (self.modulus as u64 / g * other.modulus as u64) as u32;
        let a = self.lift(lcm).expect("lcm is a common multiple");
        let b = other.lift(lcm).expect("lcm is a common multiple");
        CharExponent::new(a.value as u64 + b.value as u64, lcm)
    }
}

/// `chi_a(x) = zeta_p^{Tr(a x)}`.
pub fn additive_char(fs: &FieldSpec, a: FieldElement, x: FieldElement) -> CharExponent {
    CharExponent::new(fs.trace(fs.mul(a, x)) as u64, fs.p())
}

/// `phi_j(x) = zeta_{q-1}^{j log x}` for `x != 0`.
pub fn mult_char(fs: &FieldSpec, j: u32, x: FieldElement) -> Result<CharExponent> {
    let order = fs.unit_order();
    if j >= order {
        return Err(Error::IndexOutOfRange {
            index: j as u64,
            len: order as u64,
        });
    }
    let k = fs.dlog(x)?;
    Ok(CharExponent::new(j as u64 * k as u64, order))
}

/// The quadratic character `eta(x)` as `+1`/`-1`; only defined for odd `q`
/// and nonzero `x`.
pub fn quadratic_char(fs: &FieldSpec, x: FieldElement) -> Result<i64> {
    if fs.p() == 2 {
        return Err(Error::Domain(
            "the quadratic character needs odd characteristic".into(),
        ));
    }
    let k = fs.dlog(x)?;
    Ok(if k % 2 == 0 { 1 } else { -1 })
}

/// Combines an additive value (order `p`) and a multiplicative value (order
/// `q - 1`) into one exponent of `zeta_{p(q-1)}`.
pub fn mixed_exponent(fs: &FieldSpec, additive: u32, multiplicative: u32) -> CharExponent {
    let p = fs.p() as u64;
    let order = fs.unit_order() as u64;
    CharExponent::new(
        additive as u64 % p * order + multiplicative as u64 % order * p,
        (p * order) as u32,
    )
}

/// An exact element `sum_i counts[i] * zeta_m^i` of `Z[zeta_m]`.
///
/// The representation is not canonical for composite `m`; equality of
/// `CycloSum`s is equality of count vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycloSum {
    m: u32,
    counts: Vec<i64>,
}

impl CycloSum {
    pub fn zero(m: u32) -> Self {
        assert!(m > 0, "root-of-unity order must be positive");
        CycloSum {
            m,
            counts: vec![0; m as usize],
        }
    }

    pub fn from_counts(counts: Vec<i64>) -> Self {
        assert!(!counts.is_empty(), "root-of-unity order must be positive");
        CycloSum {
            m: counts.len() as u32,
            counts,
        }
    }

    /// Sums `zeta_m^e` over a stream of exponents.
    pub fn accumulate<I>(m: u32, exponents: I) -> Self
    where
        I: IntoIterator<Item = u32>,
    {
        let mut s = CycloSum::zero(m);
        for e in exponents {
            s.counts[(e % m) as usize] += 1;
        }
        s
    }

    pub fn from_chars<I>(m: u32, values: I) -> Result<Self>
    where
        I: IntoIterator<Item = CharExponent>,
    {
        let mut s = CycloSum::zero(m);
        for v in values {
            s.push(v)?;
        }
        Ok(s)
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    pub fn push(&mut self, v: CharExponent) -> Result<()> {
        let v = v.lift(self.m)?;
        self.counts[v.value as usize] += 1;
        Ok(())
    }

    pub fn add(&self, other: &CycloSum) -> Result<CycloSum> {
        if self.m != other.m {
            return Err(Error::ModulusMismatch {
                left: self.m,
                right: other.m,
            });
        }
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycloSum { m: self.m, counts })
    }

    pub fn scale(&self, factor: i64) -> CycloSum {
        CycloSum {
            m: self.m,
            counts: self.counts.iter().map(|c| c * factor).collect(),
        }
    }

    /// Complex conjugate: exponent `i` maps to `-i mod m`.
    pub fn conj(&self) -> CycloSum {
        let m = self.m as usize;
        let counts = (0..m).map(|i| self.counts[(m - i) % m]).collect();
        CycloSum { m: self.m, counts }
    }

    pub fn is_zero_vector(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// Rewrites the sum over the smallest root-of-unity order that contains
    /// every exponent in its support.
    pub fn reduce(&self) -> CycloSum {
        let d = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .fold(self.m as u64, |g, (i, _)| gcd(g, i as u64));
        let d = d.max(1) as u32;
        if d == 1 {
            return self.clone();
        }
        let m = self.m / d;
        let counts = (0..m).map(|i| self.counts[(i * d) as usize]).collect();
        CycloSum { m, counts }
    }

    /// The exact rational-integer value, or `None` when the sum is not one.
    ///
    /// After [`CycloSum::reduce`], order 1 is an integer outright; for prime
    /// order `r` the only relation is `1 + zeta + ... + zeta^{r-1} = 0`, so the
    /// sum is rational iff `counts[1..]` are all equal. Other orders go through
    /// [`CycloSum::canonical`].
    pub fn as_integer(&self) -> Option<i64> {
        let r = self.reduce();
        if r.m == 1 {
            return Some(r.counts[0]);
        }
        // c (1 + zeta + ... + zeta^{m-1}) = 0 for any m > 1
        if r.counts.iter().all(|&c| c == r.counts[0]) {
            return Some(0);
        }
        if !is_prime(r.m as u64) {
            let c = r.canonical();
            return c[1..].iter().all(|&v| v == 0).then_some(c[0]);
        }
        let tail = r.counts[1];
        r.counts[2..]
            .iter()
            .all(|&c| c == tail)
            .then_some(r.counts[0] - tail)
    }

    pub fn to_complex(&self) -> Complex64 {
        let m = self.m as f64;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| Complex64::from_polar(c as f64, TAU * i as f64 / m))
            .sum()
    }

    pub fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }

    /// Coordinates in the power basis `1, zeta_m, ..., zeta_m^{phi(m)-1}`.
    /// Two sums over the same order are equal iff these agree.
    pub fn canonical(&self) -> Vec<i64> {
        Cyclotomic::new(self.m).reduce(&self.counts)
    }

    /// Exact equality of values, whatever the count vectors look like.
    pub fn value_eq(&self, other: &CycloSum) -> bool {
        let g = gcd(self.m as u64, other.m as u64);
        let lcm = (self.m as u64 / g * other.m as u64) as u32;
        let lift = |s: &CycloSum| {
            let step = (lcm / s.m) as usize;
            let mut counts = vec![0; lcm as usize];
            for (i, &c) in s.counts.iter().enumerate() {
                counts[i * step] = c;
            }
            CycloSum { m: lcm, counts }
        };
        let diff = lift(self).add(&lift(other).scale(-1)).expect("same order");
        diff.canonical().iter().all(|&c| c == 0)
    }
}

/// The cyclotomic polynomial `Phi_m`, used to reduce count vectors to a
/// canonical form.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    m: u32,
    /// Monic, constant term first.
    phi: Vec<i64>,
}

impl Cyclotomic {
    pub fn new(m: u32) -> Self {
        assert!(m > 0, "root-of-unity order must be positive");
        let mut phi = vec![0i64; m as usize + 1];
        phi[0] = -1;
        phi[m as usize] = 1;
        for d in 1..m {
            if m % d == 0 {
                phi = exact_div(&phi, &Cyclotomic::new(d).phi);
            }
        }
        Cyclotomic { m, phi }
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.phi
    }

    /// Remainder of `sum counts[i] x^i` modulo `Phi_m`, padded to `deg Phi_m`.
    pub fn reduce(&self, counts: &[i64]) -> Vec<i64> {
        let deg = self.phi.len() - 1;
        let mut r = counts.to_vec();
        for top in (deg..r.len()).rev() {
            let c = r[top];
            if c != 0 {
                for (j, &f) in self.phi.iter().enumerate() {
                    r[top - deg + j] -= c * f;
                }
            }
        }
        r.resize(deg, 0);
        r
    }
}

/// Quotient of `num` by the monic `den`; the division must be exact.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    let mut r = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for top in (dd..r.len()).rev() {
        let c = r[top];
        quot[top - dd] = c;
        if c != 0 {
            for (j, &f) in den.iter().enumerate() {
                r[top - dd + j] -= c * f;
            }
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    quot
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const SMALL_FIELDS: [(u32, u32); 12] = [
        (2, 1),
        (3, 1),
        (2, 2),
        (5, 1),
        (7, 1),
        (2, 3),
        (3, 2),
        (2, 4),
        (5, 2),
        (3, 3),
        (2, 6),
        (7, 2),
    ];

    #[test]
    fn trivial_characters() {
        let fs = make_field(5, 2).unwrap();
        for x in fs.elements() {
            assert_eq!(additive_char(&fs, FieldElement::ZERO, x).value(), 0);
            assert_eq!(additive_char(&fs, x, FieldElement::ZERO).value(), 0);
            if !x.is_zero() {
                assert_eq!(mult_char(&fs, 0, x).unwrap().value(), 0);
            }
        }
        for j in 0..fs.unit_order() {
            assert_eq!(mult_char(&fs, j, FieldElement::ONE).unwrap().value(), 0);
        }
        assert!(mult_char(&fs, 3, FieldElement::ZERO).is_err());
        assert!(mult_char(&fs, 24, FieldElement::ONE).is_err());
    }

    #[test]
    fn additive_orthogonality() {
        for (p, n) in SMALL_FIELDS.iter().copied().chain([(2, 8), (3, 5), (5, 3)]) {
            let fs = make_field(p, n).unwrap();
            for a in fs.elements() {
                let s = CycloSum::from_chars(p, fs.elements().map(|x| additive_char(&fs, a, x)))
                    .unwrap();
                let expected = if a.is_zero() { fs.q() as i64 } else { 0 };
                assert_eq!(s.as_integer(), Some(expected), "GF({p}^{n}) a={a:?}");
                if !a.is_zero() {
                    let c = s.counts();
                    assert!(c.iter().all(|&v| v == c[0]));
                }
            }
        }
    }

    #[test]
    fn multiplicative_orthogonality() {
        for (p, n) in SMALL_FIELDS.iter().copied().chain([(2, 8), (3, 5), (5, 3)]) {
            let fs = make_field(p, n).unwrap();
            let order = fs.unit_order();
            for j in 0..order {
                let s = CycloSum::from_chars(
                    order,
                    fs.elements().skip(1).map(|x| mult_char(&fs, j, x).unwrap()),
                )
                .unwrap();
                if j == 0 {
                    assert_eq!(s.as_integer(), Some(order as i64));
                } else {
                    // phi_j takes each value of its image equally often: a
                    // full sum over a nontrivial subgroup of roots of unity.
                    let step = (order as u64 / gcd(order as u64, j as u64)) as usize;
                    let hit = s.counts().iter().filter(|&&c| c != 0).count();
                    assert_eq!(hit, step);
                    assert!(s.magnitude() < 1e-9, "GF({p}^{n}) j={j}");
                }
            }
        }
    }

    #[test]
    fn multiplicative_orthogonality_over_f16_exact() {
        // q - 1 = 15 is composite; every nontrivial character sum must still
        // reduce to an all-equal pattern over its own image.
        let fs = make_field(2, 4).unwrap();
        for j in 1..15 {
            let s = CycloSum::from_chars(
                15,
                fs.elements().skip(1).map(|x| mult_char(&fs, j, x).unwrap()),
            )
            .unwrap()
            .reduce();
            let c = s.counts();
            assert!(c.iter().all(|&v| v == c[0]), "j={j}: {c:?}");
        }
    }

    #[test]
    fn integer_extraction() {
        assert_eq!(
            CycloSum::from_counts(vec![3, 1, 1, 1, 1]).as_integer(),
            Some(2)
        );
        assert_eq!(
            CycloSum::from_counts(vec![3, 1, 2, 1, 1]).as_integer(),
            None
        );
        assert_eq!(
            CycloSum::from_counts(vec![0, 0, 7, 0]).as_integer(),
            Some(-7)
        );
        assert_eq!(CycloSum::from_counts(vec![0, 1, 0, 0]).as_integer(), None);
        assert_eq!(
            CycloSum::from_counts(vec![5, 0, 2, 0, 2, 0]).as_integer(),
            Some(3)
        );
        assert_eq!(
            CycloSum::from_counts(vec![4, 0, 0, 0]).as_integer(),
            Some(4)
        );
        assert_eq!(CycloSum::zero(6).as_integer(), Some(0));
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(Cyclotomic::new(1).coefficients(), &[-1, 1]);
        assert_eq!(Cyclotomic::new(4).coefficients(), &[1, 0, 1]);
        assert_eq!(Cyclotomic::new(6).coefficients(), &[1, -1, 1]);
        assert_eq!(Cyclotomic::new(12).coefficients(), &[1, 0, -1, 0, 1]);
        assert_eq!(Cyclotomic::new(14).coefficients().len(), 7);
        // Phi_m(zeta_m) = 0 numerically
        for m in [5u32, 9, 14, 15, 24, 30] {
            let z: Complex64 = Cyclotomic::new(m)
                .coefficients()
                .iter()
                .enumerate()
                .map(|(i, &c)| Complex64::from_polar(c as f64, TAU * i as f64 / m as f64))
                .sum();
            assert!(z.norm() < 1e-9, "m={m}");
        }
    }

    #[test]
    fn canonical_form_decides_equality() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in [6u32, 12, 14, 20, 24] {
            for _ in 0..200 {
                let a: Vec<i64> = (0..m).map(|_| rng.gen_range(-3..4)).collect();
                let sa = CycloSum::from_counts(a.clone());
                // add a random multiple of a vanishing sum zeta^s (1 + zeta^{m/d} + ...)
                let mut b = a.clone();
                let d = *[2u32, m].iter().find(|&&d| m % d == 0).unwrap();
                let shift = rng.gen_range(0..m);
                let k = rng.gen_range(-3..4);
                for j in 0..d {
                    b[((shift + j * (m / d)) % m) as usize] += k;
                }
                let sb = CycloSum::from_counts(b);
                assert!(sa.value_eq(&sb));
                assert_eq!(sa.canonical(), sb.canonical());
                let mut c = a.clone();
                c[rng.gen_range(0..m) as usize] += 1;
                assert!(!sa.value_eq(&CycloSum::from_counts(c)));
                if let Some(v) = sa.as_integer() {
                    assert!((sa.to_complex() - Complex64::new(v as f64, 0.0)).norm() < 1e-9);
                }
            }
        }
        // -1 written as zeta_6 + zeta_6^5 - zeta_6^0 ... = 2 cos(pi/3) - 2 = -1
        let s = CycloSum::from_counts(vec![-2, 1, 0, 0, 0, 1]);
        assert_eq!(s.as_integer(), Some(-1));
        // value across different orders
        let half = CycloSum::from_counts(vec![0, 1]);
        assert!(half.value_eq(&CycloSum::from_counts(vec![-1])));
    }

    #[test]
    fn magnitudes() {
        assert_eq!(CycloSum::zero(24).magnitude(), 0.0);
        let mut c = vec![0; 24];
        c[1] = 24;
        assert!((CycloSum::from_counts(c).magnitude() - 24.0).abs() < 1e-9 * 24.0);
    }

    #[test]
    fn conjugation_preserves_magnitude() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in [2u32, 3, 5, 14, 24, 60] {
            for _ in 0..200 {
                let counts: Vec<i64> = (0..m).map(|_| rng.gen_range(-20..20)).collect();
                let s = CycloSum::from_counts(counts);
                assert!(
                    (s.magnitude() - s.conj().magnitude()).abs() < 1e-12 * (1.0 + s.magnitude())
                );
                let z = s.to_complex().conj();
                assert!((s.conj().to_complex() - z).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn addition_checks_modulus() {
        let a = CycloSum::zero(5);
        let b = CycloSum::zero(7);
        assert_eq!(
            a.add(&b).unwrap_err(),
            Error::ModulusMismatch { left: 5, right: 7 }
        );
        let s = CycloSum::from_counts(vec![1, 2, 3])
            .add(&CycloSum::from_counts(vec![1, 0, 0]))
            .unwrap();
        assert_eq!(s.counts(), &[2, 2, 3]);
    }

    #[test]
    fn mixed_lifting_matches_complex_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, n) in [(2, 3), (3, 2), (5, 2), (7, 1), (2, 5)] {
            let fs = make_field(p, n).unwrap();
            let order = fs.unit_order();
            for _ in 0..2_000 {
                let u = rng.gen_range(0..p);
                let v = rng.gen_range(0..order);
                let add = CharExponent::new(u as u64, p);
                let mul = CharExponent::new(v as u64, order);
                let lifted = mixed_exponent(&fs, u, v);
                assert_eq!(lifted, add * mul);
                let direct = add.to_complex() * mul.to_complex();
                assert!((lifted.to_complex() - direct).norm() < 1e-9);
            }
        }
    }
}

//! Closed-form correlation values.
//!
//! For the four polynomial families every row constant is `f(d_k)` and
//!
//! ```text
//! R(tau) = sum_x sum_{y != 0} chi_1(y (f1(x) - alpha^tau f2(x))) = q (N_F - 1)
//! ```
//!
//! where `N_F` counts the zeros of `F = f1 - alpha^tau f2`. The predictors
//! below decide `N_F` (or the quadratic-character value it reduces to)
//! without touching the `K N` sequence entries.

use std::fmt;

use num_complex::Complex64;

use crate::algebra::{
    count_roots_quadrinomial, count_roots_trinomial, count_zeros, quadratic_gauss_closed_form,
};
use crate::chars::{quadratic_char, CharExponent, CycloSum};
use crate::constructions::{Coefficients, Family, QcssDescriptor};
use crate::error::Result;
use crate::gf::{FieldElement, FieldSpec};

/// A correlation value known in closed form.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Prediction {
    Integer(i64),
    /// `scale * zeta^root`.
    Scaled {
        scale: i64,
        root: CharExponent,
    },
}

impl Prediction {
    pub fn to_complex(self) -> Complex64 {
        match self {
            Prediction::Integer(v) => Complex64::new(v as f64, 0.0),
            Prediction::Scaled { scale, root } => root.to_complex() * scale as f64,
        }
    }

    pub fn magnitude(self) -> f64 {
        match self {
            Prediction::Integer(v) => v.unsigned_abs() as f64,
            Prediction::Scaled { scale, .. } => scale.unsigned_abs() as f64,
        }
    }

    /// The same value as an exact sum over `zeta_m`; `m` must be a multiple
    /// of the root's order.
    pub fn to_cyclo(self, m: u32) -> Result<CycloSum> {
        let mut s = CycloSum::zero(m);
        match self {
            Prediction::Integer(v) => {
                s.push(CharExponent::new(0, 1))?;
                Ok(s.scale(v))
            }
            Prediction::Scaled { scale, root } => {
                s.push(root)?;
                Ok(s.scale(scale))
            }
        }
    }
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prediction::Integer(v) => write!(f, "{v}"),
            Prediction::Scaled { scale, root } => {
                write!(f, "{scale}*zeta_{}^{}", root.modulus(), root.value())
            }
        }
    }
}

/// A prediction plus the name of the branch that produced it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CasePrediction {
    pub value: Prediction,
    pub case: &'static str,
}

fn int(v: i64, case: &'static str) -> CasePrediction {
    CasePrediction {
        value: Prediction::Integer(v),
        case,
    }
}

/// Value of `R_{C^{m1}, C^{m2}}(tau)` from the case analysis of the family.
pub fn predict_correlation(
    desc: &QcssDescriptor,
    m1: u64,
    m2: u64,
    tau: u32,
) -> Result<CasePrediction> {
    let c1 = desc.decode(m1)?.coefficients;
    let c2 = desc.decode(m2)?.coefficients;
    if tau >= desc.length() {
        return Err(crate::error::Error::IndexOutOfRange {
            index: tau as u64,
            len: desc.length() as u64,
        });
    }
    let fs = desc.field();
    let q = fs.q() as i64;
    let at = fs.alpha_pow(tau as u64);
    // x - alpha^tau y
    let comb = |x: FieldElement, y: FieldElement| fs.sub(x, fs.mul(at, y));

    if m1 == m2 && tau == 0 {
        let kn = desc.flock_size() as i64 * desc.length() as i64;
        return Ok(int(kn, "in-phase autocorrelation"));
    }

    match (c1, c2) {
        (Coefficients::Pair { a: a1, b: b1 }, Coefficients::Pair { a: a2, b: b2 }) => {
            if tau == 0 {
                return Ok(linear_difference(q, fs.sub(a1, a2), fs.sub(b1, b2)));
            }
            let c = fs.sub(FieldElement::ONE, at);
            let a = comb(a1, a2);
            let b = comb(b1, b2);
            if desc.family() == Family::QuadOdd {
                quad_odd(fs, c, a, b)
            } else {
                Ok(quad_char2(fs, c, a, b))
            }
        }
        (
            Coefficients::Triple {
                a: a1,
                b: b1,
                c: c1,
            },
            Coefficients::Triple {
                a: a2,
                b: b2,
                c: c2,
            },
        ) => {
            let (da, db, dc) = (comb(a1, a2), comb(b1, b2), comb(c1, c2));
            if tau == 0 {
                if da.is_zero() {
                    return Ok(linear_difference(q, db, dc));
                }
                let roots = if desc.family() == Family::CubicOdd {
                    quadratic_zeros_odd(fs, da, db, dc)?
                } else {
                    // da x^{2^k} + db x + dc, made monic
                    let inv = fs.inv(da).expect("nonzero");
                    let a = fs.neg(fs.mul(db, inv));
                    let b = fs.neg(fs.mul(dc, inv));
                    count_roots_trinomial(fs, desc.k_exp(), a, b)?.count
                };
                return Ok(int(
                    q * (roots as i64 - 1),
                    "tau = 0, a1 != a2: q (N_g - 1)",
                ));
            }
            let lead = fs.sub(FieldElement::ONE, at);
            let roots = if desc.family() == Family::CubicOdd {
                count_zeros(fs, &[dc, db, da, lead])
            } else {
                let inv = fs.inv(lead).expect("tau != 0");
                let scale = |x| fs.mul(x, inv);
                count_roots_quadrinomial(fs, desc.k_exp(), scale(da), scale(db), scale(dc))?.count
            };
            Ok(int(q * (roots as i64 - 1), "tau != 0: q (N_f - 1)"))
        }
        (Coefficients::Gauss { i: i1, b: b1 }, Coefficients::Gauss { i: i2, b: b2 }) => {
            Ok(gauss(fs, i1, b1, i2, b2, tau))
        }
        _ => unreachable!("one descriptor decodes to one coefficient shape"),
    }
}

/// `tau = 0` with equal leading coefficients: `F = u x + v`.
fn linear_difference(q: i64, u: FieldElement, v: FieldElement) -> CasePrediction {
    if !u.is_zero() {
        int(0, "tau = 0, linear difference: one zero")
    } else if !v.is_zero() {
        int(-q, "tau = 0, constant difference")
    } else {
        unreachable!("distinct indices give distinct coefficients")
    }
}

/// `F = c x^2 + a x + b` with `c = 1 - alpha^tau != 0`. Completing the square,
/// `F = c (x + a/(2c))^2 + D` with `D = b - a^2/(4c)`, and the sum becomes
/// `G(eta)^2 eta(c) eta(D)`, or 0 when `D = 0`.
fn quad_odd(
    fs: &FieldSpec,
    c: FieldElement,
    a: FieldElement,
    b: FieldElement,
) -> Result<CasePrediction> {
    let two = fs.add(FieldElement::ONE, FieldElement::ONE);
    let four_c = fs.mul(fs.mul(two, two), c);
    let d = fs.sub(b, fs.div(fs.mul(a, a), four_c).expect("c != 0"));
    if d.is_zero() {
        return Ok(int(0, "tau != 0, D = 0"));
    }
    let g2 = quadratic_gauss_closed_form(fs)?.square();
    let sign = quadratic_char(fs, c)? * quadratic_char(fs, d)?;
    Ok(int(g2 * sign, "tau != 0, D != 0: G^2 eta(c) eta(D)"))
}

/// `F = c x^2 + a x + b` over characteristic 2. With `a = 0` squaring is a
/// bijection and `F` has one zero; otherwise the count is 0 or 2 according to
/// `Tr(c b / a^2)`.
fn quad_char2(fs: &FieldSpec, c: FieldElement, a: FieldElement, b: FieldElement) -> CasePrediction {
    if a.is_zero() {
        return int(0, "tau != 0, a1 = a2 alpha^tau");
    }
    let q = fs.q() as i64;
    let t = fs.trace(fs.div(fs.mul(c, b), fs.mul(a, a)).expect("a != 0"));
    if t == 1 {
        int(-q, "tau != 0, trace 1")
    } else {
        int(q, "tau != 0, trace 0")
    }
}

/// Zeros of `a x^2 + b x + c` (`a != 0`, odd `p`): `1 + eta(b^2 - 4ac)`.
fn quadratic_zeros_odd(
    fs: &FieldSpec,
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
) -> Result<u32> {
    let two = fs.add(FieldElement::ONE, FieldElement::ONE);
    let disc = fs.sub(fs.mul(b, b), fs.mul(fs.mul(fs.mul(two, two), a), c));
    if disc.is_zero() {
        return Ok(1);
    }
    Ok((1 + quadratic_char(fs, disc)?) as u32)
}

/// Rows `alpha^k`: the sum collapses to
/// `sum_{x != 0} phi_j(x) sum_{y != 0} chi_1(y (B x + c))` with
/// `j = i1 - i2`, `B = b1 - b2 alpha^tau`, `c = 1 - alpha^tau`.
fn gauss(
    fs: &FieldSpec,
    i1: u32,
    b1: FieldElement,
    i2: u32,
    b2: FieldElement,
    tau: u32,
) -> CasePrediction {
    let q = fs.q() as i64;
    let order = fs.unit_order();
    let at = fs.alpha_pow(tau as u64);
    let big_b = fs.sub(b1, fs.mul(b2, at));
    let c = fs.sub(FieldElement::ONE, at);
    let j = (i1 + order - i2) % order;
    match (tau == 0, j == 0, big_b.is_zero()) {
        (true, true, _) => int(-(q - 1), "tau = 0, i1 = i2, b1 != b2"),
        (true, false, _) => int(0, "tau = 0, i1 != i2"),
        (false, true, true) => int(-(q - 1), "tau != 0, i1 = i2, B = 0"),
        (false, true, false) => int(1, "tau != 0, i1 = i2, B != 0"),
        (false, false, true) => int(0, "tau != 0, i1 != i2, B = 0"),
        (false, false, false) => {
            // the single zero x = -c / B
            let x = fs.neg(fs.div(c, big_b).expect("B != 0"));
            let log = fs.dlog(x).expect("c != 0") as u64;
            CasePrediction {
                value: Prediction::Scaled {
                    scale: q,
                    root: CharExponent::new(j as u64 * log, order),
                },
                case: "tau != 0, i1 != i2, B != 0: q phi_j(-c/B)",
            }
        }
    }
}

//! The five quasi-complementary sequence set families.
//!
//! A family instance is a [`QcssDescriptor`]: a field plus the claimed
//! parameters `(M, K, N, theta)`. Matrices are never stored as a whole; a
//! matrix index decodes to its coefficient tuple, and entries are produced on
//! demand from a per-matrix [`RowCache`] of `K` evaluated row constants.
//!
//! | family         | rows `k`                 | entry `(k, t)`                                      |
//! |----------------|--------------------------|-----------------------------------------------------|
//! | `quad-odd`     | `d_k`, all of `GF(q)`    | `chi_1(alpha^t (d_k^2 + a d_k + b))`                |
//! | `quad-char2`   | `d_k`, all of `GF(q)`    | same, `p = 2`                                       |
//! | `quadrinomial` | `d_k`, all of `GF(q)`    | `chi_1(alpha^t f(d_k))`, `f = x^{2^k+1} + a x^{2^k} + b x + c` |
//! | `cubic-odd`    | `d_k`, all of `GF(q)`    | `chi_1(alpha^t (d_k^3 + a d_k^2 + b d_k + c))`      |
//! | `gauss`        | `alpha^k`, `GF(q)*`      | `phi_i(alpha^k) chi_b(alpha^{t+k}) chi_1(alpha^t)`  |

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chars::{mixed_exponent, CharExponent};
use crate::error::{Error, Result};
use crate::gf::{gcd, FieldElement, FieldSpec};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "quad-odd")]
    QuadOdd,
    #[serde(rename = "quad-char2")]
    QuadChar2,
    #[serde(rename = "quadrinomial")]
    QuadrinomialChar2,
    #[serde(rename = "cubic-odd")]
    CubicOdd,
    #[serde(rename = "gauss")]
    GaussMixed,
}

/// Limiting value of `theta_max / theta_opt` as `q` grows.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimalityClass {
    Optimal,
    NearOptimal,
    Neither,
}

impl fmt::Display for OptimalityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OptimalityClass::Optimal => "optimal",
            OptimalityClass::NearOptimal => "near-optimal",
            OptimalityClass::Neither => "neither",
        })
    }
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::QuadOdd,
        Family::QuadChar2,
        Family::QuadrinomialChar2,
        Family::CubicOdd,
        Family::GaussMixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::QuadOdd => "quad-odd",
            Family::QuadChar2 => "quad-char2",
            Family::QuadrinomialChar2 => "quadrinomial",
            Family::CubicOdd => "cubic-odd",
            Family::GaussMixed => "gauss",
        }
    }

    pub fn asymptotic_class(self) -> OptimalityClass {
        match self {
            Family::QuadOdd | Family::QuadChar2 | Family::GaussMixed => OptimalityClass::Optimal,
            Family::QuadrinomialChar2 | Family::CubicOdd => OptimalityClass::NearOptimal,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                Error::Domain(format!(
                    "unknown family {s:?} (expected one of quad-odd, quad-char2, quadrinomial, cubic-odd, gauss)"
                ))
            })
    }
}

/// One family instantiated over a field.
#[derive(Clone, Debug)]
pub struct QcssDescriptor {
    family: Family,
    field: Arc<FieldSpec>,
    k_exp: u32,
    set_size: u64,
    flock_size: u32,
    length: u32,
    theta_claimed: u64,
    alphabet_size: u64,
    unit_root_order: u32,
}

impl QcssDescriptor {
    /// Checks the family's field hypotheses and fills in the claimed
    /// parameters. `k_exp` only applies to the quadrinomial family (default 1).
    pub fn new(family: Family, field: Arc<FieldSpec>, k_exp: Option<u32>) -> Result<Self> {
        let p = field.p();
        let n = field.n();
        let q = field.q() as u64;
        let hypothesis = |requirement: String| Error::Hypothesis {
            family: family.name(),
            requirement,
        };
        if k_exp.is_some() && family != Family::QuadrinomialChar2 {
            return Err(hypothesis(
                "no Frobenius exponent (k only applies to quadrinomial)".into(),
            ));
        }
        match family {
            Family::QuadOdd | Family::CubicOdd if p == 2 => {
                return Err(hypothesis(format!("an odd characteristic (got p = {p})")));
            }
            Family::QuadChar2 | Family::QuadrinomialChar2 if p != 2 => {
                return Err(hypothesis(format!("characteristic 2 (got p = {p})")));
            }
            _ => {}
        }
        let k = k_exp.unwrap_or(1);
        if family == Family::QuadrinomialChar2 {
            if n < 3 {
                return Err(hypothesis(format!("n >= 3 (got n = {n})")));
            }
            if k == 0 || gcd(k as u64, n as u64) != 1 {
                return Err(hypothesis(format!("gcd(k, n) = 1 (got k = {k}, n = {n})")));
            }
        }

        let (set_size, flock_size, length, theta_claimed) = match family {
            Family::QuadOdd | Family::QuadChar2 => (q * q, q, q - 1, q),
            Family::QuadrinomialChar2 | Family::CubicOdd => (q * q * q, q, q - 1, 2 * q),
            Family::GaussMixed => (q * q - q, q - 1, q - 1, q),
        };
        let (alphabet_size, unit_root_order) = match family {
            Family::GaussMixed => (p as u64 * (q - 1), p * (q as u32 - 1)),
            _ => (p as u64, p),
        };
        Ok(QcssDescriptor {
            family,
            field,
            k_exp: k,
            set_size,
            flock_size: flock_size as u32,
            length: length as u32,
            theta_claimed,
            alphabet_size,
            unit_root_order,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn k_exp(&self) -> u32 {
        self.k_exp
    }

    /// `M`, the number of matrices.
    pub fn set_size(&self) -> u64 {
        self.set_size
    }

    /// `K`, rows per matrix.
    pub fn flock_size(&self) -> u32 {
        self.flock_size
    }

    /// `N`, the period of each row.
    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn theta_claimed(&self) -> u64 {
        self.theta_claimed
    }

    pub fn alphabet_size(&self) -> u64 {
        self.alphabet_size
    }

    /// Order of the root of unity that entry exponents refer to.
    pub fn unit_root_order(&self) -> u32 {
        self.unit_root_order
    }

    /// Decodes a matrix index. Pairs use `m = idx(a) q + idx(b)`, triples
    /// `m = (idx(a) q + idx(b)) q + idx(c)`, the Gauss family `m = i q + idx(b)`,
    /// where `idx` is the canonical element index.
    pub fn decode(&self, m: u64) -> Result<MatrixIndex> {
        if m >= self.set_size {
            return Err(Error::IndexOutOfRange {
                index: m,
                len: self.set_size,
            });
        }
        let fs = &*self.field;
        let q = fs.q() as u64;
        let el = |l: u64| fs.element_at_unchecked(l as u32);
        let coefficients = match self.family {
            Family::QuadOdd | Family::QuadChar2 => Coefficients::Pair {
                a: el(m / q),
                b: el(m % q),
            },
            Family::QuadrinomialChar2 | Family::CubicOdd => Coefficients::Triple {
                a: el(m / (q * q)),
                b: el(m / q % q),
                c: el(m % q),
            },
            Family::GaussMixed => Coefficients::Gauss {
                i: (m / q) as u32,
                b: el(m % q),
            },
        };
        Ok(MatrixIndex {
            index: m,
            coefficients,
        })
    }

    pub fn encode(&self, coefficients: &Coefficients) -> Result<u64> {
        let fs = &*self.field;
        let q = fs.q() as u64;
        let idx = |x: FieldElement| -> Result<u64> {
            fs.from_packed(x.packed())?;
            Ok(fs.index_of(x) as u64)
        };
        match (self.family, coefficients) {
            (Family::QuadOdd | Family::QuadChar2, Coefficients::Pair { a, b }) => {
                Ok(idx(*a)? * q + idx(*b)?)
            }
            (Family::QuadrinomialChar2 | Family::CubicOdd, Coefficients::Triple { a, b, c }) => {
                Ok((idx(*a)? * q + idx(*b)?) * q + idx(*c)?)
            }
            (Family::GaussMixed, Coefficients::Gauss { i, b }) => {
                if *i >= fs.unit_order() {
                    return Err(Error::IndexOutOfRange {
                        index: *i as u64,
                        len: fs.unit_order() as u64,
                    });
                }
                Ok(*i as u64 * q + idx(*b)?)
            }
            _ => Err(Error::Domain(format!(
                "coefficient shape does not match the {} family",
                self.family
            ))),
        }
    }

    /// Entry `(k, t)` of matrix `m`, evaluated from scratch.
    pub fn entry(&self, m: u64, k: u32, t: u32) -> Result<CharExponent> {
        self.check_position(k, t)?;
        let idx = self.decode(m)?;
        let fs = &*self.field;
        let at = fs.alpha_pow(t as u64);
        let value = match idx.coefficients {
            Coefficients::Gauss { i, b } => {
                let row = fs.alpha_pow(k as u64);
                let mult = (i as u64 * k as u64 % fs.unit_order() as u64) as u32;
                let add = fs.trace(fs.mul(b, fs.mul(at, row))) + fs.trace(at);
                return Ok(mixed_exponent(fs, add, mult));
            }
            coeffs => {
                let x = fs.element_at_unchecked(k);
                self.evaluate_direct(&coeffs, x)
            }
        };
        Ok(CharExponent::new(
            fs.trace(fs.mul(at, value)) as u64,
            fs.p(),
        ))
    }

    /// The row polynomial at `x`, written out term by term with explicit powers.
    fn evaluate_direct(&self, coeffs: &Coefficients, x: FieldElement) -> FieldElement {
        let fs = &*self.field;
        let sum = |terms: &[FieldElement]| {
            terms
                .iter()
                .fold(FieldElement::ZERO, |acc, &v| fs.add(acc, v))
        };
        match (self.family, *coeffs) {
            (_, Coefficients::Pair { a, b }) => sum(&[fs.pow(x, 2), fs.mul(a, x), b]),
            (Family::CubicOdd, Coefficients::Triple { a, b, c }) => {
                sum(&[fs.pow(x, 3), fs.mul(a, fs.pow(x, 2)), fs.mul(b, x), c])
            }
            (_, Coefficients::Triple { a, b, c }) => {
                let e = 1u64 << self.k_exp;
                sum(&[fs.pow(x, e + 1), fs.mul(a, fs.pow(x, e)), fs.mul(b, x), c])
            }
            (_, Coefficients::Gauss { .. }) => unreachable!("gauss rows are not polynomial"),
        }
    }

    fn check_position(&self, k: u32, t: u32) -> Result<()> {
        if k >= self.flock_size {
            return Err(Error::IndexOutOfRange {
                index: k as u64,
                len: self.flock_size as u64,
            });
        }
        if t >= self.length {
            return Err(Error::IndexOutOfRange {
                index: t as u64,
                len: self.length as u64,
            });
        }
        Ok(())
    }

    /// Evaluates the `K` row constants of matrix `m` once.
    pub fn precompute_row_values(&self, m: u64) -> Result<RowCache> {
        let idx = self.decode(m)?;
        let fs = &*self.field;
        let rows = match idx.coefficients {
            Coefficients::Gauss { i, b } => RowValues::Gauss(
                (0..self.flock_size)
                    .map(|k| {
                        let mult = (i as u64 * k as u64 % fs.unit_order() as u64) as u32;
                        (mult, fs.mul(b, fs.alpha_pow(k as u64)))
                    })
                    .collect(),
            ),
            coeffs => {
                let horner: Vec<FieldElement> = self.horner_coefficients(&coeffs);
                RowValues::Poly(
                    fs.elements()
                        .map(|x| {
                            horner
                                .iter()
                                .fold(FieldElement::ZERO, |acc, &c| fs.add(fs.mul(acc, x), c))
                        })
                        .collect(),
                )
            }
        };
        Ok(RowCache { index: idx, rows })
    }

    /// Dense coefficient list, highest degree first.
    fn horner_coefficients(&self, coeffs: &Coefficients) -> Vec<FieldElement> {
        let z = FieldElement::ZERO;
        let one = FieldElement::ONE;
        match (self.family, *coeffs) {
            (_, Coefficients::Pair { a, b }) => vec![one, a, b],
            (Family::CubicOdd, Coefficients::Triple { a, b, c }) => vec![one, a, b, c],
            (_, Coefficients::Triple { a, b, c }) => {
                let e = 1usize << self.k_exp;
                let mut v = vec![z; e + 2];
                v[0] = one;
                v[1] = a;
                v[e] = b;
                v[e + 1] = c;
                v
            }
            (_, Coefficients::Gauss { .. }) => unreachable!("gauss rows are not polynomial"),
        }
    }

    /// Renders a matrix as `K` lines of exponents, one character per entry
    /// when the alphabet fits in a digit, space separated otherwise.
    pub fn render_text(&self, m: u64) -> Result<String> {
        let cache = self.precompute_row_values(m)?;
        let rows = cache.exponent_rows(self);
        let n = self.length as usize;
        let wide = self.unit_root_order > 10;
        let mut out = String::new();
        for row in rows.chunks(n) {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            out.push_str(&cells.join(if wide { " " } else { "" }));
            out.push('\n');
        }
        Ok(out)
    }

    pub fn matrix_json(&self, m: u64) -> Result<MatrixDump> {
        let cache = self.precompute_row_values(m)?;
        let rows = cache.exponent_rows(self);
        Ok(MatrixDump {
            family: self.family,
            index: m,
            coefficients: cache.index.coefficients.describe(&self.field),
            unit_root_order: self.unit_root_order,
            rows: rows
                .chunks(self.length as usize)
                .map(|r| r.to_vec())
                .collect(),
        })
    }
}

/// Serializable dump of one matrix.
#[derive(Clone, Debug, Serialize)]
pub struct MatrixDump {
    pub family: Family,
    pub index: u64,
    pub coefficients: Vec<(String, String)>,
    pub unit_root_order: u32,
    pub rows: Vec<Vec<u32>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Coefficients {
    Pair {
        a: FieldElement,
        b: FieldElement,
    },
    Triple {
        a: FieldElement,
        b: FieldElement,
        c: FieldElement,
    },
    Gauss {
        i: u32,
        b: FieldElement,
    },
}

impl Coefficients {
    /// Named coefficients with elements written as powers of `alpha`.
    pub fn describe(&self, fs: &FieldSpec) -> Vec<(String, String)> {
        let e = |x: FieldElement| format_element(fs, x);
        match *self {
            Coefficients::Pair { a, b } => vec![("a".into(), e(a)), ("b".into(), e(b))],
            Coefficients::Triple { a, b, c } => {
                vec![("a".into(), e(a)), ("b".into(), e(b)), ("c".into(), e(c))]
            }
            Coefficients::Gauss { i, b } => vec![("i".into(), i.to_string()), ("b".into(), e(b))],
        }
    }
}

/// A matrix index together with its decoded coefficient tuple.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MatrixIndex {
    pub index: u64,
    pub coefficients: Coefficients,
}

#[derive(Clone, Debug)]
enum RowValues {
    /// `f(d_k)` for each row.
    Poly(Vec<FieldElement>),
    /// `(i k mod (q-1), b alpha^k)` for each row.
    Gauss(Vec<(u32, FieldElement)>),
}

/// Per-matrix row constants; every entry of the matrix is a table lookup away.
#[derive(Clone, Debug)]
pub struct RowCache {
    index: MatrixIndex,
    rows: RowValues,
}

impl RowCache {
    pub fn index(&self) -> &MatrixIndex {
        &self.index
    }

    pub fn len(&self) -> usize {
        match &self.rows {
            RowValues::Poly(v) => v.len(),
            RowValues::Gauss(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row constants `f(d_k)` of a polynomial family; `None` for `gauss`.
    pub fn row_values(&self) -> Option<&[FieldElement]> {
        match &self.rows {
            RowValues::Poly(v) => Some(v),
            RowValues::Gauss(_) => None,
        }
    }

    #[inline]
    pub fn entry(&self, desc: &QcssDescriptor, k: u32, t: u32) -> CharExponent {
        let fs = desc.field();
        match &self.rows {
            RowValues::Poly(v) => {
                CharExponent::new(row_exponent(fs, v[k as usize], t) as u64, fs.p())
            }
            RowValues::Gauss(v) => {
                let (mult, bk) = v[k as usize];
                gauss_exponent(fs, mult, bk, t)
            }
        }
    }

    /// All entries, row-major `K x N`, as exponents of `zeta_{unit_root_order}`.
    pub fn exponent_rows(&self, desc: &QcssDescriptor) -> Vec<u32> {
        let n = desc.length();
        let mut out = Vec::with_capacity(self.len() * n as usize);
        self.extend_rows(desc, n, &mut out);
        out
    }

    /// Like [`RowCache::exponent_rows`] but each row is written twice in a row
    /// (`2N` entries), so that any cyclic shift is a contiguous window.
    pub fn doubled_exponent_rows(&self, desc: &QcssDescriptor) -> Vec<u32> {
        let n = desc.length();
        let mut out = Vec::with_capacity(self.len() * 2 * n as usize);
        self.extend_rows(desc, 2 * n, &mut out);
        out
    }

    fn extend_rows(&self, desc: &QcssDescriptor, width: u32, out: &mut Vec<u32>) {
        let fs = desc.field();
        match &self.rows {
            RowValues::Poly(v) => {
                for &value in v {
                    out.extend((0..width).map(|t| row_exponent(fs, value, t)));
                }
            }
            RowValues::Gauss(v) => {
                for &(mult, bk) in v {
                    out.extend((0..width).map(|t| gauss_exponent(fs, mult, bk, t).value()));
                }
            }
        }
    }
}

/// `Tr(alpha^t v)`.
#[inline]
fn row_exponent(fs: &FieldSpec, v: FieldElement, t: u32) -> u32 {
    match fs.dlog(v) {
        Ok(l) => fs.trace_alpha_pow(l as u64 + t as u64),
        Err(_) => 0,
    }
}

#[inline]
fn gauss_exponent(fs: &FieldSpec, mult: u32, bk: FieldElement, t: u32) -> CharExponent {
    let add = row_exponent(fs, bk, t) + fs.trace_alpha_pow(t as u64);
    mixed_exponent(fs, add, mult)
}

/// Writes `x` as `0`, `1`, `a` or `a^k`.
pub fn format_element(fs: &FieldSpec, x: FieldElement) -> String {
    match fs.dlog(x) {
        Err(_) => "0".into(),
        Ok(0) => "1".into(),
        Ok(1) => "a".into(),
        Ok(k) => format!("a^{k}"),
    }
}

/// Inverse of [`format_element`]; also accepts `alpha^k`.
pub fn parse_element(fs: &FieldSpec, s: &str) -> Result<FieldElement> {
    let s = s.trim();
    let bad = || Error::InvalidElement(format!("{s:?} (expected 0, 1, a or a^k)"));
    match s {
        "0" => Ok(FieldElement::ZERO),
        "1" => Ok(FieldElement::ONE),
        "a" | "alpha" => Ok(fs.alpha()),
        _ => {
            let k = s
                .strip_prefix("a^")
                .or_else(|| s.strip_prefix("alpha^"))
                .ok_or_else(bad)?;
            let k: u64 = k.parse().map_err(|_| bad())?;
            Ok(fs.alpha_pow(k))
        }
    }
}

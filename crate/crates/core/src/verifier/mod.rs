//! Periodic correlation of matrix pairs, exhaustive and sampled verification
//! of a family's tolerance, and agreement checks against the closed forms.
//!
//! For matrices `C1`, `C2` with rows `c_k`,
//!
//! ```text
//! R_{C1,C2}(tau) = sum_k sum_t c1_k(t) conj(c2_k(t + tau mod N))
//! ```
//!
//! Values are kept as exact cyclotomic counts; magnitudes are only taken when
//! a report is assembled.

mod bound;
mod predict;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::chars::{CycloSum, Cyclotomic};
use crate::constructions::{Family, OptimalityClass, QcssDescriptor};
use crate::error::{Error, Result};
use crate::gf::is_prime;

pub use bound::{classify, rho, welch_bound, RHO_TOL};
pub use predict::{predict_correlation, CasePrediction, Prediction};

/// Default ceiling on `M^2 K N^2` for exhaustive runs.
pub const DEFAULT_OP_BUDGET: u128 = 10_000_000_000;

/// Relative tolerance for snapping magnitudes to integers, scaled by `K N`.
pub const MAGNITUDE_TOL: f64 = 1e-6;

/// Exact `R_{C^{m1}, C^{m2}}(tau)`, straight from the definition.
pub fn correlate(desc: &QcssDescriptor, m1: u64, m2: u64, tau: u32) -> Result<CycloSum> {
    let n = desc.length();
    if tau >= n {
        return Err(Error::IndexOutOfRange {
            index: tau as u64,
            len: n as u64,
        });
    }
    let r1 = desc.precompute_row_values(m1)?;
    let r2 = desc.precompute_row_values(m2)?;
    let mut sum = CycloSum::zero(desc.unit_root_order());
    for k in 0..desc.flock_size() {
        for t in 0..n {
            let a = r1.entry(desc, k, t);
            let b = r2.entry(desc, k, (t + tau) % n);
            sum.push(a * b.conj())?;
        }
    }
    Ok(sum)
}

/// Operation count of an exhaustive run over `s` matrices: `s^2 K N^2`.
pub fn exhaustive_cost(desc: &QcssDescriptor, s: u64) -> u128 {
    let kn2 = desc.flock_size() as u128 * desc.length() as u128 * desc.length() as u128;
    s as u128 * s as u128 * kn2
}

/// Magnitudes a family's nontrivial correlations may take.
pub fn claimed_magnitudes(desc: &QcssDescriptor) -> Vec<u64> {
    let q = desc.field().q() as u64;
    match desc.family() {
        Family::QuadOdd | Family::QuadChar2 => vec![0, q],
        Family::QuadrinomialChar2 | Family::CubicOdd => vec![0, q, 2 * q],
        Family::GaussMixed => {
            let mut v = vec![0, 1, q - 1, q];
            v.dedup();
            v
        }
    }
}

/// Signed values the integer-valued families may take; `None` for `gauss`.
pub fn claimed_values(desc: &QcssDescriptor) -> Option<Vec<i64>> {
    let q = desc.field().q() as i64;
    match desc.family() {
        Family::QuadOdd | Family::QuadChar2 => Some(vec![-q, 0, q]),
        Family::QuadrinomialChar2 | Family::CubicOdd => Some(vec![-q, 0, q, 2 * q]),
        Family::GaussMixed => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled { seed: u64, count: u64 },
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub mode: Mode,
    pub op_budget: u128,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Restricts the run to these matrix indices.
    pub subset: Option<Vec<u64>>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: Mode::Exhaustive,
            op_budget: DEFAULT_OP_BUDGET,
            threads: None,
            subset: None,
        }
    }
}

/// A query attaining the reported maximum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub m1: u64,
    pub m2: u64,
    pub tau: u32,
    #[serde(serialize_with = "fixed")]
    pub magnitude: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrelationReport {
    pub family: Family,
    pub p: u32,
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_exp: Option<u32>,
    #[serde(rename = "M")]
    pub set_size: u64,
    #[serde(rename = "K")]
    pub flock_size: u32,
    #[serde(rename = "N")]
    pub length: u32,
    pub theta_claimed: u64,
    #[serde(serialize_with = "fixed")]
    pub theta_observed: f64,
    #[serde(serialize_with = "fixed")]
    pub theta_a: f64,
    #[serde(serialize_with = "fixed")]
    pub theta_c: f64,
    #[serde(serialize_with = "fixed")]
    pub theta_opt: f64,
    /// `None` when the bound is zero and `theta_observed` is not.
    #[serde(serialize_with = "fixed_opt")]
    pub rho: Option<f64>,
    /// Class of the observed `rho` at this field.
    pub optimality_class: OptimalityClass,
    /// Class the family reaches as `q` grows.
    pub asymptotic_class: OptimalityClass,
    pub claimed_magnitudes: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claimed_values: Option<Vec<i64>>,
    /// `[magnitude, count]` over ordered nontrivial queries.
    pub histogram: Vec<(u64, u64)>,
    pub histogram_auto: Vec<(u64, u64)>,
    pub histogram_cross: Vec<(u64, u64)>,
    /// `[value, count]` for the integer-valued families.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<(i64, u64)>>,
    /// Magnitudes farther than the tolerance from every integer.
    pub non_integer_magnitudes: u64,
    /// Values of an integer-valued family that are not rational integers.
    pub non_integer_values: u64,
    pub queries: u64,
    /// Set when there is no nontrivial query at all.
    pub degenerate: bool,
    pub mode: Mode,
    pub witness: Option<Witness>,
}

impl CorrelationReport {
    /// Observed tolerance within the claim, and every magnitude and value in
    /// the claimed set.
    pub fn passes(&self) -> bool {
        let tol = self.tolerance();
        let support_ok = self
            .histogram
            .iter()
            .all(|(mag, _)| self.claimed_magnitudes.contains(mag));
        let values_ok = match (&self.values, &self.claimed_values) {
            (Some(v), Some(claimed)) => v.iter().all(|(x, _)| claimed.contains(x)),
            _ => true,
        };
        self.theta_observed <= self.theta_claimed as f64 + tol
            && support_ok
            && values_ok
            && self.non_integer_magnitudes == 0
            && self.non_integer_values == 0
    }

    pub fn theta_attained(&self) -> bool {
        (self.theta_observed - self.theta_claimed as f64).abs() <= self.tolerance()
    }

    /// Magnitudes present in the histogram.
    pub fn support(&self) -> Vec<u64> {
        self.histogram.iter().map(|&(m, _)| m).collect()
    }

    pub fn tolerance(&self) -> f64 {
        MAGNITUDE_TOL * self.flock_size as f64 * self.length as f64
    }

    /// Histogram as `magnitude,count` lines with a header.
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("magnitude,count\n");
        for (m, c) in &self.histogram {
            out.push_str(&format!("{m},{c}\n"));
        }
        out
    }
}

/// Serializes integral reals as integers and others with 9 significant digits.
fn fixed<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.fract() == 0.0 && v.abs() < 9.0e15 {
        s.serialize_i64(*v as i64)
    } else {
        s.serialize_f64(round_sig(*v, 9))
    }
}

fn fixed_opt<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => fixed(x, s),
        None => s.serialize_none(),
    }
}

/// `v` rounded to `digits` significant digits.
pub fn round_sig(v: f64, digits: usize) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{:.*e}", digits - 1, v).parse().unwrap_or(v)
}

/// Exact value of a correlation from its counts over `zeta_m`.
struct Evaluator {
    m: u32,
    prime: bool,
    cyclo: Cyclotomic,
    roots: Vec<Complex64>,
}

#[derive(Clone, Copy, Debug)]
struct Value {
    integer: Option<i64>,
    magnitude: f64,
}

impl Evaluator {
    fn new(m: u32) -> Self {
        let roots = (0..m)
            .map(|i| Complex64::from_polar(1.0, std::f64::consts::TAU * i as f64 / m as f64))
            .collect();
        Evaluator {
            m,
            prime: is_prime(m as u64),
            cyclo: Cyclotomic::new(m),
            roots,
        }
    }

    fn integer(&self, counts: &[i64]) -> Option<i64> {
        if self.m == 1 {
            return Some(counts[0]);
        }
        if self.prime {
            let tail = counts[1];
            return counts[2..]
                .iter()
                .all(|&c| c == tail)
                .then_some(counts[0] - tail);
        }
        let c = self.cyclo.reduce(counts);
        c[1..].iter().all(|&v| v == 0).then_some(c[0])
    }

    fn value(&self, counts: &[i64]) -> Value {
        match self.integer(counts) {
            Some(v) => Value {
                integer: Some(v),
                magnitude: v.unsigned_abs() as f64,
            },
            None => Value {
                integer: None,
                magnitude: self.complex(counts).norm(),
            },
        }
    }

    fn complex(&self, counts: &[i64]) -> Complex64 {
        counts
            .iter()
            .zip(&self.roots)
            .filter(|(&c, _)| c != 0)
            .map(|(&c, r)| r * c as f64)
            .sum()
    }

    /// Whether `counts` and `pred` are the same element of `Z[zeta_m]`.
    fn matches(&self, counts: &[i64], pred: &CycloSum) -> bool {
        let diff: Vec<i64> = counts
            .iter()
            .zip(pred.counts())
            .map(|(a, b)| a - b)
            .collect();
        self.cyclo.reduce(&diff).iter().all(|&c| c == 0)
    }

    fn describe(&self, counts: &[i64]) -> String {
        match self.integer(counts) {
            Some(v) => v.to_string(),
            None => {
                let z = self.complex(counts);
                format!("{:.6}{:+.6}i", z.re, z.im)
            }
        }
    }
}

/// Rows of every matrix in a run, each row written twice so a shift is a
/// contiguous window.
struct RowBank {
    k: usize,
    n: usize,
    m: u32,
}

impl RowBank {
    fn new(desc: &QcssDescriptor) -> Self {
        RowBank {
            k: desc.flock_size() as usize,
            n: desc.length() as usize,
            m: desc.unit_root_order(),
        }
    }

    /// Fills `counts` (length `m`) with the exponent histogram of the
    /// correlation at shift `tau`. `scratch` has length `2m`.
    #[inline]
    fn counts(&self, a: &[u32], b: &[u32], tau: usize, scratch: &mut [u32], counts: &mut [i64]) {
        let (k, n, m) = (self.k, self.n, self.m);
        scratch.iter_mut().for_each(|c| *c = 0);
        for row in 0..k {
            let base = row * 2 * n;
            let ra = &a[base..base + n];
            let rb = &b[base + tau..base + tau + n];
            for (&x, &y) in ra.iter().zip(rb) {
                scratch[(x + m - y) as usize] += 1;
            }
        }
        let m = m as usize;
        for i in 0..m {
            counts[i] = (scratch[i] + scratch[i + m]) as i64;
        }
    }
}

/// Per-stratum accumulator; strata are merged in index order.
#[derive(Clone, Debug, Default)]
struct Tally {
    theta_a: f64,
    witness_a: Option<Witness>,
    theta_c: f64,
    witness_c: Option<Witness>,
    hist_auto: BTreeMap<u64, u64>,
    hist_cross: BTreeMap<u64, u64>,
    values: BTreeMap<i64, u64>,
    non_integer_magnitudes: u64,
    non_integer_values: u64,
    queries: u64,
}

impl Tally {
    fn record(&mut self, m1: u64, m2: u64, tau: u32, v: Value, weight: u64, tol: f64) {
        let rounded = v.magnitude.round();
        let snapped = if (v.magnitude - rounded).abs() <= tol {
            rounded
        } else {
            self.non_integer_magnitudes += weight;
            v.magnitude
        };
        match v.integer {
            Some(x) => *self.values.entry(x).or_insert(0) += weight,
            None => self.non_integer_values += weight,
        }
        self.queries += weight;
        let (theta, witness, hist) = if m1 == m2 {
            (&mut self.theta_a, &mut self.witness_a, &mut self.hist_auto)
        } else {
            (&mut self.theta_c, &mut self.witness_c, &mut self.hist_cross)
        };
        *hist.entry(rounded as u64).or_insert(0) += weight;
        if witness.is_none() || snapped > *theta {
            *theta = snapped;
            *witness = Some(Witness {
                m1,
                m2,
                tau,
                magnitude: snapped,
            });
        }
    }

    /// Folds a later stratum into this one.
    fn merge(mut self, other: Tally) -> Tally {
        if other.witness_a.is_some() && (self.witness_a.is_none() || other.theta_a > self.theta_a) {
            self.theta_a = other.theta_a;
            self.witness_a = other.witness_a;
        }
        if other.witness_c.is_some() && (self.witness_c.is_none() || other.theta_c > self.theta_c) {
            self.theta_c = other.theta_c;
            self.witness_c = other.witness_c;
        }
        for (k, v) in other.hist_auto {
            *self.hist_auto.entry(k).or_insert(0) += v;
        }
        for (k, v) in other.hist_cross {
            *self.hist_cross.entry(k).or_insert(0) += v;
        }
        for (k, v) in other.values {
            *self.values.entry(k).or_insert(0) += v;
        }
        self.non_integer_magnitudes += other.non_integer_magnitudes;
        self.non_integer_values += other.non_integer_values;
        self.queries += other.queries;
        self
    }
}

/// Matrix indices under consideration.
enum Population {
    All(u64),
    List(Vec<u64>),
}

impl Population {
    fn len(&self) -> u64 {
        match self {
            Population::All(n) => *n,
            Population::List(v) => v.len() as u64,
        }
    }

    fn get(&self, i: u64) -> u64 {
        match self {
            Population::All(_) => i,
            Population::List(v) => v[i as usize],
        }
    }
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Computes `theta_a`, `theta_c`, `theta_max`, magnitude histograms and the
/// bound comparison over every (or a seeded sample of) nontrivial query.
///
/// The exhaustive mode visits unordered pairs `m1 <= m2` once and counts a
/// cross pair for both orders, since `|R_{C2,C1}(N - tau)| = |R_{C1,C2}(tau)|`.
/// Results do not depend on the number of worker threads.
pub fn verify(desc: &QcssDescriptor, opts: &VerifyOptions) -> Result<CorrelationReport> {
    let population = match &opts.subset {
        None => Population::All(desc.set_size()),
        Some(list) => {
            let mut v = list.clone();
            v.sort_unstable();
            v.dedup();
            if let Some(&bad) = v.iter().find(|&&m| m >= desc.set_size()) {
                return Err(Error::IndexOutOfRange {
                    index: bad,
                    len: desc.set_size(),
                });
            }
            if v.is_empty() {
                return Err(Error::Domain("matrix subset is empty".into()));
            }
            Population::List(v)
        }
    };
    let tally = match opts.mode {
        Mode::Exhaustive => {
            let required = exhaustive_cost(desc, population.len());
            if required > opts.op_budget {
                return Err(Error::BudgetExceeded {
                    required,
                    budget: opts.op_budget,
                });
            }
            with_threads(opts.threads, || exhaustive(desc, &population))??
        }
        Mode::Sampled { seed, count } => {
            with_threads(opts.threads, || sampled(desc, &population, seed, count))??
        }
    };
    Ok(assemble(desc, opts.mode, population.len(), tally))
}

fn exhaustive(desc: &QcssDescriptor, pop: &Population) -> Result<Tally> {
    let s = pop.len();
    let rows: Vec<Vec<u32>> = (0..s)
        .into_par_iter()
        .map(|i| {
            Ok(desc
                .precompute_row_values(pop.get(i))?
                .doubled_exponent_rows(desc))
        })
        .collect::<Result<_>>()?;
    let bank = RowBank::new(desc);
    let eval = Evaluator::new(bank.m);
    let tol = MAGNITUDE_TOL * (bank.k * bank.n) as f64;
    let n = desc.length();
    let strata: Vec<Tally> = (0..s as usize)
        .into_par_iter()
        .map(|i| {
            let mut tally = Tally::default();
            let mut scratch = vec![0u32; 2 * bank.m as usize];
            let mut counts = vec![0i64; bank.m as usize];
            let m1 = pop.get(i as u64);
            for j in i..s as usize {
                let m2 = pop.get(j as u64);
                let weight = if i == j { 1 } else { 2 };
                for tau in 0..n {
                    if i == j && tau == 0 {
                        continue;
                    }
                    bank.counts(&rows[i], &rows[j], tau as usize, &mut scratch, &mut counts);
                    tally.record(m1, m2, tau, eval.value(&counts), weight, tol);
                }
            }
            tally
        })
        .collect();
    Ok(strata.into_iter().fold(Tally::default(), Tally::merge))
}

fn sampled(desc: &QcssDescriptor, pop: &Population, seed: u64, count: u64) -> Result<Tally> {
    let s = pop.len();
    let n = desc.length();
    let mut queries = Vec::new();
    if !(s == 1 && n == 1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while (queries.len() as u64) < count {
            let (mut i, mut j) = (rng.gen_range(0..s), rng.gen_range(0..s));
            let mut tau = rng.gen_range(0..n);
            if i == j && tau == 0 {
                continue;
            }
            if i > j {
                std::mem::swap(&mut i, &mut j);
                tau = (n - tau) % n;
            }
            queries.push((pop.get(i), pop.get(j), tau));
        }
    }
    let bank = RowBank::new(desc);
    let eval = Evaluator::new(bank.m);
    let tol = MAGNITUDE_TOL * (bank.k * bank.n) as f64;
    let strata: Vec<Tally> = queries
        .par_chunks(64)
        .map(|chunk| {
            let mut tally = Tally::default();
            let mut scratch = vec![0u32; 2 * bank.m as usize];
            let mut counts = vec![0i64; bank.m as usize];
            for &(m1, m2, tau) in chunk {
                let a = desc.precompute_row_values(m1)?.doubled_exponent_rows(desc);
                let b = desc.precompute_row_values(m2)?.doubled_exponent_rows(desc);
                bank.counts(&a, &b, tau as usize, &mut scratch, &mut counts);
                tally.record(m1, m2, tau, eval.value(&counts), 1, tol);
            }
            Ok(tally)
        })
        .collect::<Result<_>>()?;
    Ok(strata.into_iter().fold(Tally::default(), Tally::merge))
}

fn assemble(desc: &QcssDescriptor, mode: Mode, population: u64, t: Tally) -> CorrelationReport {
    let fs = desc.field();
    let merged = {
        let mut h = t.hist_auto.clone();
        for (&k, &v) in &t.hist_cross {
            *h.entry(k).or_insert(0) += v;
        }
        h
    };
    let theta_max = t.theta_a.max(t.theta_c);
    let witness = if t.theta_c >= t.theta_a {
        t.witness_c.or(t.witness_a)
    } else {
        t.witness_a
    };
    let theta_opt =
        welch_bound(population, desc.flock_size() as u64, desc.length() as u64).unwrap_or(0.0);
    let r = rho(theta_max, theta_opt);
    let integer_family = desc.family() != Family::GaussMixed;
    CorrelationReport {
        family: desc.family(),
        p: fs.p(),
        n: fs.n(),
        k_exp: (desc.family() == Family::QuadrinomialChar2).then_some(desc.k_exp()),
        set_size: desc.set_size(),
        flock_size: desc.flock_size(),
        length: desc.length(),
        theta_claimed: desc.theta_claimed(),
        theta_observed: theta_max,
        theta_a: t.theta_a,
        theta_c: t.theta_c,
        theta_opt,
        rho: r.is_finite().then_some(r),
        optimality_class: classify(r),
        asymptotic_class: desc.family().asymptotic_class(),
        claimed_magnitudes: claimed_magnitudes(desc),
        claimed_values: claimed_values(desc),
        histogram: merged.into_iter().collect(),
        histogram_auto: t.hist_auto.into_iter().collect(),
        histogram_cross: t.hist_cross.into_iter().collect(),
        values: integer_family.then(|| t.values.into_iter().collect()),
        non_integer_magnitudes: t.non_integer_magnitudes,
        non_integer_values: if integer_family {
            t.non_integer_values
        } else {
            0
        },
        queries: t.queries,
        degenerate: t.queries == 0,
        mode,
        witness,
    }
}

/// `|R(tau)|` for every shift of one pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShiftMagnitude {
    pub tau: u32,
    #[serde(serialize_with = "fixed")]
    pub magnitude: f64,
    pub integral: bool,
}

pub fn pair_profile(desc: &QcssDescriptor, m1: u64, m2: u64) -> Result<Vec<ShiftMagnitude>> {
    let a = desc.precompute_row_values(m1)?.doubled_exponent_rows(desc);
    let b = desc.precompute_row_values(m2)?.doubled_exponent_rows(desc);
    let bank = RowBank::new(desc);
    let eval = Evaluator::new(bank.m);
    let tol = MAGNITUDE_TOL * (bank.k * bank.n) as f64;
    let mut scratch = vec![0u32; 2 * bank.m as usize];
    let mut counts = vec![0i64; bank.m as usize];
    Ok((0..desc.length())
        .map(|tau| {
            bank.counts(&a, &b, tau as usize, &mut scratch, &mut counts);
            let mag = eval.value(&counts).magnitude;
            let rounded = mag.round();
            let integral = (mag - rounded).abs() <= tol;
            ShiftMagnitude {
                tau,
                magnitude: if integral { rounded } else { mag },
                integral,
            }
        })
        .collect())
}

/// A query where the closed form and the direct sum disagree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub m1: u64,
    pub m2: u64,
    pub tau: u32,
    pub got: String,
    pub predicted: String,
    pub case: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub family: Family,
    pub p: u32,
    pub n: u32,
    /// Queries `(m1 <= m2, tau)` compared, the in-phase peak excluded.
    pub queries: u64,
    pub counterexample: Option<Counterexample>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Compares the closed-form predictor with the direct sum, exactly, on every
/// nontrivial query with `m1 <= m2`. Stops a stratum at its first mismatch
/// and reports the earliest one.
pub fn predictor_equivalence_scan(desc: &QcssDescriptor, op_budget: u128) -> Result<ScanReport> {
    let s = desc.set_size();
    let required = exhaustive_cost(desc, s);
    if required > op_budget {
        return Err(Error::BudgetExceeded {
            required,
            budget: op_budget,
        });
    }
    let rows: Vec<Vec<u32>> = (0..s)
        .into_par_iter()
        .map(|m| Ok(desc.precompute_row_values(m)?.doubled_exponent_rows(desc)))
        .collect::<Result<_>>()?;
    let bank = RowBank::new(desc);
    let eval = Evaluator::new(bank.m);
    let n = desc.length();
    let strata: Vec<(u64, Option<Counterexample>)> = (0..s)
        .into_par_iter()
        .map(|m1| -> Result<(u64, Option<Counterexample>)> {
            let mut scratch = vec![0u32; 2 * bank.m as usize];
            let mut counts = vec![0i64; bank.m as usize];
            let mut queries = 0;
            for m2 in m1..s {
                for tau in 0..n {
                    if m1 == m2 && tau == 0 {
                        continue;
                    }
                    queries += 1;
                    bank.counts(
                        &rows[m1 as usize],
                        &rows[m2 as usize],
                        tau as usize,
                        &mut scratch,
                        &mut counts,
                    );
                    let pred = predict_correlation(desc, m1, m2, tau)?;
                    if !eval.matches(&counts, &pred.value.to_cyclo(bank.m)?) {
                        return Ok((
                            queries,
                            Some(Counterexample {
                                m1,
                                m2,
                                tau,
                                got: eval.describe(&counts),
                                predicted: pred.value.to_string(),
                                case: pred.case,
                            }),
                        ));
                    }
                }
            }
            Ok((queries, None))
        })
        .collect::<Result<_>>()?;
    let mut queries = 0;
    let mut counterexample = None;
    for (q, c) in strata {
        queries += q;
        if counterexample.is_none() {
            counterexample = c;
        }
    }
    let fs = desc.field();
    Ok(ScanReport {
        family: desc.family(),
        p: fs.p(),
        n: fs.n(),
        queries,
        counterexample,
    })
}

//! The Welch-type lower bound on periodic tolerance and the tightness factor.

use crate::constructions::OptimalityClass;
use crate::error::{Error, Result};

/// Slack allowed when deciding `rho = 1` or `rho <= 2`.
pub const RHO_TOL: f64 = 1e-9;

/// `theta_opt = K N sqrt((M/K - 1) / (M N - 1))`: no set of `M` matrices of
/// size `K x N` can have a smaller maximum nontrivial correlation magnitude.
///
/// ```
/// let t = qcss::verifier::welch_bound(625, 25, 24).unwrap();
/// assert!((t - 24.0008).abs() < 1e-4);
/// assert_eq!(qcss::verifier::welch_bound(8, 8, 7).unwrap(), 0.0);
/// ```
pub fn welch_bound(m: u64, k: u64, n: u64) -> Result<f64> {
    if k == 0 || n == 0 {
        return Err(Error::Domain("K and N must be at least 1".into()));
    }
    if m < k {
        return Err(Error::Domain(format!(
            "the bound is imaginary for M < K (M = {m}, K = {k})"
        )));
    }
    let mn = m as f64 * n as f64;
    if mn <= 1.0 {
        return Err(Error::Domain("the bound needs M N > 1".into()));
    }
    let ratio = (m as f64 / k as f64 - 1.0) / (mn - 1.0);
    Ok(k as f64 * n as f64 * ratio.sqrt())
}

/// `theta_max / theta_opt`. A zero bound is met exactly by `theta_max = 0`
/// (`rho = 1`); any positive `theta_max` is then infinitely far from it.
pub fn rho(theta_max: f64, theta_opt: f64) -> f64 {
    if theta_opt > 0.0 {
        theta_max / theta_opt
    } else if theta_max == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

pub fn classify(rho: f64) -> OptimalityClass {
    if (rho - 1.0).abs() <= RHO_TOL {
        OptimalityClass::Optimal
    } else if rho > 1.0 && rho <= 2.0 + RHO_TOL {
        OptimalityClass::NearOptimal
    } else {
        OptimalityClass::Neither
    }
}

use serde::Serialize;

use super::{Scheme, SegmentChain};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::setcore::{IntegerSet, RepresentationProfile};

/// Largest sets accepted by [`ordering_bound_check`].
pub const ORDERING_CHECK_LIMIT: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Formula {
    Prop31,
    Cor51,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub formula: Formula,
    #[serde(flatten)]
    pub scheme: Scheme,
    #[serde(rename = "J")]
    pub segments: usize,
    pub b: Option<f64>,
    pub c_abs: Option<f64>,
    pub lambda_or_eta: f64,
    /// `Σ ω[A_i]^{1/2}`.
    pub omega_sum: f64,
    pub bound_value: f64,
    /// Multiplicative constant in front of the bracket, when there is one.
    pub implied_constant: Option<f64>,
    pub sizes: Vec<usize>,
    pub omegas: Vec<f64>,
}

fn omega_root_sum(chain: &SegmentChain) -> f64 {
    chain.omegas().iter().map(|w| w.sqrt()).collect::<CompensatedSum>().value()
}

/// `(1 - e^{-b}) (J - b√2/(√λ - 1) · Σ ω[A_i]^{1/2})` for a geometric chain.
/// Negative values are reported as they come.
pub fn prop31_bound(chain: &SegmentChain, b: f64) -> Result<BoundReport> {
    let Scheme::LambdaGeometric { lambda } = chain.scheme() else {
        return Err(Error::domain("this bound needs a lambda-geometric chain"));
    };
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::domain(format!("b = {b} must be positive")));
    }
    if chain.is_empty() {
        return Err(Error::domain("empty segment chain"));
    }
    let omega_sum = omega_root_sum(chain);
    let j = chain.len() as f64;
    let c = -(-b).exp_m1();
    let bound_value = c * (j - b * std::f64::consts::SQRT_2 / (lambda.sqrt() - 1.0) * omega_sum);
    Ok(BoundReport {
        formula: Formula::Prop31,
        scheme: chain.scheme(),
        segments: chain.len(),
        b: Some(b),
        c_abs: None,
        lambda_or_eta: lambda,
        omega_sum,
        bound_value,
        implied_constant: None,
        sizes: chain.sizes().to_vec(),
        omegas: chain.omegas().to_vec(),
    })
}

/// The bracket `J - c_abs·η^{-1}·Σ ω[A_i]^{1/2}` for an `η` chain. The
/// constant `1 - e^{-1}` of the `b = 1` specialisation is reported
/// separately rather than multiplied in.
pub fn cor51_bound(chain: &SegmentChain, c_abs: f64) -> Result<BoundReport> {
    let Scheme::EtaInverse { eta, .. } = chain.scheme() else {
        return Err(Error::domain("this bound needs an eta-inverse chain"));
    };
    if !(c_abs > 0.0 && c_abs.is_finite()) {
        return Err(Error::domain(format!("c_abs = {c_abs} must be positive")));
    }
    if chain.is_empty() {
        return Err(Error::domain("empty segment chain"));
    }
    let omega_sum = omega_root_sum(chain);
    Ok(BoundReport {
        formula: Formula::Cor51,
        scheme: chain.scheme(),
        segments: chain.len(),
        b: None,
        c_abs: Some(c_abs),
        lambda_or_eta: eta,
        omega_sum,
        bound_value: chain.len() as f64 - c_abs / eta * omega_sum,
        implied_constant: Some(-(-1f64).exp_m1()),
        sizes: chain.sizes().to_vec(),
        omegas: chain.omegas().to_vec(),
    })
}

/// `n·m² - m³/3 + m/3`, an upper bound for `E(A, B)` when `|A| = n ≥ m = |B|`.
/// Always an integer since `m³ - m` is divisible by 3.
pub fn gabriel_bound(n: u64, m: u64) -> Result<u128> {
    if m == 0 || m > n {
        return Err(Error::domain(format!("need 1 <= m <= n, got n = {n}, m = {m}")));
    }
    let (n, m) = (n as u128, m as u128);
    Ok(n * m * m - (m * m * m - m) / 3)
}

/// Per-pair representation bound behind [`gabriel_bound`].
///
/// Ranks are 1-based in increasing order: `i` ranks `B` (`1..=m`) and `j`
/// ranks `A` (`1..=n`). Each sum `a_j + b_i` can be hit by at most
/// `1 + min(m-i, j-1) + min(n-j, i-1)` pairs: the pair itself, pairs with a
/// larger `b` and smaller `a`, and pairs with a smaller `b` and larger `a`.
/// Summing the right-hand side over all pairs gives exactly
/// `gabriel_bound(n, m)`.
pub fn ordering_bound(n: usize, m: usize, i: usize, j: usize) -> usize {
    1 + (m - i).min(j - 1) + (n - j).min(i - 1)
}

/// Checks `r(a_j + b_i) ≤ ordering_bound(n, m, i, j)` for every rank pair.
pub fn ordering_bound_check(a: &IntegerSet, b: &IntegerSet) -> Result<bool> {
    let (n, m) = (a.len(), b.len());
    if n > ORDERING_CHECK_LIMIT || m > ORDERING_CHECK_LIMIT {
        return Err(Error::capacity(format!(
            "ordering check is limited to {ORDERING_CHECK_LIMIT} elements per set"
        )));
    }
    if m == 0 || m > n {
        return Err(Error::domain(format!("need 1 <= |B| <= |A|, got {n} and {m}")));
    }
    let profile = RepresentationProfile::of_sumset(a, b);
    for (i, bi) in b.iter().enumerate() {
        for (j, aj) in a.iter().enumerate() {
            if profile.get(aj + bi) as usize > ordering_bound(n, m, i + 1, j + 1) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

use serde::Serialize;

use super::build_chain_eta;
use crate::error::{Error, Result};
use crate::numeric::robust_floor;
use crate::setcore::{additive_energy, initial_segment, IntegerSet};

/// Default `c` in `η = c·δ/K`.
pub const DEFAULT_C_ETA: f64 = 0.25;

/// Constant in the small-`δ` shortcut `δ ≤ C / ln N`.
pub const SMALL_DELTA_CONSTANT: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureOutcome {
    /// The best segment of the `η` chain.
    Chain,
    /// `δ/K ≤ N^{-1/2}`: `A` itself has `ω ≥ 1/N ≥ (δ/K)²`.
    SmallRatio,
    /// `δ ≤ C/ln N`: `A` itself qualifies by Hölder.
    SmallDelta,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureResult {
    pub outcome: StructureOutcome,
    #[serde(skip)]
    pub a_prime: IntegerSet,
    #[serde(rename = "A_prime_size")]
    pub a_prime_size: usize,
    pub omega: f64,
    /// 1-based position of `A'` in the chain; `None` when `A' = A` by a
    /// shortcut.
    pub segment_index: Option<usize>,
    pub eta_used: f64,
    pub delta: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub sizes: Vec<usize>,
    pub all_omegas: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Scans the `η` chain with `η = c_eta·δ/K` and returns its segment of
/// largest normalised energy. No threshold is applied; the caller compares
/// `omega` against `(δ/K)²`.
pub fn find_structured_subset(set: &IntegerSet, k: f64, delta: f64, c_eta: f64) -> Result<StructureResult> {
    let n = set.len();
    if n < 16 {
        return Err(Error::domain(format!("need N >= 16, got {n}")));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::domain(format!("K = {k} must be positive")));
    }
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::domain(format!("delta = {delta} must lie in (0, 1/2]")));
    }
    if !(c_eta > 0.0 && c_eta <= 0.25) {
        return Err(Error::domain(format!("c_eta = {c_eta} must lie in (0, 1/4]")));
    }
    let nf = n as f64;
    let mut warnings = Vec::new();
    let mut eta = c_eta * delta / k;
    if eta > 0.25 {
        warnings.push(format!("eta = {eta} clamped to 1/4"));
        eta = 0.25;
    }

    let shortcut = if delta / k <= nf.powf(-0.5) {
        Some(StructureOutcome::SmallRatio)
    } else if delta <= SMALL_DELTA_CONSTANT / nf.ln() {
        Some(StructureOutcome::SmallDelta)
    } else {
        None
    };
    if let Some(outcome) = shortcut {
        let omega = additive_energy(set)?.omega;
        return Ok(StructureResult {
            outcome,
            a_prime: set.clone(),
            a_prime_size: n,
            omega,
            segment_index: None,
            eta_used: eta,
            delta,
            k,
            sizes: vec![n],
            all_omegas: vec![omega],
            warnings,
        });
    }

    let chain = build_chain_eta(set, delta, eta)?;
    if chain.is_empty() {
        return Err(Error::domain("degenerate chain with no segments"));
    }
    let (best, &omega) = chain
        .omegas()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .unwrap();
    let a_prime = initial_segment(set, chain.sizes()[best])?;
    debug_assert!(a_prime.len() >= robust_floor(nf.powf(1.0 - delta)) as usize);
    Ok(StructureResult {
        outcome: StructureOutcome::Chain,
        a_prime_size: a_prime.len(),
        a_prime,
        omega,
        segment_index: Some(best + 1),
        eta_used: eta,
        delta,
        k,
        sizes: chain.sizes().to_vec(),
        all_omegas: chain.omegas().to_vec(),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcore::{generate, SetRecipe};

    #[test]
    fn interval_is_structured() {
        let a = IntegerSet::interval(0, 2000).unwrap();
        let r = find_structured_subset(&a, 10.0, 0.5, 0.25).unwrap();
        assert_eq!(r.outcome, StructureOutcome::Chain);
        assert!(r.omega >= 2.0 / 3.0 - 1e-3);
        assert!(r.a_prime_size >= 44);
        let max = r.all_omegas.iter().cloned().fold(0.0, f64::max);
        assert_eq!(r.omega, max);
        assert_eq!(r.sizes[r.segment_index.unwrap() - 1], r.a_prime_size);
    }

    #[test]
    fn shortcuts_return_whole_set() {
        let lac = generate(&SetRecipe::Lacunary { start: 1, ratio: 2, length: 40 }, 0).unwrap();
        let r = find_structured_subset(&lac, 10.0, 0.5, 0.25).unwrap();
        assert_eq!(r.outcome, StructureOutcome::SmallRatio);
        assert_eq!(r.a_prime, lac);
        let a = IntegerSet::interval(0, 100).unwrap();
        let r = find_structured_subset(&a, 0.1, 0.2, 0.25).unwrap();
        assert_eq!(r.outcome, StructureOutcome::SmallDelta);
    }

    #[test]
    fn eta_clamped_with_warning() {
        let a = IntegerSet::interval(0, 400).unwrap();
        let r = find_structured_subset(&a, 0.2, 0.5, 0.25).unwrap();
        assert_eq!(r.eta_used, 0.25);
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn parameter_errors() {
        let a = IntegerSet::interval(0, 15).unwrap();
        assert!(find_structured_subset(&a, 1.0, 0.5, 0.25).is_err());
        let a = IntegerSet::interval(0, 100).unwrap();
        assert!(find_structured_subset(&a, 1.0, 0.7, 0.25).is_err());
        assert!(find_structured_subset(&a, 1.0, 0.5, 0.5).is_err());
        assert!(find_structured_subset(&a, 0.0, 0.5, 0.25).is_err());
    }
}

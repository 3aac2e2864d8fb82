use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{robust_ceil, robust_floor};
use crate::setcore::{initial_segment, initial_segment_energies, IntegerSet};

/// How the segment sizes of a chain were generated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum Scheme {
    /// Seed `⌊ln N⌋`, then `⌈λ·|A_j|⌉`.
    LambdaGeometric { lambda: f64 },
    /// Seed `⌊N^{1-δ}⌋`, then `⌈|A_j| / (1 - η)⌉`.
    EtaInverse { delta: f64, eta: f64 },
}

/// Nested initial segments `A₁ ⊆ … ⊆ A_J` of a base set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SegmentChain {
    #[serde(skip)]
    base: IntegerSet,
    #[serde(flatten)]
    scheme: Scheme,
    sizes: Vec<usize>,
    energies: Vec<u128>,
    omegas: Vec<f64>,
}

impl SegmentChain {
    fn from_sizes(base: &IntegerSet, scheme: Scheme, sizes: Vec<usize>) -> Result<Self> {
        let energies = initial_segment_energies(base, &sizes)?;
        let omegas = sizes
            .iter()
            .zip(&energies)
            .map(|(&k, &e)| e as f64 / (k as f64).powi(3))
            .collect();
        Ok(Self {
            base: base.clone(),
            scheme,
            sizes,
            energies,
            omegas,
        })
    }

    pub fn base(&self) -> &IntegerSet {
        &self.base
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn energies(&self) -> &[u128] {
        &self.energies
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    /// Number of segments `J`.
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// The `j`-th segment, 1-based.
    pub fn segment(&self, j: usize) -> Result<IntegerSet> {
        let k = *self
            .sizes
            .get(j.wrapping_sub(1))
            .ok_or_else(|| Error::domain(format!("segment index {j} outside 1..={}", self.len())))?;
        initial_segment(&self.base, k)
    }

    /// `J / (ln N / ln λ)` for geometric chains; tends to 1 from below.
    pub fn length_ratio(&self) -> Option<f64> {
        match self.scheme {
            Scheme::LambdaGeometric { lambda } => {
                let n = self.base.len() as f64;
                Some(self.len() as f64 * lambda.ln() / n.ln())
            }
            Scheme::EtaInverse { .. } => None,
        }
    }
}

fn grow(seed: usize, limit: usize, step: impl Fn(usize) -> f64) -> Vec<usize> {
    let mut sizes = vec![seed];
    loop {
        let prev = *sizes.last().unwrap();
        let next = (robust_ceil(step(prev)) as usize).max(prev + 1);
        if next > limit {
            return sizes;
        }
        sizes.push(next);
    }
}

/// Geometric chain: `A₁` holds the `⌊ln N⌋` smallest elements and
/// `|A_{j+1}| = ⌈λ|A_j|⌉` as long as that does not exceed `N`.
pub fn build_chain_lambda(set: &IntegerSet, lambda: f64) -> Result<SegmentChain> {
    if !(lambda > 1.0 && lambda.is_finite()) {
        return Err(Error::domain(format!("lambda = {lambda} must exceed 1")));
    }
    let n = set.len();
    if n < 3 {
        return Err(Error::domain(format!(
            "a geometric chain needs N >= 3 so that floor(ln N) >= 1, got N = {n}"
        )));
    }
    let seed = robust_floor((n as f64).ln()) as usize;
    let sizes = grow(seed, n, |k| lambda * k as f64);
    SegmentChain::from_sizes(set, Scheme::LambdaGeometric { lambda }, sizes)
}

/// Chain with `A₁` the `⌊N^{1-δ}⌋` smallest elements and
/// `|A_{j+1}| = ⌈|A_j|/(1-η)⌉` as long as that does not exceed `N`.
pub fn build_chain_eta(set: &IntegerSet, delta: f64, eta: f64) -> Result<SegmentChain> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::domain(format!("delta = {delta} must lie in (0, 1/2]")));
    }
    if !(eta > 0.0 && eta <= 0.25) {
        return Err(Error::domain(format!("eta = {eta} must lie in (0, 1/4]")));
    }
    let n = set.len();
    let seed = robust_floor((n as f64).powf(1.0 - delta)) as usize;
    if seed == 0 {
        return Err(Error::domain("floor(N^(1-delta)) is 0; the set is too small"));
    }
    let sizes = grow(seed, n, |k| k as f64 / (1.0 - eta));
    SegmentChain::from_sizes(set, Scheme::EtaInverse { delta, eta }, sizes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_traces() {
        let a = IntegerSet::interval(1, 100).unwrap();
        assert_eq!(build_chain_lambda(&a, 36.1127893).unwrap().sizes(), &[4]);
        let c = build_chain_lambda(&a, 2.0).unwrap();
        assert_eq!(c.sizes(), &[4, 8, 16, 32, 64]);
        assert_eq!(c.len(), 5);
        assert!(build_chain_lambda(&IntegerSet::interval(0, 2).unwrap(), 2.0).is_err());
        assert!(build_chain_lambda(&a, 1.0).is_err());
    }

    #[test]
    fn eta_traces() {
        let a = IntegerSet::interval(0, 20).unwrap();
        let c = build_chain_eta(&a, 0.5, 0.25).unwrap();
        assert_eq!(c.sizes(), &[4, 6, 8, 11, 15, 20]);
        let b = IntegerSet::interval(0, 16).unwrap();
        assert_eq!(build_chain_eta(&b, 0.5, 0.1).unwrap().sizes()[0], 4);
        assert!(build_chain_eta(&a, 0.6, 0.1).is_err());
        assert!(build_chain_eta(&a, 0.5, 0.3).is_err());
    }

    #[test]
    fn omegas_match_energy_definition() {
        let a = IntegerSet::new(vec![0, 1, 3, 7, 12, 20, 21, 40, 41, 42]).unwrap();
        let c = build_chain_lambda(&a, 2.0).unwrap();
        assert_eq!(c.sizes(), &[2, 4, 8]);
        for j in 1..=c.len() {
            let seg = c.segment(j).unwrap();
            let e = crate::setcore::additive_energy(&seg).unwrap();
            assert_eq!(c.energies()[j - 1], e.energy);
            assert!((c.omegas()[j - 1] - e.omega).abs() < 1e-15);
        }
        assert!(c.segment(0).is_err());
        assert!(c.segment(4).is_err());
    }
}

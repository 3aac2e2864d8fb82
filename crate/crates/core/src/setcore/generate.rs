use rand::{seq::index::sample, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{IntegerSet, ELEMENT_BOUND};
use crate::error::{Error, Result};

/// Recipes for the test-set factory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetRecipe {
    Interval { start: i64, length: usize },
    ArithmeticProgression { start: i64, step: i64, length: usize },
    /// `{start·ratio^k : 0 ≤ k < length}`.
    Lacunary { start: i64, ratio: i64, length: usize },
    /// A uniformly random subset of `[0, universe)` with
    /// `round(density·universe)` elements (at least one).
    RandomSubset { universe: u64, density: f64 },
    /// Union of progressions given as `(start, step, length)`.
    UnionOfAps { aps: Vec<(i64, i64, usize)> },
}

fn progression(start: i64, step: i64, length: usize) -> Result<Vec<i64>> {
    if length == 0 {
        return Err(Error::domain("progression length must be at least 1"));
    }
    if step == 0 {
        return Err(Error::domain("progression step must be nonzero"));
    }
    let last = (length as i128 - 1) * step as i128 + start as i128;
    if last.abs() > ELEMENT_BOUND as i128 {
        return Err(Error::domain("progression leaves the element bound 2^48"));
    }
    Ok((0..length as i64).map(|k| start + k * step).collect())
}

/// Deterministic test-set generator; `seed` only matters for random kinds.
pub fn generate(recipe: &SetRecipe, seed: u64) -> Result<IntegerSet> {
    match recipe {
        SetRecipe::Interval { start, length } => IntegerSet::new(progression(*start, 1, *length)?),
        SetRecipe::ArithmeticProgression { start, step, length } => {
            IntegerSet::new(progression(*start, *step, *length)?)
        }
        SetRecipe::Lacunary { start, ratio, length } => {
            if *ratio < 2 {
                return Err(Error::domain("lacunary ratio must be at least 2"));
            }
            if *length == 0 {
                return Err(Error::domain("lacunary length must be at least 1"));
            }
            if *start == 0 {
                return Err(Error::domain("lacunary start must be nonzero"));
            }
            let mut out = Vec::with_capacity(*length);
            let mut x = *start as i128;
            for _ in 0..*length {
                if x.abs() > ELEMENT_BOUND as i128 {
                    return Err(Error::domain("lacunary set leaves the element bound 2^48"));
                }
                out.push(x as i64);
                x *= *ratio as i128;
            }
            IntegerSet::new(out)
        }
        SetRecipe::RandomSubset { universe, density } => {
            if !(*density > 0.0 && *density <= 1.0) {
                return Err(Error::domain("density must lie in (0, 1]"));
            }
            if *universe == 0 || *universe > ELEMENT_BOUND as u64 {
                return Err(Error::domain("universe size must lie in 1..=2^48"));
            }
            let size = ((*density * *universe as f64).round() as u64).clamp(1, *universe);
            if *universe > usize::MAX as u64 || size > (1 << 26) {
                return Err(Error::capacity("random subset too large to sample"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let picked = sample(&mut rng, *universe as usize, size as usize);
            IntegerSet::new(picked.into_iter().map(|i| i as i64).collect())
        }
        SetRecipe::UnionOfAps { aps } => {
            if aps.is_empty() {
                return Err(Error::domain("union of progressions needs at least one progression"));
            }
            let mut all = Vec::new();
            for &(start, step, length) in aps {
                all.extend(progression(start, step, length)?);
            }
            IntegerSet::new(all)
        }
    }
}

/// Uniform random `size`-subset of `[0, universe)`.
pub fn random_subset(universe: u64, size: usize, seed: u64) -> Result<IntegerSet> {
    if size == 0 || size as u64 > universe {
        return Err(Error::domain("random subset size must lie in 1..=universe"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = sample(&mut rng, universe as usize, size);
    IntegerSet::new(picked.into_iter().map(|i| i as i64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_examples() {
        let interval = generate(&SetRecipe::Interval { start: 0, length: 5 }, 0).unwrap();
        assert_eq!(interval.elements(), &[0, 1, 2, 3, 4]);
        let ap = generate(
            &SetRecipe::ArithmeticProgression { start: 3, step: 4, length: 3 },
            0,
        )
        .unwrap();
        assert_eq!(ap.elements(), &[3, 7, 11]);
        let lac = generate(&SetRecipe::Lacunary { start: 1, ratio: 2, length: 4 }, 0).unwrap();
        assert_eq!(lac.elements(), &[1, 2, 4, 8]);
        let neg = generate(
            &SetRecipe::ArithmeticProgression { start: 0, step: -3, length: 3 },
            0,
        )
        .unwrap();
        assert_eq!(neg.elements(), &[-6, -3, 0]);
    }

    #[test]
    fn random_subset_is_seeded() {
        let recipe = SetRecipe::RandomSubset { universe: 1000, density: 0.1 };
        let a = generate(&recipe, 7).unwrap();
        let b = generate(&recipe, 7).unwrap();
        let c = generate(&recipe, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 100);
        assert!(a.iter().all(|x| (0..1000).contains(&x)));
    }

    #[test]
    fn union_of_aps_merges() {
        let u = generate(&SetRecipe::UnionOfAps { aps: vec![(0, 2, 3), (1, 2, 2), (4, 1, 2)] }, 0).unwrap();
        assert_eq!(u.elements(), &[0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn invalid_parameters() {
        let bad = [
            SetRecipe::Interval { start: 0, length: 0 },
            SetRecipe::ArithmeticProgression { start: 0, step: 0, length: 3 },
            SetRecipe::Lacunary { start: 1, ratio: 1, length: 3 },
            SetRecipe::Lacunary { start: 1, ratio: 2, length: 60 },
            SetRecipe::RandomSubset { universe: 10, density: 0.0 },
            SetRecipe::RandomSubset { universe: 10, density: 1.5 },
            SetRecipe::UnionOfAps { aps: vec![] },
        ];
        for r in &bad {
            assert!(matches!(generate(r, 1), Err(Error::Domain(_))), "{r:?}");
        }
    }
}

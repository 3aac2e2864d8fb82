//! Exact combinatorics on finite integer sets.
//!
//! Everything in this module is integer arithmetic: representation counts,
//! additive energy, initial segments, dissociation and the test-set
//! generators. The spectral module cross-checks the energy numerically.

mod dissociation;
mod energy;
mod generate;
mod io;

pub use dissociation::{greedy_dissociated_subset, is_dissociated, DISSOCIATION_LIMIT};
pub use energy::{
    additive_energy, cross_energy, initial_segment_energies, prefix_energies, EnergyReport, RepresentationProfile,
    MAX_ENERGY_SIZE,
};
pub use generate::{generate, random_subset, SetRecipe};
pub use io::{format_set_json, format_set_text, parse_set, read_set_file};

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest admissible magnitude of a set element. Sums of up to a few
/// thousand elements then stay far inside `i64`.
pub const ELEMENT_BOUND: i64 = 1 << 48;

/// A finite set of integers stored as a strictly increasing sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct IntegerSet {
    elements: Vec<i64>,
}

impl IntegerSet {
    /// Builds a set from arbitrary integers; sorts and removes duplicates.
    pub fn new(mut elements: Vec<i64>) -> Result<Self> {
        check_bounds(&elements)?;
        elements.sort_unstable();
        elements.dedup();
        Ok(Self { elements })
    }

    /// Builds a set from an already strictly increasing sequence.
    pub fn from_sorted(elements: Vec<i64>) -> Result<Self> {
        check_bounds(&elements)?;
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("elements are not strictly increasing"));
        }
        Ok(Self { elements })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `{start, start + 1, ..., start + length - 1}`.
    pub fn interval(start: i64, length: usize) -> Result<Self> {
        Self::from_sorted((0..length as i64).map(|i| start + i).collect())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.elements.iter().copied()
    }

    pub fn min(&self) -> Option<i64> {
        self.elements.first().copied()
    }

    pub fn max(&self) -> Option<i64> {
        self.elements.last().copied()
    }

    /// `max - min`, and 0 for empty sets and singletons.
    pub fn spread(&self) -> u64 {
        match (self.min(), self.max()) {
            (Some(lo), Some(hi)) => (hi - lo) as u64,
            _ => 0,
        }
    }

    pub fn contains(&self, x: i64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &IntegerSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    /// The affine image `t + s·A`.
    pub fn affine_image(&self, translate: i64, scale: i64) -> Result<Self> {
        if scale == 0 {
            return Err(Error::domain("dilation factor must be nonzero"));
        }
        let mapped = self
            .iter()
            .map(|x| {
                x.checked_mul(scale)
                    .and_then(|y| y.checked_add(translate))
                    .ok_or_else(|| Error::domain("affine image overflows i64"))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(mapped)
    }

    /// Consumes the set, returning the sorted elements.
    pub fn into_vec(self) -> Vec<i64> {
        self.elements
    }
}

impl TryFrom<Vec<i64>> for IntegerSet {
    type Error = Error;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        Self::new(v)
    }
}

fn check_bounds(elements: &[i64]) -> Result<()> {
    if let Some(&x) = elements.iter().find(|x| x.abs() > ELEMENT_BOUND) {
        return Err(Error::domain(format!(
            "element {x} exceeds the magnitude bound 2^48"
        )));
    }
    Ok(())
}

/// The `k` smallest elements of `set`, i.e. `A ∩ (-∞, x]` for the `k`-th
/// element `x`.
pub fn initial_segment(set: &IntegerSet, k: usize) -> Result<IntegerSet> {
    if k == 0 || k > set.len() {
        return Err(Error::domain(format!(
            "initial segment size {k} outside 1..={}",
            set.len()
        )));
    }
    Ok(IntegerSet {
        elements: set.elements[..k].to_vec(),
    })
}

//! Dissociated sets: all `2^|X|` subset sums distinct.
//!
//! Two distinct subsets with the same sum differ by a nonzero signed
//! combination `Σ ε_i x_i = 0` with `ε ∈ {-1, 0, 1}^|X|`, so the checks here
//! work with signed sums split into two halves (meet in the middle). A half
//! of size 15 has `3^15 ≈ 1.4·10^7` signed sums, which keeps the exhaustive
//! limit of 30 elements within a few hundred megabytes.

use super::IntegerSet;
use crate::error::{Error, Result};

/// Largest set handled by the exhaustive checks.
pub const DISSOCIATION_LIMIT: usize = 30;

/// Sorted multiset of `Σ ε_i x_i` over `ε ∈ {-1, 0, 1}^k`.
fn signed_sums(xs: &[i64]) -> Vec<i64> {
    let mut sums = Vec::with_capacity(3usize.pow(xs.len() as u32));
    sums.push(0i64);
    for &x in xs {
        let len = sums.len();
        for i in 0..len {
            let s = sums[i];
            sums.push(s + x);
            sums.push(s - x);
        }
    }
    sums.sort_unstable();
    sums
}

/// Signed sums of a fixed list, split into two sorted halves.
struct SignedSpan {
    left: Vec<i64>,
    right: Vec<i64>,
}

impl SignedSpan {
    fn new(xs: &[i64]) -> Self {
        let mid = xs.len() / 2;
        Self {
            left: signed_sums(&xs[..mid]),
            right: signed_sums(&xs[mid..]),
        }
    }

    /// Is `x = l + r` for some left sum `l` and right sum `r`?
    fn contains(&self, x: i64) -> bool {
        let mut j = self.right.len();
        for &l in &self.left {
            let target = x - l;
            while j > 0 && self.right[j - 1] > target {
                j -= 1;
            }
            if j == 0 {
                return false;
            }
            if self.right[j - 1] == target {
                return true;
            }
        }
        false
    }

    /// Number of pairs `(l, r)` with `l + r = 0`, counted with multiplicity.
    fn zero_representations(&self) -> u64 {
        // Signed sums are symmetric, so l + r = 0 iff l = -r iff l matches
        // some r' = -r, and -r ranges over the same multiset as r.
        let (a, b) = (&self.left, &self.right);
        let (mut i, mut j, mut total) = (0usize, 0usize, 0u64);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let v = a[i];
                    let ca = a[i..].iter().take_while(|&&x| x == v).count();
                    let cb = b[j..].iter().take_while(|&&x| x == v).count();
                    total += (ca * cb) as u64;
                    i += ca;
                    j += cb;
                }
            }
        }
        total
    }
}

/// True iff all `2^|X|` subset sums of `X` are pairwise distinct.
pub fn is_dissociated(set: &IntegerSet) -> Result<bool> {
    if set.len() > DISSOCIATION_LIMIT {
        return Err(Error::capacity(format!(
            "dissociation check is exhaustive and limited to {DISSOCIATION_LIMIT} elements, got {}",
            set.len()
        )));
    }
    // The all-zero sign vector always represents 0; any other one is a
    // collision between two subset sums.
    Ok(SignedSpan::new(set.elements()).zero_representations() == 1)
}

/// Greedy dissociated subset: scan `A` in increasing order and keep every
/// element that leaves the running subset-sum set collision free.
///
/// The result is dissociated and its size is a lower bound for the
/// dimension of `A`.
pub fn greedy_dissociated_subset(set: &IntegerSet) -> Result<IntegerSet> {
    if set.is_empty() {
        return Err(Error::domain("greedy dissociated subset of an empty set"));
    }
    let mut chosen: Vec<i64> = Vec::new();
    let mut span = SignedSpan::new(&chosen);
    for x in set.iter() {
        // x can join iff x is not a signed combination of the chosen ones.
        if span.contains(x) {
            continue;
        }
        if chosen.len() == DISSOCIATION_LIMIT {
            return Err(Error::capacity(format!(
                "greedy dissociated subset would exceed 2^{DISSOCIATION_LIMIT} subset sums"
            )));
        }
        chosen.push(x);
        span = SignedSpan::new(&chosen);
    }
    IntegerSet::from_sorted(chosen)
}

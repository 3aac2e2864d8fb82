use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::IntegerSet;
use crate::error::{Error, Result};

/// Sets larger than this are rejected by the energy routines.
pub const MAX_ENERGY_SIZE: usize = 1 << 20;

/// Sum ranges up to this width use a dense count table.
const DENSE_SUM_RANGE: u64 = 1 << 24;

/// `r(x)`: the number of ordered pairs `(a, b) ∈ A × B` with `a + b = x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationProfile {
    counts: BTreeMap<i64, u64>,
}

impl RepresentationProfile {
    pub fn of_sumset(a: &IntegerSet, b: &IntegerSet) -> Self {
        let mut counts = BTreeMap::new();
        for x in a.iter() {
            for y in b.iter() {
                *counts.entry(x + y).or_insert(0) += 1;
            }
        }
        Self { counts }
    }

    pub fn get(&self, x: i64) -> u64 {
        self.counts.get(&x).copied().unwrap_or(0)
    }

    /// `Σ_x r(x)`, which equals `|A|·|B|`.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `Σ_x r(x)²`, the cross energy `E(A, B)`.
    pub fn square_sum(&self) -> u128 {
        self.counts.values().map(|&r| (r as u128) * (r as u128)).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.counts.iter().map(|(&x, &r)| (x, r))
    }
}

/// Additive energy of a set together with its normalisation `ω = E / N³`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyReport {
    #[serde(rename = "N")]
    pub size: usize,
    #[serde(rename = "E")]
    pub energy: u128,
    pub omega: f64,
}

impl EnergyReport {
    pub(crate) fn new(size: usize, energy: u128) -> Self {
        let n = size as f64;
        Self {
            size,
            energy,
            omega: energy as f64 / (n * n * n),
        }
    }
}

/// Counts of `x` in a sumset, dense when the range is small and hashed
/// otherwise.
enum SumTable {
    Dense { base: i64, counts: Vec<u32> },
    Sparse(HashMap<i64, u32>),
}

impl SumTable {
    fn new(lo: i64, hi: i64) -> Self {
        let width = (hi - lo) as u64 + 1;
        if width <= DENSE_SUM_RANGE {
            SumTable::Dense {
                base: lo,
                counts: vec![0; width as usize],
            }
        } else {
            SumTable::Sparse(HashMap::new())
        }
    }

    /// Adds `by` to the count at `x`, returning the previous count.
    #[inline]
    fn bump(&mut self, x: i64, by: u32) -> u32 {
        match self {
            SumTable::Dense { base, counts } => {
                let slot = &mut counts[(x - *base) as usize];
                let old = *slot;
                *slot += by;
                old
            }
            SumTable::Sparse(map) => {
                let slot = map.entry(x).or_insert(0);
                let old = *slot;
                *slot += by;
                old
            }
        }
    }

    fn square_sum(&self) -> u128 {
        let sq = |&r: &u32| (r as u128) * (r as u128);
        match self {
            SumTable::Dense { counts, .. } => counts.iter().map(sq).sum(),
            SumTable::Sparse(map) => map.values().map(sq).sum(),
        }
    }
}

fn check_size(set: &IntegerSet, what: &str) -> Result<()> {
    if set.is_empty() {
        return Err(Error::domain(format!("{what} of an empty set is undefined")));
    }
    if set.len() > MAX_ENERGY_SIZE {
        return Err(Error::capacity(format!(
            "{what}: set size {} exceeds 2^20",
            set.len()
        )));
    }
    Ok(())
}

/// Energies `E(A_k)` of every initial segment `A_k` (the `k` smallest
/// elements), for `k = 1..=len`.
///
/// Adding a new element `a` to `S` changes the representation function by
/// `r'(x) = r(x) + 2·[x - a ∈ S] + [x = 2a]`, so the energy grows by
/// `Σ_{s∈S} (4 r(a+s) + 4) + 2 r(2a) + 1`. The whole profile therefore costs
/// `O(len²)` rather than `O(len³)`.
pub fn prefix_energies(set: &IntegerSet, len: usize) -> Result<Vec<u128>> {
    check_size(set, "additive energy")?;
    if len == 0 || len > set.len() {
        return Err(Error::domain(format!("prefix length {len} outside 1..={}", set.len())));
    }
    let elems = &set.elements()[..len];
    let lo = 2 * elems[0];
    let hi = 2 * elems[len - 1];
    let mut table = SumTable::new(lo, hi);
    let mut energy: u128 = 0;
    let mut out = Vec::with_capacity(len);
    for (k, &a) in elems.iter().enumerate() {
        let mut delta: u128 = 0;
        for &s in &elems[..k] {
            let old = table.bump(a + s, 2) as u128;
            delta += 4 * old + 4;
        }
        let old = table.bump(2 * a, 1) as u128;
        delta += 2 * old + 1;
        energy += delta;
        out.push(energy);
    }
    Ok(out)
}

/// `E(B) = #{(b1, b2, b3, b4) ∈ B⁴ : b1 + b2 = b3 + b4}`.
pub fn additive_energy(set: &IntegerSet) -> Result<EnergyReport> {
    let energies = prefix_energies(set, set.len())?;
    Ok(EnergyReport::new(set.len(), *energies.last().unwrap()))
}

/// Common difference of an arithmetic progression with at least two
/// elements, `None` otherwise.
fn progression_step(set: &IntegerSet) -> Option<i64> {
    let e = set.elements();
    if e.len() < 2 {
        return None;
    }
    let step = e[1] - e[0];
    e.windows(2).all(|w| w[1] - w[0] == step).then_some(step)
}

/// `E(A_k)` for each requested initial-segment size `k`.
///
/// Segments of an arithmetic progression are progressions, whose energy is
/// `(2k³ + k)/3` in closed form; everything else goes through
/// [`prefix_energies`] once, up to the largest size.
pub fn initial_segment_energies(set: &IntegerSet, sizes: &[usize]) -> Result<Vec<u128>> {
    check_size(set, "additive energy")?;
    let Some(&largest) = sizes.iter().max() else {
        return Ok(Vec::new());
    };
    if sizes.contains(&0) || largest > set.len() {
        return Err(Error::domain(format!("segment sizes must lie in 1..={}", set.len())));
    }
    if progression_step(set).is_some() {
        return Ok(sizes
            .iter()
            .map(|&k| {
                let k = k as u128;
                (2 * k * k * k + k) / 3
            })
            .collect());
    }
    let prefix = prefix_energies(set, largest)?;
    Ok(sizes.iter().map(|&k| prefix[k - 1]).collect())
}

/// `E(A, B) = #{(a1, b1, a2, b2) ∈ A × B × A × B : a1 + b1 = a2 + b2}`.
pub fn cross_energy(a: &IntegerSet, b: &IntegerSet) -> Result<u128> {
    check_size(a, "cross energy")?;
    check_size(b, "cross energy")?;
    let lo = a.min().unwrap() + b.min().unwrap();
    let hi = a.max().unwrap() + b.max().unwrap();
    let mut table = SumTable::new(lo, hi);
    for x in a.iter() {
        for y in b.iter() {
            table.bump(x + y, 1);
        }
    }
    Ok(table.square_sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[i64]) -> IntegerSet {
        IntegerSet::new(v.to_vec()).unwrap()
    }

    /// Exhaustive count over all |B|⁴ quadruples.
    fn brute_energy(b: &IntegerSet) -> u128 {
        let e = b.elements();
        let mut count = 0u128;
        for &x1 in e {
            for &x2 in e {
                for &x3 in e {
                    for &x4 in e {
                        if x1 + x2 == x3 + x4 {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn known_energies() {
        let r = additive_energy(&set(&[5])).unwrap();
        assert_eq!((r.energy, r.omega), (1, 1.0));
        let r = additive_energy(&set(&[0, 1, 2])).unwrap();
        assert_eq!(r.energy, 19);
        assert_eq!(brute_energy(&set(&[0, 1, 2])), 19);
        assert!((r.omega - 19.0 / 27.0).abs() < 1e-15);
        assert_eq!(additive_energy(&set(&[0, 1, 3])).unwrap().energy, 15);
        assert_eq!(brute_energy(&set(&[0, 1, 3])), 15);
    }

    #[test]
    fn interval_closed_form() {
        for n in 1..=50u128 {
            let a = IntegerSet::interval(0, n as usize).unwrap();
            let closed = (2 * n * n * n + n) / 3;
            assert_eq!(additive_energy(&a).unwrap().energy, closed, "n = {n}");
            if n <= 15 {
                assert_eq!(brute_energy(&a), closed);
            }
        }
    }

    #[test]
    fn prefix_profile_matches_direct() {
        let a = set(&[-7, -3, 0, 1, 4, 9, 10, 22]);
        let prefix = prefix_energies(&a, a.len()).unwrap();
        for k in 1..=a.len() {
            let seg = super::super::initial_segment(&a, k).unwrap();
            assert_eq!(prefix[k - 1], brute_energy(&seg));
        }
    }

    #[test]
    fn segment_energies_fast_path_agrees() {
        let ap = IntegerSet::new((0..40).map(|i| 7 - 3 * i).collect()).unwrap();
        let sizes = [1, 2, 5, 17, 40];
        let fast = initial_segment_energies(&ap, &sizes).unwrap();
        let prefix = prefix_energies(&ap, 40).unwrap();
        for (k, e) in sizes.iter().zip(&fast) {
            assert_eq!(*e, prefix[k - 1]);
        }
        let other = set(&[0, 1, 3, 7, 12]);
        assert_eq!(
            initial_segment_energies(&other, &[2, 5]).unwrap(),
            vec![brute_energy(&set(&[0, 1])), brute_energy(&other)]
        );
        assert!(initial_segment_energies(&other, &[6]).is_err());
    }

    #[test]
    fn cross_energy_examples() {
        let a = set(&[0, 1, 2]);
        assert_eq!(cross_energy(&a, &a).unwrap(), 19);
        let m = IntegerSet::interval(0, 7).unwrap();
        assert_eq!(cross_energy(&set(&[0]), &m).unwrap(), 7);
    }

    #[test]
    fn profile_invariants() {
        let a = set(&[0, 2, 3, 9]);
        let b = set(&[1, 4, 5]);
        let p = RepresentationProfile::of_sumset(&a, &b);
        assert_eq!(p.total(), 12);
        assert_eq!(p.square_sum(), cross_energy(&a, &b).unwrap());
        assert_eq!(p.get(4), 2);
        assert_eq!(p.get(5), 1);
        assert_eq!(p.get(2), 0);
    }

    #[test]
    fn sparse_table_path() {
        // Sum range wider than the dense limit.
        let a = set(&[0, 1 << 30, (1 << 30) + 1, 1 << 31]);
        assert_eq!(additive_energy(&a).unwrap().energy, brute_energy(&a));
        assert_eq!(cross_energy(&a, &a).unwrap(), brute_energy(&a));
    }

    #[test]
    fn empty_inputs_rejected() {
        let e = IntegerSet::empty();
        assert!(matches!(additive_energy(&e), Err(Error::Domain(_))));
        assert!(matches!(cross_energy(&e, &set(&[1])), Err(Error::Domain(_))));
    }
}

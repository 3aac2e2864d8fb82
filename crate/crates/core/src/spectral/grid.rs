use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{fft, SupportedFunction};
use crate::error::{Error, Result};
use crate::numeric::{next_pow2, round_sig12};

/// `M` samples `values[k] = f̂(k/M)` of a transform.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralGrid {
    pub values: Vec<Complex64>,
    /// `(support_min, support_max)` of the sampled function.
    pub source_support: Option<(i64, i64)>,
}

/// Metadata of a grid without its samples.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GridSummary {
    #[serde(rename = "M")]
    pub size: usize,
    pub source_spread: u64,
    pub alias_free_products: bool,
}

impl SpectralGrid {
    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn theta(&self, k: usize) -> f64 {
        k as f64 / self.size() as f64
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn summary(&self) -> GridSummary {
        let spread = self
            .source_support
            .map(|(lo, hi)| (hi - lo) as u64)
            .unwrap_or(0);
        GridSummary {
            size: self.size(),
            source_spread: spread,
            alias_free_products: (spread as u128) * 2 < self.size() as u128,
        }
    }

    /// CSV with header `theta,abs,re,im`, one row per sample.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "theta,abs,re,im")?;
        for (k, v) in self.values.iter().enumerate() {
            writeln!(out, "{},{},{},{}", self.theta(k), round_sig12(v.norm()), round_sig12(v.re), round_sig12(v.im))?;
        }
        Ok(())
    }
}

/// Samples on an `M` point grid, assuming `spread(f) < M` (no aliasing);
/// the support is embedded by residue mod `M`.
pub(crate) fn sample(f: &SupportedFunction, size: usize) -> Vec<Complex64> {
    debug_assert!((f.spread() as u128) < size as u128);
    let mut buf = vec![Complex64::new(0.0, 0.0); size];
    let m = size as i64;
    let start = f.offset().rem_euclid(m) as usize;
    for (k, &v) in f.values().iter().enumerate() {
        buf[(start + k) % size] = v;
    }
    fft::forward(&mut buf);
    buf
}

/// Grid size for sup estimates: a power of two with at least twice the
/// Nyquist density for `spread`.
pub(crate) fn sup_grid_size(spread: u64) -> Result<usize> {
    let m = next_pow2((2 * (spread as usize + 1)).max(8192));
    if m > super::MAX_GRID {
        return Err(Error::capacity(format!(
            "sup estimate for spread {spread} would need a grid of {m} > 2^26 points"
        )));
    }
    Ok(m)
}

/// `max_k |f̂(k/M)|` on the default sup grid.
pub fn grid_sup(f: &SupportedFunction) -> Result<(f64, usize)> {
    let m = sup_grid_size(f.spread())?;
    let s = sample(f, m).par_iter().map(|v| v.norm()).reduce(|| 0.0, f64::max);
    Ok((s, m))
}

/// Samples `f̂(k/M)`, `k = 0..M`, by a single FFT.
pub fn transform(f: &SupportedFunction, size: usize) -> Result<SpectralGrid> {
    if !size.is_power_of_two() {
        return Err(Error::domain(format!("grid size {size} is not a power of two")));
    }
    let required = next_pow2(2 * (f.spread() as usize + 1));
    if size < required {
        return Err(Error::Aliasing { grid: size, required });
    }
    Ok(SpectralGrid {
        values: sample(f, size),
        source_support: f.support_min().zip(f.support_max()),
    })
}

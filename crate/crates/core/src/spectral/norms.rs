use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{fft, grid::sample, SupportedFunction, MAX_GRID};
use crate::error::{Error, Result};
use crate::numeric::{next_pow2, CompensatedSum};
use crate::setcore::{additive_energy, IntegerSet};

/// Default relative tolerance of the `L¹` quadrature.
pub const DEFAULT_REL_TOL: f64 = 1e-6;

/// Largest spread accepted by [`l4_energy_check`].
pub const MAX_L4_SPREAD: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormReport {
    pub l1: f64,
    pub l2: f64,
    pub l4: f64,
    pub linf: f64,
    pub grid_used: usize,
    /// Relative change of `l1` over the last grid doubling.
    pub certified_rel_error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyCheck {
    pub spectral: f64,
    pub exact: u128,
    pub grid: usize,
}

#[derive(Default)]
struct PowerSums {
    s1: CompensatedSum,
    s2: CompensatedSum,
    s4: CompensatedSum,
    max: f64,
}

impl PowerSums {
    fn merge(&mut self, other: &PowerSums) {
        self.s1.add(other.s1.value());
        self.s2.add(other.s2.value());
        self.s4.add(other.s4.value());
        self.max = self.max.max(other.max);
    }
}

/// Power sums of `|f̂((j + phase)/P)|` over `j = 0..P`, where `local` holds
/// `f` shifted to start at 0. The shift does not change `|f̂|`.
fn block(local: &[Complex64], size: usize, phase: f64) -> PowerSums {
    let mut buf = vec![Complex64::new(0.0, 0.0); size];
    let step = phase / size as f64;
    for (m, (&v, slot)) in local.iter().zip(buf.iter_mut()).enumerate() {
        *slot = v * fft::unit(-(m as f64) * step);
    }
    fft::forward(&mut buf);
    let mut sums = PowerSums::default();
    for v in &buf {
        let a2 = v.norm_sqr();
        let a = a2.sqrt();
        sums.s1.add(a);
        sums.s2.add(a2);
        sums.s4.add(a2 * a2);
        sums.max = sums.max.max(a);
    }
    sums
}

fn level(local: &[Complex64], size: usize, phases: &[f64]) -> PowerSums {
    let parts: Vec<PowerSums> = phases.par_iter().map(|&p| block(local, size, p)).collect();
    let mut total = PowerSums::default();
    for p in &parts {
        total.merge(p);
    }
    total
}

/// `∫₀¹ |f̂(θ)| dθ` by trapezoidal sums on grids `M₀, 2M₀, 4M₀, …`.
///
/// `M₀` is the power of two at or above `max(4096, 16·(spread+1))`. Each
/// doubling only evaluates the new midpoints, in FFT blocks of a fixed
/// size, so memory stays proportional to the spread rather than the grid.
/// Stops once two successive grids agree to `rel_tol` relatively.
pub fn l1_norm(f: &SupportedFunction, rel_tol: f64) -> Result<NormReport> {
    l1_norm_capped(f, rel_tol, MAX_GRID)
}

/// [`l1_norm`] with an explicit largest grid.
pub fn l1_norm_capped(f: &SupportedFunction, rel_tol: f64, max_grid: usize) -> Result<NormReport> {
    if f.is_zero() {
        return Err(Error::domain("L1 norm of the zero function"));
    }
    if !(rel_tol >= 1e-10) {
        return Err(Error::domain(format!("rel_tol {rel_tol} below 1e-10")));
    }
    let spread = f.spread() as usize;
    let m0 = next_pow2((16 * (spread + 1)).max(4096));
    if m0 > max_grid {
        return Err(Error::capacity(format!(
            "initial quadrature grid {m0} exceeds the cap {max_grid}"
        )));
    }
    let block_size = next_pow2(spread + 1).max(1 << 16).min(m0);
    let local = f.values();

    let blocks = m0 / block_size;
    let phases: Vec<f64> = (0..blocks).map(|r| r as f64 / blocks as f64).collect();
    let mut sums = level(local, block_size, &phases);
    let l2 = (sums.s2.value() / m0 as f64).sqrt();
    let l4 = (sums.s4.value() / m0 as f64).powf(0.25);

    let mut grid = m0;
    let mut estimate = sums.s1.value() / grid as f64;
    loop {
        if 2 * grid > max_grid {
            return Err(Error::Accuracy {
                message: format!("L1 quadrature did not reach rel_tol {rel_tol:e}"),
                estimate,
                rel_change: f64::NAN,
                grid,
            });
        }
        let blocks = grid / block_size;
        let phases: Vec<f64> = (0..blocks)
            .map(|r| (r as f64 + 0.5) / blocks as f64)
            .collect();
        sums.merge(&level(local, block_size, &phases));
        grid *= 2;
        let refined = sums.s1.value() / grid as f64;
        let rel_change = (refined - estimate).abs() / refined;
        estimate = refined;
        if rel_change < rel_tol {
            return Ok(NormReport {
                l1: estimate,
                l2,
                l4,
                linf: sums.max,
                grid_used: grid,
                certified_rel_error: rel_change,
            });
        }
        if 2 * grid > max_grid {
            return Err(Error::Accuracy {
                message: format!("L1 quadrature did not reach rel_tol {rel_tol:e}"),
                estimate,
                rel_change,
                grid,
            });
        }
    }
}

/// `E(A)` two ways: `∫|1̂_A|⁴` on a grid of at least `4·spread + 1` points,
/// where the trapezoid rule is exact for the degree `2·spread` polynomial
/// `|1̂_A|⁴`, and the exact integer count.
pub fn l4_energy_check(set: &IntegerSet) -> Result<EnergyCheck> {
    if set.is_empty() {
        return Err(Error::domain("energy of an empty set"));
    }
    if set.spread() >= MAX_L4_SPREAD {
        return Err(Error::capacity(format!(
            "spread {} is at or above 2^24 for the spectral energy check",
            set.spread()
        )));
    }
    let grid = next_pow2(4 * set.spread() as usize + 1).max(8);
    let samples = sample(&SupportedFunction::indicator(set)?, grid);
    let s4: CompensatedSum = samples.iter().map(|v| v.norm_sqr() * v.norm_sqr()).collect();
    let exact = additive_energy(set)?.energy;
    Ok(EnergyCheck {
        spectral: s4.value() / grid as f64,
        exact,
        grid,
    })
}

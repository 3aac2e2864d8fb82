//! Transforms of finitely supported functions on uniform grids.
//!
//! Convention: `f̂(θ) = Σ_n f(n) e(-nθ)` with `e(x) = exp(2πix)`. A grid of
//! size `M` holds `f̂(k/M)`; a function whose support spans fewer than `M`
//! integers is recovered exactly from such a grid.

pub(crate) mod fft;
mod function;
mod grid;
mod norms;

pub use function::{convolve, inner_product, reflect_conjugate, SupportedFunction, MAX_CONVOLUTION_SPREAD};
pub use grid::{grid_sup, transform, GridSummary, SpectralGrid};
pub use norms::{
    l1_norm, l1_norm_capped, l4_energy_check, EnergyCheck, NormReport, DEFAULT_REL_TOL,
    MAX_L4_SPREAD,
};

pub(crate) use grid::sample;

/// Largest grid any routine here will allocate or sweep.
pub const MAX_GRID: usize = 1 << 26;

//! Damped test functions.
//!
//! For a real `f` with `|f̂| = Σ cₙ e(nθ)`, the completion `h` carries the
//! coefficients `c₀, 2c₁, 2c₂, …` on `0, -1, -2, …`, so `Re ĥ = |f̂|` and
//! `h` lives on the nonpositive integers. The damped factor `R_f` has
//! transform `e^{-bĥ} - 1`; it is evaluated pointwise on a grid and brought
//! back by an inverse FFT, then truncated to `[-M_t, 0]`. Every
//! construction records what the truncation cost in an [`MpsCertificate`].

mod factor;
mod iterate;

pub use factor::{
    analytic_completion, combine_step, damped_factor, factor_samples, FactorSamples, MpsCertificate,
    MpsFactor,
};
pub use iterate::{
    build_test_function, extract_factors, lower_bound_via_test_function, IterationCertificate,
    IteratedTestFunction, TestFunctionBound, TestFunctionStep,
};

pub(crate) use factor::combine_unchecked;

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-6;

/// Largest grid the automatic policy will try.
pub const MAX_AUTO_GRID: usize = 1 << 23;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GridChoice {
    /// Start at `max(8192, 32·(spread+1))` and double on rejection.
    Auto,
    /// One attempt on exactly this grid.
    Fixed(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MpsParams {
    b: f64,
    tol: f64,
    grid: GridChoice,
    truncation: Option<usize>,
}

impl MpsParams {
    pub fn new(b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::domain(format!("damping exponent b = {b} must be positive")));
        }
        Ok(Self {
            b,
            tol: DEFAULT_TOL,
            grid: GridChoice::Auto,
            truncation: None,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::domain(format!("tolerance {tol} must be positive")));
        }
        self.tol = tol;
        Ok(self)
    }

    pub fn with_grid(mut self, grid: GridChoice) -> Self {
        self.grid = grid;
        self
    }

    /// Keep `R` on `[-truncation, 0]` instead of `[-M/2, 0]`.
    pub fn with_truncation(mut self, truncation: usize) -> Self {
        self.truncation = Some(truncation);
        self
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `c = 1 - e^{-b}`.
    pub fn c(&self) -> f64 {
        -(-self.b).exp_m1()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn grid(&self) -> GridChoice {
        self.grid
    }
}

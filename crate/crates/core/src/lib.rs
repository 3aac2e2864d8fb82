//! Additive energy, Fourier `L¹` norms and test-function lower bounds for
//! finite sets of integers.
//!
//! The crate is organised bottom up:
//!
//! * [`setcore`]: integer sets, representation counts, additive energy,
//!   dissociation and set generators.
//! * [`spectral`]: finitely supported functions, grid transforms, norms and
//!   convolution.
//! * [`mps`]: damped test functions and their iteration over a chain of
//!   functions, with numerical certificates.
//! * [`bounds`]: segment chains, the segment-chain lower bounds, the
//!   rearrangement energy bound and the structured-subset finder.
//! * [`optimizer`]: maximisation of the two-parameter constant.

pub mod bounds;
pub mod error;
pub mod mps;
pub mod numeric;
pub mod optimizer;
pub mod setcore;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;

//! Segment chains and the lower bounds evaluated on them.

mod chain;
mod formulas;
mod structure;

pub use chain::{build_chain_eta, build_chain_lambda, Scheme, SegmentChain};
pub use formulas::{
    cor51_bound, gabriel_bound, ordering_bound, ordering_bound_check, prop31_bound, BoundReport, Formula,
    ORDERING_CHECK_LIMIT,
};
pub use structure::{
    find_structured_subset, StructureOutcome, StructureResult, DEFAULT_C_ETA, SMALL_DELTA_CONSTANT,
};

//! The Euler characteristic pipeline and the closed formulas it is checked against.

mod bridge;
mod formulas;
mod pipeline;
mod quotient;

pub use bridge::{laurent_det, polytope_bridge, to_laurent, BridgeReport};
pub use formulas::{
    cover_scale, fibered_norm, infinite_cyclic_chi2, jsj_sum, seifert_chi2, thurston_from_genus,
    SeifertBase,
};
pub use pipeline::{
    chi2, chi2_boundary, chi2_boundary_with, chi2_closed, chi2_closed_with, chi2_stretched,
    delta_invariant, twisted_matrix, ChiOptions, Diagnostics, EulerResult, TwistedMatrix,
};
pub use quotient::{
    reduce_phi, split_along_phi, split_reduced, unimodular_completion, PhiReduction, PhiSpec,
    QuotientSpec, ReducedData, Splitting,
};

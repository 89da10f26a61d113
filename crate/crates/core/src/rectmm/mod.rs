//! Matrix products over prime fields: the naive reference and the
//! structured-sparse x-adic recursion with Vandermonde embeddings.

mod coppersmith;
mod matrix;
mod scheme;
mod structured;

pub use coppersmith::{coppersmith_rect_mm, CoppersmithParams, CoppersmithPlan, OpCount, MAX_ALPHA};
pub use matrix::{naive_mm, vandermonde, vandermonde_minor_solve, FieldMatrix};
pub use scheme::{
    base_bilinear_step, forward, forward_trilinear, rotated, rotated_trilinear, target_trilinear, verify_base_identity, Engine, Scheme,
    Term, Trilinear, TruncPoly, A_DIGITS, B_DIGITS,
};
pub use structured::{
    default_degree, rotated_structured_mm, rotated_structured_mm_with, structured_sparse_mm, structured_sparse_mm_with, SparsityPattern,
};

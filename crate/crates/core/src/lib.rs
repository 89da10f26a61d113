//! Batch evaluation, model counting and equivalence checking for circuits built
//! from symmetric and linear threshold gates, plus a randomized 0-1 integer
//! programming solver, a depth-two threshold rectangle evaluator and a
//! structured rectangular matrix multiplication engine over prime fields.
//!
//! Every fast path has an exhaustive counterpart (`brute_force_*`,
//! `naive_mm`, `circledast_naive`) used as an oracle by the tests.

pub mod caps;
pub mod circuit;
pub mod depth2;
pub mod error;
pub mod evaluator;
pub mod field;
pub mod ilp;
pub mod random;
pub mod rectmm;
pub mod rng;
pub mod symrank;
pub mod transforms;

pub use caps::Caps;
pub use circuit::{Circuit, Gate, GateKind, Source, TruthTableBitmap, Wire};
pub use error::{Error, Result};
pub use field::PrimeField;

//! Circuit-to-circuit transformations.

mod bank;
mod combiner;
mod gsym;
mod poly;
mod probpoly;
mod symsym;

pub use bank::{bank_width, build_bit_extractor_bank, expand_copies, suffix_copies};
pub use combiner::{or_to_xor_randomized, RandomCombiner};
pub use gsym::{collapse, collapse_and_of_sym, digits, lower_gate, normalize_thr_to_sym, Combine, GeneralizedSymGate, Literal, SumPredicate};
pub use poly::{F2Polynomial, Monomial};
pub use probpoly::{ac0_size_depth, degree_bound, sample_prob_poly, sample_prob_poly_sparse, ProbPolyParams, DENSE_LIMIT};
pub use symsym::{collapse_circuit, collapse_gate, SymSymCircuit};

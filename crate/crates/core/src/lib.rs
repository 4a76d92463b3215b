//! Numerics for exact superdense coding of bipartite pure states.
//!
//! A target state `|ψ⟩ = (1/√d) Σ x_{ij} |i⟩_A |j⟩_B` is described by its
//! coefficient matrix `x` with `Σ|x_{ij}|² = d`. Given a resource shared over
//! ground-state pairs, `Σ c_j |j⟩_A |j⟩_B`, the sender applies an operation `Y`
//! on her half through a two-outcome generalized measurement and ships the
//! system to the receiver. This crate decides when that succeeds with
//! probability one, builds the optimal resource and Kraus pair, evaluates
//! success probabilities and the single-violation lower bound, simulates the
//! measurement, and searches the Schmidt simplex for the best resource.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]
#![deny(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod coding;
mod error;
pub mod matrix;
pub mod optimize;
pub mod sim;
pub mod state;

pub use coding::{
    construct_plan, decide_perfect, kraus_from_operation, maximal_baseline, plan_with_shared,
    prop2_bound, prop2_bound_for_pair, success_probability, KrausPair, PreparationPlan,
    Prop2Report,
};
pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, ComplexScalar, HermitianEigen, Svd};
pub use optimize::{objective, optimize_shared, Method, OptimizationResult, SeedPoint};
pub use sim::{
    conditional_output, outcome_probability, run_protocol, trial_uniform, ConditionalState, Outcome,
    SimulationConfig, SimulationResult,
};
pub use state::{
    apply_permutations, column_gram_report, entanglement_entropy, schmidt_decompose,
    target_from_amplitudes, GramReport, Normalization, SchmidtForm, SharedState, TargetState,
    Violation,
};

/// Default tolerance for algebraic predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

//! Monte-Carlo execution of the two-outcome measurement.
//!
//! Trials are Bernoulli draws against the analytic outcome-0 probability. Draw
//! `k` (0-based) is the `k`-th 64-bit output of a ChaCha8 stream seeded with
//! `seed_from_u64(seed)`, mapped to `[0, 1)` from its top 53 bits. The
//! post-measurement state is computed once since it does not depend on the
//! trial.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by std's inherent methods when std is in the build graph
use num_traits::Float;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coding::PreparationPlan;
use crate::matrix::{c64, inner, vec_norm, ComplexMatrix};
use crate::state::TargetState;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// `E0` fired: the sender's operation was applied.
    Success = 0,
    Failure = 1,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self { trials: 100_000, seed: 0, tol: crate::DEFAULT_TOL }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub trials: u64,
    pub successes: u64,
    pub empirical_prob: f64,
    pub analytic_prob: f64,
    pub mean_success_fidelity: f64,
    /// 3σ normal-approximation half-width around `empirical_prob`.
    pub ci_halfwidth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalState {
    /// Normalized `d²` amplitudes, row-major over ground indices `(a, b)`.
    pub state: Vec<Complex64>,
    pub fidelity: f64,
}

/// Alice's Kraus operator for `outcome`, expressed in the ground basis.
fn physical_operator(plan: &PreparationPlan, outcome: Outcome) -> ComplexMatrix {
    let e = match outcome {
        Outcome::Success => &plan.kraus.e0,
        Outcome::Failure => &plan.kraus.e1,
    };
    let perm = plan.shared.perm_a();
    let d = e.rows();
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            out[(perm[i], perm[j])] = e[(i, j)];
        }
    }
    out
}

/// `Tr(E0†E0 ρ_A)` with `ρ_A = Σ_j |c_j|² |g_j⟩⟨g_j|`; outcome 1 is the complement.
pub fn outcome_probability(plan: &PreparationPlan, outcome: Outcome) -> f64 {
    let g = plan.kraus.e0.gram();
    let p0: f64 = plan
        .shared
        .weights()
        .iter()
        .enumerate()
        .map(|(j, w)| w * g[(j, j)].re)
        .sum();
    let p0 = p0.clamp(0.0, 1.0);
    match outcome {
        Outcome::Success => p0,
        Outcome::Failure => 1.0 - p0,
    }
}

/// Post-measurement state `(E ⊗ I)|Φ⟩`, renormalized, and its fidelity with the target.
pub fn conditional_output(
    plan: &PreparationPlan,
    t: &TargetState,
    outcome: Outcome,
    tol: f64,
) -> Result<ConditionalState> {
    let d = t.dim();
    if plan.shared.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: plan.shared.dim() });
    }
    let probability = outcome_probability(plan, outcome);
    if probability <= tol {
        return Err(Error::ZeroProbabilityBranch { probability });
    }
    let e = physical_operator(plan, outcome);
    let phi = plan.shared.state_vector();
    let mut out = alloc::vec![c64(0.0, 0.0); d * d];
    for a in 0..d {
        for b in 0..d {
            out[a * d + b] = (0..d).map(|k| e[(a, k)] * phi[k * d + b]).sum();
        }
    }
    let norm = vec_norm(&out);
    if norm == 0.0 {
        return Err(Error::ZeroProbabilityBranch { probability: 0.0 });
    }
    for z in out.iter_mut() {
        *z /= norm;
    }
    let fidelity = inner(&t.amplitudes(), &out).norm_sqr().min(1.0);
    Ok(ConditionalState { state: out, fidelity })
}

fn unit_interval(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform draw for trial `index`, independent of evaluation order.
pub fn trial_uniform(seed: u64, index: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(u128::from(index) * 2);
    unit_interval(rng.next_u64())
}

pub fn run_protocol(
    plan: &PreparationPlan,
    t: &TargetState,
    cfg: &SimulationConfig,
) -> Result<SimulationResult> {
    if cfg.trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let analytic_prob = outcome_probability(plan, Outcome::Success);
    let mean_success_fidelity = conditional_output(plan, t, Outcome::Success, cfg.tol)?.fidelity;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let successes = (0..cfg.trials)
        .filter(|_| unit_interval(rng.next_u64()) < analytic_prob)
        .count() as u64;

    let n = cfg.trials as f64;
    let empirical_prob = successes as f64 / n;
    let floor = 1.0 / (n + 2.0);
    let p = empirical_prob.clamp(floor, 1.0 - floor);
    let ci_halfwidth = 3.0 * (p * (1.0 - p) / n).sqrt();
    Ok(SimulationResult {
        trials: cfg.trials,
        successes,
        empirical_prob,
        analytic_prob,
        mean_success_fidelity,
        ci_halfwidth,
    })
}

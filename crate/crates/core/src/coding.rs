//! Exact superdense coding of a target state from a resource shared over
//! ground-state pairs.
//!
//! With shared state `Σ_j c_j |j⟩|j⟩`, the sender's operation `Y` must satisfy
//! `c_j y_{ij} = x_{ij}/√d` for every `i, j`. Implemented through the Kraus
//! pair `E0 = Y/‖Y‖`, `E1 = √(I − E0†E0)` it succeeds with probability
//! `P_s = 1/‖Y†Y‖`. Probability one is reachable exactly when the columns of
//! `x` are mutually orthogonal, using `|c_j|² = a_j/d`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by std's inherent methods when std is in the build graph
use num_traits::Float;

use crate::matrix::{c64, complete_orthonormal, orthogonalize, vec_norm, ComplexMatrix};
use crate::state::{apply_permutations, column_gram_report, GramReport, SharedState, TargetState};
use crate::{Error, Result};

/// Two-outcome generalized measurement; outcome 0 applies the sender's operation.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausPair {
    pub e0: ComplexMatrix,
    pub e1: ComplexMatrix,
}

impl KrausPair {
    /// `‖E0†E0 + E1†E1 − I‖_max`.
    pub fn completeness_error(&self) -> f64 {
        let sum = self.e0.gram().add(&self.e1.gram()).expect("same shape");
        sum.max_abs_diff(&ComplexMatrix::identity(sum.rows()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreparationPlan {
    pub shared: SharedState,
    /// Sender operation in the frame of the shared state's ground pairs.
    pub y: ComplexMatrix,
    pub kraus: KrausPair,
    pub success_prob: f64,
    pub is_perfect: bool,
    /// Columns with zero shared amplitude, filled by orthonormal completion.
    pub free_columns: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prop2Report {
    pub pair: (usize, usize),
    pub gamma: Complex64,
    pub bound: f64,
    /// Eigenvalues of `Y†Y` for the column-norm shared state, descending.
    pub spectrum: Vec<f64>,
    pub achieved: f64,
}

/// Perfect-preparability verdict: every off-diagonal column inner product vanishes.
pub fn decide_perfect(t: &TargetState, tol: f64) -> GramReport {
    column_gram_report(t, tol)
}

/// Shared amplitudes `c_j = √(a_j/d)`, real and nonnegative; zero columns get exactly 0.
pub(crate) fn column_norm_amplitudes(t: &TargetState, tol: f64) -> Vec<Complex64> {
    let d = t.dim() as f64;
    t.column_norms()
        .into_iter()
        .map(|a| if a.sqrt() <= tol { c64(0.0, 0.0) } else { c64((a / d).sqrt(), 0.0) })
        .collect()
}

/// Solves `c_j y_{ij} = x_{ij}/√d` for the canonical-frame target `x`.
///
/// Columns with `|c_j| ≤ tol` must be (numerically) zero in `x`; they are
/// filled with an orthonormal completion of the used columns' span scaled by
/// `min(1, ‖Y_used‖)`, so they never raise `‖Y‖`.
fn forced_operation(
    x: &ComplexMatrix,
    c: &[Complex64],
    tol: f64,
) -> Result<(ComplexMatrix, Vec<usize>)> {
    let d = x.rows();
    let sqrt_d = (d as f64).sqrt();
    let mut y = ComplexMatrix::zeros(d, d);
    let mut free = Vec::new();
    for j in 0..d {
        let col = x.column(j);
        if c[j].norm() <= tol {
            if vec_norm(&col) > tol {
                return Err(Error::InfeasibleShared { column: j });
            }
            free.push(j);
            continue;
        }
        let scale = c[j] * sqrt_d;
        for i in 0..d {
            y[(i, j)] = x[(i, j)] / scale;
        }
    }
    if free.is_empty() {
        return Ok((y, free));
    }

    let used_norm = y.spectral_norm(tol)?;
    let fill = used_norm.min(1.0);

    // Orthonormal basis of the used columns' span, then complete it.
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let rank_tol = tol.max(1e-12) * used_norm.max(1.0);
    for j in (0..d).filter(|j| !free.contains(j)) {
        let mut v = y.column(j);
        orthogonalize(&mut v, &basis);
        let n = vec_norm(&v);
        if n > rank_tol {
            basis.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    let start = basis.len();
    complete_orthonormal(&mut basis, d);
    for (&j, b) in free.iter().zip(&basis[start..]) {
        let scaled: Vec<Complex64> = b.iter().map(|z| z * fill).collect();
        y.set_column(j, &scaled);
    }
    Ok((y, free))
}

/// `1/λ_max(Y†Y)`, clamped into `(0, 1]`.
fn probability_from_operation(y: &ComplexMatrix, tol: f64) -> Result<f64> {
    let lambda_max = y.gram().hermitian_eig(tol)?.values[0];
    if lambda_max <= 0.0 {
        return Err(Error::ZeroOperator);
    }
    Ok((1.0 / lambda_max).min(1.0))
}

/// `E0 = Y/‖Y‖`, `E1` the principal square root of `I − E0†E0`.
pub fn kraus_from_operation(y: &ComplexMatrix, tol: f64) -> Result<KrausPair> {
    if !y.is_square() {
        return Err(Error::NotSquare { rows: y.rows(), cols: y.cols() });
    }
    let norm = y.spectral_norm(tol)?;
    if norm == 0.0 {
        return Err(Error::ZeroOperator);
    }
    let d = y.rows();
    let e0 = y.scale_real(1.0 / norm);
    let complement = ComplexMatrix::identity(d).sub(&e0.gram())?;
    let eig = complement.hermitian_eig(tol)?;
    let mut roots = Vec::with_capacity(d);
    for &value in &eig.values {
        if value < -tol {
            return Err(Error::NegativeEigenvalue { value });
        }
        roots.push(value.max(0.0).sqrt());
    }
    let v = &eig.vectors;
    let e1 = ComplexMatrix::from_fn(d, d, |i, j| {
        (0..d).map(|k| v[(i, k)] * v[(j, k)].conj() * roots[k]).sum()
    });
    Ok(KrausPair { e0, e1 })
}

/// Plan for a given shared state (any permutations), following the forced operation.
pub fn plan_with_shared(t: &TargetState, shared: &SharedState, tol: f64) -> Result<PreparationPlan> {
    let canonical = apply_permutations(t, shared)?;
    let (y, free_columns) = forced_operation(canonical.coefficients(), shared.amplitudes(), tol)?;
    let success_prob = probability_from_operation(&y, tol)?;
    let kraus = kraus_from_operation(&y, tol)?;
    Ok(PreparationPlan {
        shared: shared.clone(),
        y,
        kraus,
        success_prob,
        is_perfect: success_prob >= 1.0 - tol,
        free_columns,
    })
}

/// Plan with `|c_j|² = a_j/d`; perfect whenever [`decide_perfect`] says so.
pub fn construct_plan(t: &TargetState, tol: f64) -> Result<PreparationPlan> {
    let c = column_norm_amplitudes(t, tol);
    let d = t.dim();
    let id: Vec<usize> = (0..d).collect();
    // Built directly: zeroed columns shift Σ|c|² by at most d·tol², below any sane tolerance.
    let shared = SharedState::with_permutations(c, id.clone(), id, tol.max(1e-12))?;
    plan_with_shared(t, &shared, tol)
}

/// Success probability of the forced operation for an arbitrary shared state.
pub fn success_probability(t: &TargetState, s: &SharedState, tol: f64) -> Result<f64> {
    let canonical = apply_permutations(t, s)?;
    let (y, _) = forced_operation(canonical.coefficients(), s.amplitudes(), tol)?;
    probability_from_operation(&y, tol)
}

/// Success probability with the maximally entangled resource, `1/‖x†x‖`.
pub fn maximal_baseline(t: &TargetState, tol: f64) -> Result<f64> {
    let lambda_max = t.coefficients().gram().hermitian_eig(tol)?.values[0];
    Ok((1.0 / lambda_max).min(1.0))
}

/// Lower bound for a target whose only non-orthogonal column pair is
/// detected automatically.
pub fn prop2_bound(t: &TargetState, tol: f64) -> Result<Prop2Report> {
    let report = column_gram_report(t, tol);
    if report.violations.len() != 1 {
        return Err(Error::NotSingleViolation { count: report.violations.len() });
    }
    let v = report.violations[0];
    single_violation_report(t, &report, v.j1, v.j2, tol)
}

/// As [`prop2_bound`], asserting that `(k1, k2)` is the single violating pair.
pub fn prop2_bound_for_pair(t: &TargetState, k1: usize, k2: usize, tol: f64) -> Result<Prop2Report> {
    let d = t.dim();
    for k in [k1, k2] {
        if k >= d {
            return Err(Error::DimensionMismatch { expected: d, found: k + 1 });
        }
    }
    let (k1, k2) = if k1 <= k2 { (k1, k2) } else { (k2, k1) };
    let report = column_gram_report(t, tol);
    let matches = report.violations.iter().any(|v| (v.j1, v.j2) == (k1, k2));
    if report.violations.len() != 1 || !matches {
        return Err(Error::NotSingleViolation { count: report.violations.len() });
    }
    single_violation_report(t, &report, k1, k2, tol)
}

fn single_violation_report(
    t: &TargetState,
    report: &GramReport,
    k1: usize,
    k2: usize,
    tol: f64,
) -> Result<Prop2Report> {
    let d = t.dim() as f64;
    let gamma = report.gram[(k1, k2)];
    let c = column_norm_amplitudes(t, tol);
    for k in [k1, k2] {
        if c[k].norm() == 0.0 {
            return Err(Error::ZeroColumn { column: k });
        }
    }
    let bound = 1.0 / (1.0 + gamma.norm() / (d * c[k1].norm() * c[k2].norm()));
    let plan = construct_plan(t, tol)?;
    let spectrum = plan.y.gram().hermitian_eig(tol)?.values;
    Ok(Prop2Report { pair: (k1, k2), gamma, bound, spectrum, achieved: plan.success_prob })
}

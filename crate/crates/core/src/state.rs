//! Target states, shared resources, Schmidt analysis and the column Gram report.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by std's inherent methods when std is in the build graph
use num_traits::Float;

use crate::matrix::{c64, ComplexMatrix};
use crate::{Error, Result};

/// How raw amplitudes passed to [`target_from_amplitudes`] are normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `Σ|amps|² = 1`: the amplitudes are the state vector itself.
    #[default]
    Unit,
    /// `Σ|amps|² = d`: the amplitudes are already the coefficient matrix `x`.
    Scaled,
}

/// State to be prepared, `|ψ⟩ = (1/√d) Σ x_{ij} |i⟩_A |j⟩_B` with `Σ|x_{ij}|² = d`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetState {
    x: ComplexMatrix,
}

impl TargetState {
    /// Wraps a coefficient matrix already in the scaled convention.
    pub fn from_coefficients(x: ComplexMatrix, tol: f64) -> Result<Self> {
        if !x.is_square() {
            return Err(Error::NotSquare { rows: x.rows(), cols: x.cols() });
        }
        let d = x.rows() as f64;
        let norm_sq: f64 = x.as_slice().iter().map(|z| z.norm_sqr()).sum();
        let deviation = (norm_sq - d).abs();
        if deviation > tol * d {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { x })
    }

    pub fn dim(&self) -> usize {
        self.x.rows()
    }

    /// The coefficient matrix `x` (row `i` is Alice's index, column `j` Bob's).
    pub fn coefficients(&self) -> &ComplexMatrix {
        &self.x
    }

    /// Normalized state vector `x/√d`, row-major over `(i, j)`.
    pub fn amplitudes(&self) -> Vec<Complex64> {
        let s = 1.0 / (self.dim() as f64).sqrt();
        self.x.as_slice().iter().map(|z| z * s).collect()
    }

    /// `a_j = Σ_i |x_{ij}|²`.
    pub fn column_norms(&self) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|j| (0..d).map(|i| self.x[(i, j)].norm_sqr()).sum()).collect()
    }
}

/// Builds a target from `d²` row-major amplitudes.
pub fn target_from_amplitudes(
    d: usize,
    amps: &[Complex64],
    normalization: Normalization,
    tol: f64,
) -> Result<TargetState> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if amps.len() != d * d {
        return Err(Error::BadLength { expected: d * d, found: amps.len() });
    }
    let raw = ComplexMatrix::new(d, d, amps.to_vec())?;
    let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    match normalization {
        Normalization::Unit => {
            let deviation = (norm_sq - 1.0).abs();
            if deviation > tol {
                return Err(Error::NotNormalized { deviation });
            }
            Ok(TargetState { x: raw.scale_real((d as f64).sqrt()) })
        }
        Normalization::Scaled => TargetState::from_coefficients(raw, tol),
    }
}

/// Resource `Σ_i c_i |g_i⟩_A |h_i⟩_B` with `g_i = perm_a[i]`, `h_i = perm_b[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SharedState {
    c: Vec<Complex64>,
    perm_a: Vec<usize>,
    perm_b: Vec<usize>,
}

impl SharedState {
    /// Shared state over `|i⟩|i⟩` pairs.
    pub fn new(c: Vec<Complex64>, tol: f64) -> Result<Self> {
        let d = c.len();
        let id: Vec<usize> = (0..d).collect();
        Self::with_permutations(c, id.clone(), id, tol)
    }

    pub fn with_permutations(
        c: Vec<Complex64>,
        perm_a: Vec<usize>,
        perm_b: Vec<usize>,
        tol: f64,
    ) -> Result<Self> {
        let d = c.len();
        if d == 0 {
            return Err(Error::ZeroDimension);
        }
        for perm in [&perm_a, &perm_b] {
            if perm.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: perm.len() });
            }
            if !is_permutation(perm) {
                return Err(Error::InvalidPermutation { len: d });
            }
        }
        if let Some(index) = c.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let deviation = (c.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs();
        if deviation > tol {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { c, perm_a, perm_b })
    }

    /// `c_i = 1/√d` for every `i`.
    pub fn maximally_entangled(d: usize) -> Self {
        let v = 1.0 / (d as f64).sqrt();
        let id: Vec<usize> = (0..d).collect();
        Self { c: alloc::vec![c64(v, 0.0); d], perm_a: id.clone(), perm_b: id }
    }

    /// Real nonnegative amplitudes `c_i = √p_i` from simplex weights.
    pub fn from_weights(p: &[f64], tol: f64) -> Result<Self> {
        Self::new(p.iter().map(|&w| c64(w.max(0.0).sqrt(), 0.0)).collect(), tol)
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.c
    }

    pub fn weights(&self) -> Vec<f64> {
        self.c.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn perm_a(&self) -> &[usize] {
        &self.perm_a
    }

    pub fn perm_b(&self) -> &[usize] {
        &self.perm_b
    }

    pub fn has_identity_permutations(&self) -> bool {
        self.perm_a.iter().enumerate().all(|(i, &g)| i == g)
            && self.perm_b.iter().enumerate().all(|(i, &h)| i == h)
    }

    /// Full `d²` state vector, row-major over ground indices `(a, b)`.
    pub fn state_vector(&self) -> Vec<Complex64> {
        let d = self.dim();
        let mut v = alloc::vec![c64(0.0, 0.0); d * d];
        for (i, &ci) in self.c.iter().enumerate() {
            v[self.perm_a[i] * d + self.perm_b[i]] = ci;
        }
        v
    }
}

fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = alloc::vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

/// Schmidt form `|ψ⟩ = Σ_k λ_k |e_k⟩|f_k⟩`; columns of `basis_a`/`basis_b` are `e_k`/`f_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtForm {
    pub lambdas: Vec<f64>,
    pub basis_a: ComplexMatrix,
    pub basis_b: ComplexMatrix,
}

impl SchmidtForm {
    /// Rebuilds the scaled coefficient matrix `x = √d · E · diag(λ) · Fᵀ`.
    pub fn to_coefficients(&self) -> ComplexMatrix {
        let d = self.lambdas.len();
        let scale = (d as f64).sqrt();
        ComplexMatrix::from_fn(d, d, |i, j| {
            (0..d)
                .map(|k| self.basis_a[(i, k)] * self.basis_b[(j, k)] * self.lambdas[k])
                .sum::<Complex64>()
                * scale
        })
    }
}

pub fn schmidt_decompose(t: &TargetState, tol: f64) -> Result<SchmidtForm> {
    let d = t.dim();
    let m = t.coefficients().scale_real(1.0 / (d as f64).sqrt());
    let svd = m.svd(tol)?;
    // M = U S V†, so Σ_ij M_ij |i⟩|j⟩ = Σ_k s_k (U e_k)(conj(V) e_k).
    let basis_b = ComplexMatrix::from_fn(d, d, |i, k| svd.v[(i, k)].conj());
    Ok(SchmidtForm { lambdas: svd.s, basis_a: svd.u, basis_b })
}

/// Entropy of entanglement in bits, `−Σ λ² log₂ λ²`.
pub fn entanglement_entropy(s: &SchmidtForm) -> f64 {
    let h: f64 = s
        .lambdas
        .iter()
        .map(|&l| l * l)
        .filter(|&w| w > 0.0)
        .map(|w| -w * w.log2())
        .sum();
    h.max(0.0)
}

/// Off-diagonal column Gram entry `γ = Σ_i conj(x_{i,j1}) x_{i,j2}` exceeding tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub j1: usize,
    pub j2: usize,
    pub gamma: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramReport {
    pub gram: ComplexMatrix,
    pub column_norms: Vec<f64>,
    /// Pairs with `j1 < j2`, in row-major order.
    pub violations: Vec<Violation>,
    pub perfectly_preparable: bool,
}

pub fn column_gram_report(t: &TargetState, tol: f64) -> GramReport {
    let gram = t.coefficients().gram();
    let d = t.dim();
    let column_norms = (0..d).map(|j| gram[(j, j)].re).collect();
    let mut violations = Vec::new();
    for j1 in 0..d {
        for j2 in (j1 + 1)..d {
            let gamma = gram[(j1, j2)];
            if gamma.norm() > tol {
                violations.push(Violation { j1, j2, gamma });
            }
        }
    }
    let perfectly_preparable = violations.is_empty();
    GramReport { gram, column_norms, violations, perfectly_preparable }
}

/// Re-expresses `t` in the frame of a permuted shared state:
/// `x'_{ij} = x_{perm_a[i], perm_b[j]}`.
pub fn apply_permutations(t: &TargetState, s: &SharedState) -> Result<TargetState> {
    let d = t.dim();
    if s.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: s.dim() });
    }
    let x = t.coefficients();
    let permuted = ComplexMatrix::from_fn(d, d, |i, j| x[(s.perm_a[i], s.perm_b[j])]);
    Ok(TargetState { x: permuted })
}

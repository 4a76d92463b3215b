//! Dense complex matrices and the Hermitian spectral routines built on them.
//!
//! Everything here is sized for small dimensions (d ≤ 64). The eigensolver is
//! a cyclic complex Jacobi iteration; the SVD is derived from the eigensystem
//! of `A†A`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by std's inherent methods when std is in the build graph
use num_traits::Float;

use crate::{Error, Result};

pub type ComplexScalar = Complex64;

const MAX_SWEEPS: usize = 100;
const CONVERGENCE_FLOOR: f64 = 1e-7;

#[inline]
pub(crate) fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Row-major dense complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// Spectrum of a Hermitian matrix, values sorted descending.
///
/// Column `k` of `vectors` is the unit eigenvector for `values[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// `A = U · diag(S) · V†` with `S` nonnegative and descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub s: Vec<f64>,
    pub v: ComplexMatrix,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroDimension);
        }
        if data.len() != rows * cols {
            return Err(Error::BadLength { expected: rows * cols, found: data.len() });
        }
        if let Some(index) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from real rows. Panics on ragged or empty input.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows[0].as_ref().len();
        let data = rows
            .iter()
            .flat_map(|r| {
                let r = r.as_ref();
                assert_eq!(r.len(), cols, "ragged rows");
                r.iter().map(|&v| c64(v, 0.0))
            })
            .collect();
        Self::new(rows.len(), cols, data).expect("finite real rows")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { c64(1.0, 0.0) } else { c64(0.0, 0.0) })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { c64(values[i], 0.0) } else { c64(0.0, 0.0) })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[Complex64]) {
        for (i, &z) in col.iter().enumerate() {
            self[(i, j)] = z;
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * factor).collect() }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(c64(factor, 0.0))
    }

    /// Entrywise `self - other`; shapes must agree.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        Ok(())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|k| self[(i, k)] * v[k]).sum())
            .collect())
    }

    pub fn trace(&self) -> Result<Complex64> {
        self.require_square()?;
        Ok((0..self.rows).map(|i| self[(i, i)]).sum())
    }

    /// Column Gram matrix `A†A`; entry `(j1, j2)` is `Σ_i conj(a_{i,j1}) a_{i,j2}`.
    pub fn gram(&self) -> Self {
        let mut g = Self::zeros(self.cols, self.cols);
        for j1 in 0..self.cols {
            for j2 in j1..self.cols {
                let v: Complex64 = (0..self.rows).map(|i| self[(i, j1)].conj() * self[(i, j2)]).sum();
                g[(j1, j2)] = v;
                g[(j2, j1)] = v.conj();
            }
            g[(j1, j1)].im = 0.0;
        }
        g
    }

    /// `‖A†A − I‖_F ≤ tol`. Non-square matrices are never unitary.
    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let g = self.gram();
        let mut dev = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let target = if i == j { 1.0 } else { 0.0 };
                dev += (g[(i, j)] - c64(target, 0.0)).norm_sqr();
            }
        }
        dev.sqrt() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermitian_deviation() <= tol * self.frobenius_norm()
    }

    fn hermitian_deviation(&self) -> f64 {
        let mut dev = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                dev += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        dev.sqrt()
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
    ///
    /// Converges once the off-diagonal Frobenius mass is at most
    /// `min(tol, 1e-7) · ‖A‖_F`. Equal eigenvalues keep the order of their
    /// diagonal positions.
    pub fn hermitian_eig(&self, tol: f64) -> Result<HermitianEigen> {
        let n = self.require_square()?;
        let norm = self.frobenius_norm();
        let deviation = self.hermitian_deviation();
        if deviation > tol * norm {
            return Err(Error::NotHermitian { deviation });
        }

        // Work on the exactly Hermitian part so rounding asymmetry cannot accumulate.
        let mut a = Self::from_fn(n, n, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5);
        let mut v = Self::identity(n);
        let threshold = tol.clamp(f64::EPSILON, CONVERGENCE_FLOOR) * norm;

        let mut converged = norm == 0.0;
        for _ in 0..MAX_SWEEPS {
            if converged || off_diagonal_norm(&a) <= threshold {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut a, &mut v, p, q);
                }
            }
        }
        if !converged && off_diagonal_norm(&a) > threshold {
            return Err(Error::ConvergenceFailure { sweeps: MAX_SWEEPS });
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re).then(i.cmp(&j)));
        let values = order.iter().map(|&k| a[(k, k)].re).collect();
        let vectors = Self::from_fn(n, n, |i, k| v[(i, order[k])]);
        Ok(HermitianEigen { values, vectors })
    }

    /// Largest singular value, `sqrt(λ_max(A†A))`.
    pub fn spectral_norm(&self, tol: f64) -> Result<f64> {
        let eig = self.gram().hermitian_eig(tol)?;
        Ok(eig.values[0].max(0.0).sqrt())
    }

    /// Singular value decomposition of a square matrix.
    ///
    /// Right factors are the eigenvectors of `A†A`; left factors are
    /// `A v_k / σ_k` for `σ_k > tol · σ_max`, and the remaining columns are an
    /// orthonormal completion.
    pub fn svd(&self, tol: f64) -> Result<Svd> {
        let n = self.require_square()?;
        let eig = self.gram().hermitian_eig(tol)?;
        let s: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
        let v = eig.vectors;
        let sigma_max = s[0];

        let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        for (k, &sigma) in s.iter().enumerate() {
            if sigma_max > 0.0 && sigma > tol * sigma_max {
                let mut u: Vec<Complex64> = self.matvec(&v.column(k))?.into_iter().map(|z| z / sigma).collect();
                // Small σ amplifies eigenvector error; restore orthogonality against larger ones.
                orthogonalize(&mut u, &u_cols);
                let norm = vec_norm(&u);
                u.iter_mut().for_each(|z| *z /= norm);
                u_cols.push(u);
            } else {
                break;
            }
        }
        complete_orthonormal(&mut u_cols, n);
        let mut u = Self::zeros(n, n);
        for (k, col) in u_cols.iter().enumerate() {
            u.set_column(k, col);
        }
        Ok(Svd { u, s, v })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows;
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Annihilates `a[p][q]` with `A ← J†AJ`, accumulating `V ← VJ`.
///
/// `J = D·R` where `D = diag(1, e^{-iφ})` makes the pivot real and `R` is the
/// classical real Jacobi rotation on that 2×2 block.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let phase = (apq / mag).conj();

    let jpp = c64(c, 0.0);
    let jpq = c64(s, 0.0);
    let jqp = phase * -s;
    let jqq = phase * c;

    let n = a.rows;
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = c64(0.0, 0.0);
    a[(q, p)] = c64(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn vec_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Removes the components of `v` along the orthonormal `basis` (two passes).
pub(crate) fn orthogonalize(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for b in basis {
            let proj = inner(b, v);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= proj * y;
            }
        }
    }
}

/// Extends `basis` (assumed orthonormal) to `n` orthonormal vectors of length
/// `n`, greedily taking the canonical direction with the largest residual.
pub(crate) fn complete_orthonormal(basis: &mut Vec<Vec<Complex64>>, n: usize) {
    while basis.len() < n {
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for e in 0..n {
            let mut cand = vec![c64(0.0, 0.0); n];
            cand[e] = c64(1.0, 0.0);
            orthogonalize(&mut cand, basis);
            let norm = vec_norm(&cand);
            if best.as_ref().is_none_or(|(bn, _)| norm > *bn + 1e-12) {
                best = Some((norm, cand));
            }
        }
        let (norm, cand) = best.expect("n > 0");
        basis.push(cand.into_iter().map(|z| z / norm).collect());
    }
}

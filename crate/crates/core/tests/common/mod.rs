#![allow(dead_code)]

use densecode_core::{ComplexMatrix, ComplexScalar, TargetState};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const TOL: f64 = 1e-9;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> ComplexScalar {
    ComplexScalar::new(re, im)
}

pub fn random_complex(rng: &mut impl Rng) -> ComplexScalar {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_matrix(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |_, _| random_complex(rng))
}

/// Rescales so that `Σ|x|² = d`.
pub fn normalize_scaled(x: &ComplexMatrix) -> ComplexMatrix {
    let d = x.rows() as f64;
    let n: f64 = x.as_slice().iter().map(|z| z.norm_sqr()).sum();
    x.scale_real((d / n).sqrt())
}

pub fn target(x: ComplexMatrix) -> TargetState {
    TargetState::from_coefficients(normalize_scaled(&x), TOL).expect("normalized target")
}

pub fn generic_target(rng: &mut impl Rng, d: usize) -> TargetState {
    target(random_matrix(rng, d))
}

/// Random unitary from modified Gram–Schmidt on a random complex matrix.
pub fn random_unitary(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    let a = random_matrix(rng, d);
    let mut cols: Vec<Vec<ComplexScalar>> = Vec::new();
    for j in 0..d {
        let mut v = a.column(j);
        for _ in 0..2 {
            for q in &cols {
                let proj: ComplexScalar = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    ComplexMatrix::from_fn(d, d, |i, j| cols[j][i])
}

/// Orthonormal columns scaled by positive weights, renormalized.
pub fn orthogonal_columns(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    let q = random_unitary(rng, d);
    let w: Vec<f64> = (0..d).map(|_| rng.random_range(0.1..2.0)).collect();
    normalize_scaled(&ComplexMatrix::from_fn(d, d, |i, j| q[(i, j)] * w[j]))
}

pub fn orthogonal_target(rng: &mut impl Rng, d: usize) -> TargetState {
    target(orthogonal_columns(rng, d))
}

/// Orthogonal-column matrix with columns `k1, k2` mixed by a random invertible 2×2 block.
pub fn single_violation_target(rng: &mut impl Rng, d: usize) -> (TargetState, usize, usize) {
    loop {
        let base = orthogonal_columns(rng, d);
        let k1 = rng.random_range(0..d);
        let mut k2 = rng.random_range(0..d - 1);
        if k2 >= k1 {
            k2 += 1;
        }
        let (k1, k2) = (k1.min(k2), k1.max(k2));
        let b = [[random_complex(rng), random_complex(rng)], [random_complex(rng), random_complex(rng)]];
        let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
        if det.norm() < 0.1 {
            continue;
        }
        let mut x = base.clone();
        for i in 0..d {
            let (u, v) = (base[(i, k1)], base[(i, k2)]);
            x[(i, k1)] = u * b[0][0] + v * b[1][0];
            x[(i, k2)] = u * b[0][1] + v * b[1][1];
        }
        let t = target(x);
        let g = t.coefficients().gram();
        if g[(k1, k2)].norm() > 1e-3 {
            return (t, k1, k2);
        }
    }
}

pub fn uniform_target(d: usize) -> TargetState {
    let v = 1.0 / (d as f64).sqrt();
    TargetState::from_coefficients(ComplexMatrix::from_fn(d, d, |_, _| c(v, 0.0)), TOL).unwrap()
}

pub fn random_permutation(rng: &mut impl Rng, d: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        let j = rng.random_range(0..=i);
        p.swap(i, j);
    }
    p
}

/// `x'_{ij} = x_{rows[i], cols[j]}`.
pub fn permute(t: &TargetState, rows: &[usize], cols: &[usize]) -> TargetState {
    let x = t.coefficients();
    let d = t.dim();
    TargetState::from_coefficients(ComplexMatrix::from_fn(d, d, |i, j| x[(rows[i], cols[j])]), TOL).unwrap()
}

/// Column inner product computed straight from the entries.
pub fn column_inner(x: &ComplexMatrix, j1: usize, j2: usize) -> ComplexScalar {
    (0..x.rows()).map(|i| x[(i, j1)].conj() * x[(i, j2)]).sum()
}

pub fn column_norm_sq(x: &ComplexMatrix, j: usize) -> f64 {
    (0..x.rows()).map(|i| x[(i, j)].norm_sqr()).sum()
}

//! Search over shared-state weights `p_j = |c_j|²` for the best success probability.
//!
//! Phases of `c_j` never change the probability, so the search space is the
//! probability simplex restricted to the target's nonzero columns. Nelder–Mead
//! works in the softmax chart `p = softmax(z_1, …, z_{m-1}, 0)`; the grid
//! method enumerates a simplex lattice.

use alloc::vec;
use alloc::vec::Vec;


#[allow(unused_imports)] // shadowed by std's inherent methods when std is in the build graph
use num_traits::Float;

use crate::coding::column_norm_amplitudes;
use crate::matrix::ComplexMatrix;
use crate::state::TargetState;
use crate::{Error, Result};

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;
const SPREAD_TOL: f64 = 1e-10;
const MAX_RESTARTS: usize = 8;
const GRID_MAX_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Grid,
    NelderMead,
}

/// A named starting point and its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedPoint {
    pub name: &'static str,
    pub weights: Vec<f64>,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    /// `√p` at the best point; zero on columns the target does not use.
    pub best_c: Vec<f64>,
    pub best_prob: f64,
    pub method: Method,
    pub evaluations: usize,
    pub seeds: Vec<SeedPoint>,
    /// `(evaluation, best so far)` at every improvement.
    pub history: Vec<(usize, f64)>,
    /// False when the budget ran out before the search settled.
    pub converged: bool,
}

/// Precomputed column Gram matrix and the columns that need shared weight.
struct Problem {
    d: usize,
    gram: ComplexMatrix,
    needed: Vec<usize>,
    tol: f64,
}

impl Problem {
    fn new(t: &TargetState, tol: f64) -> Self {
        let gram = t.coefficients().gram();
        let needed = (0..t.dim()).filter(|&j| gram[(j, j)].re.sqrt() > tol).collect();
        Self { d: t.dim(), gram, needed, tol }
    }

    /// Probability for weights `q` over the needed columns (need not sum to 1).
    fn eval_needed(&self, q: &[f64]) -> f64 {
        if q.iter().any(|&w| w <= 0.0 || !w.is_finite()) {
            return 0.0;
        }
        let m = self.needed.len();
        let d = self.d as f64;
        let scale: Vec<f64> = q.iter().map(|&w| 1.0 / (d * w).sqrt()).collect();
        let block = ComplexMatrix::from_fn(m, m, |a, b| {
            self.gram[(self.needed[a], self.needed[b])] * (scale[a] * scale[b])
        });
        match block.hermitian_eig(self.tol) {
            Ok(eig) if eig.values[0] > 0.0 => (1.0 / eig.values[0]).min(1.0),
            _ => 0.0,
        }
    }

    fn eval_full(&self, p: &[f64]) -> f64 {
        if p.len() != self.d || p.iter().any(|&w| !w.is_finite() || w < 0.0) {
            return 0.0;
        }
        let q: Vec<f64> = self.needed.iter().map(|&j| p[j]).collect();
        self.eval_needed(&q)
    }

    fn embed(&self, q: &[f64]) -> Vec<f64> {
        let mut p = vec![0.0; self.d];
        for (&j, &w) in self.needed.iter().zip(q) {
            p[j] = w;
        }
        p
    }
}

/// Success probability at simplex point `p`; 0 when a needed column has no weight.
pub fn objective(t: &TargetState, p: &[f64]) -> f64 {
    Problem::new(t, crate::DEFAULT_TOL).eval_full(p)
}

struct Tracker<'a> {
    problem: &'a Problem,
    evaluations: usize,
    budget: usize,
    best_prob: f64,
    best_p: Vec<f64>,
    history: Vec<(usize, f64)>,
}

impl<'a> Tracker<'a> {
    fn new(problem: &'a Problem, budget: usize) -> Self {
        Self {
            problem,
            evaluations: 0,
            budget,
            best_prob: 0.0,
            best_p: vec![0.0; problem.d],
            history: Vec::new(),
        }
    }

    fn offer(&mut self, p: Vec<f64>, prob: f64) {
        if prob > self.best_prob {
            self.best_prob = prob;
            self.best_p = p;
            self.history.push((self.evaluations, prob));
        }
    }

    fn eval_needed(&mut self, q: &[f64]) -> f64 {
        self.evaluations += 1;
        let prob = self.problem.eval_needed(q);
        if prob > self.best_prob {
            let p = self.problem.embed(q);
            self.offer(p, prob);
        }
        prob
    }

    fn exhausted(&self) -> bool {
        self.evaluations >= self.budget
    }
}

pub fn optimize_shared(t: &TargetState, method: Method, budget: usize, tol: f64) -> Result<OptimizationResult> {
    if budget == 0 {
        return Err(Error::ZeroBudget);
    }
    if method == Method::Grid && t.dim() > GRID_MAX_DIM {
        return Err(Error::DimensionTooLarge { d: t.dim() });
    }
    let problem = Problem::new(t, tol);
    let d = problem.d;
    let mut tracker = Tracker::new(&problem, budget);

    let column_weights: Vec<f64> = column_norm_amplitudes(t, tol).iter().map(|c| c.norm_sqr()).collect();
    let uniform = vec![1.0 / d as f64; d];
    let mut seeds = Vec::new();
    for (name, weights) in [("column_norms", column_weights), ("uniform", uniform)] {
        tracker.evaluations += 1;
        let prob = problem.eval_full(&weights);
        tracker.offer(weights.clone(), prob);
        seeds.push(SeedPoint { name, weights, prob });
    }

    let converged = match method {
        Method::Grid => {
            grid_search(&mut tracker);
            true
        }
        Method::NelderMead => {
            let mut all = true;
            for (k, seed) in seeds.iter().enumerate() {
                let remaining = budget.saturating_sub(tracker.evaluations);
                let limit = tracker.evaluations + remaining / (seeds.len() - k);
                all &= search_from(&mut tracker, &seed.weights, limit);
            }
            all
        }
    };

    let best_c = tracker.best_p.iter().map(|&w| w.sqrt()).collect();
    Ok(OptimizationResult {
        best_c,
        best_prob: tracker.best_prob,
        method,
        evaluations: tracker.evaluations,
        seeds,
        history: tracker.history,
        converged,
    })
}

fn softmax(z: &[f64]) -> Vec<f64> {
    let max = z.iter().copied().fold(0.0, f64::max);
    let mut q: Vec<f64> = z.iter().map(|&v| (v - max).exp()).collect();
    q.push((-max).exp());
    let sum: f64 = q.iter().sum();
    q.iter_mut().for_each(|w| *w /= sum);
    q
}

/// Chart coordinates of the needed-column restriction of `p`, renormalized.
fn to_chart(problem: &Problem, p: &[f64]) -> Vec<f64> {
    let q: Vec<f64> = problem.needed.iter().map(|&j| p[j].max(1e-300)).collect();
    let last = q[q.len() - 1].ln();
    q[..q.len() - 1].iter().map(|w| w.ln() - last).collect()
}

/// Nelder–Mead from `start`, restarted around the incumbent until it stops
/// improving. Returns whether the last run converged within `limit` evaluations.
fn search_from(tracker: &mut Tracker<'_>, start: &[f64], limit: usize) -> bool {
    let problem = tracker.problem;
    if problem.needed.len() == 1 {
        tracker.eval_needed(&[1.0]);
        return true;
    }
    let mut z = to_chart(problem, start);
    let mut step = 1.0;
    let mut last_value = f64::NEG_INFINITY;
    let mut converged = false;
    for _ in 0..MAX_RESTARTS {
        if tracker.evaluations >= limit {
            break;
        }
        let (best_z, value, done) = nelder_mead(tracker, &z, step, limit);
        converged = done;
        if value <= last_value + 1e-14 {
            break;
        }
        last_value = value;
        z = best_z;
        step = 0.25;
    }
    converged
}

/// One Nelder–Mead run maximizing the probability over the softmax chart.
fn nelder_mead(tracker: &mut Tracker<'_>, z0: &[f64], step: f64, limit: usize) -> (Vec<f64>, f64, bool) {
    let n = z0.len();
    let f = |tracker: &mut Tracker<'_>, z: &[f64]| -tracker.eval_needed(&softmax(z));

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = f(tracker, z0);
    simplex.push((z0.to_vec(), v0));
    for i in 0..n {
        let mut z = z0.to_vec();
        z[i] += step;
        let v = f(tracker, &z);
        simplex.push((z, v));
    }

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if (worst - best).abs() < SPREAD_TOL {
            return (simplex[0].0.clone(), -best, true);
        }
        if tracker.evaluations >= limit || tracker.exhausted() {
            return (simplex[0].0.clone(), -best, false);
        }

        let mut centroid = vec![0.0; n];
        for (z, _) in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(z) {
                *c += v / n as f64;
            }
        }
        let along = |from: &[f64], to: &[f64], t: f64| -> Vec<f64> {
            from.iter().zip(to).map(|(a, b)| a + t * (b - a)).collect()
        };

        let reflected = along(&centroid, &simplex[n].0, -REFLECT);
        let fr = f(tracker, &reflected);
        if fr < best {
            let expanded = along(&centroid, &reflected, EXPAND);
            let fe = f(tracker, &expanded);
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < worst {
            let z = along(&centroid, &reflected, CONTRACT);
            let v = f(tracker, &z);
            (z, v)
        } else {
            let z = along(&centroid, &simplex[n].0, CONTRACT);
            let v = f(tracker, &z);
            (z, v)
        };
        if fc < fr.min(worst) {
            simplex[n] = (contracted, fc);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for entry in simplex.iter_mut().skip(1) {
            let z = along(&anchor, &entry.0, SHRINK);
            let v = f(tracker, &z);
            *entry = (z, v);
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Lattice resolution `N`: the finest with `C(N+m−1, m−1)` points inside the budget.
pub(crate) fn grid_resolution(m: usize, budget: usize) -> usize {
    if m <= 1 {
        return 1;
    }
    let mut n = 1;
    while binomial(n + 1 + m - 1, m - 1) <= budget {
        n += 1;
    }
    n
}

fn grid_search(tracker: &mut Tracker<'_>) {
    let m = tracker.problem.needed.len();
    let remaining = tracker.budget.saturating_sub(tracker.evaluations).max(1);
    let resolution = grid_resolution(m, remaining);
    let mut counts = vec![0usize; m];
    let mut q = vec![0.0; m];
    visit_compositions(&mut counts, 0, resolution, &mut |counts| {
        if counts.contains(&0) {
            return;
        }
        for (w, &k) in q.iter_mut().zip(counts) {
            *w = k as f64 / resolution as f64;
        }
        tracker.eval_needed(&q);
    });
}

fn visit_compositions(counts: &mut [usize], pos: usize, left: usize, visit: &mut dyn FnMut(&[usize])) {
    if pos + 1 == counts.len() {
        counts[pos] = left;
        visit(counts);
        return;
    }
    for k in 0..=left {
        counts[pos] = k;
        visit_compositions(counts, pos + 1, left - k, visit);
    }
}

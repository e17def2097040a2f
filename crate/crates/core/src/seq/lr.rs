//! L2-regularized logistic regression fitted with limited-memory BFGS.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::features::BinaryDocument;
use super::nb::{sigmoid, NbModel};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LrModel<T> {
    pub weights: Vec<T>,
    pub intercept: T,
    pub l2_strength: T,
}

impl<T: Real> LrModel<T> {
    pub fn logit(&self, features: &[usize]) -> T {
        features.iter().filter_map(|&j| self.weights.get(j)).fold(self.intercept, |acc, &w| acc + w)
    }

    /// `P(y = 1 | features)`; ids outside the weight vector are ignored.
    pub fn predict(&self, features: &[usize]) -> T {
        sigmoid(self.logit(features))
    }

    /// The log-linear model with Naive Bayes' log-odds as its weights.
    pub fn from_naive_bayes(nb: &NbModel<T>) -> Self {
        let weights = (0..nb.num_features())
            .map(|j| {
                (nb.log_feature_on[1][j] - nb.log_feature_off[1][j])
                    - (nb.log_feature_on[0][j] - nb.log_feature_off[0][j])
            })
            .collect();
        Self { weights, intercept: nb.log_odds(&[]), l2_strength: T::zero() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LrOptions<T> {
    /// Stop once the penalized gradient's ∞-norm drops below this.
    pub tolerance: T,
    pub max_iterations: usize,
    pub memory: usize,
}

impl<T: Real> Default for LrOptions<T> {
    fn default() -> Self {
        Self { tolerance: T::lit(1e-6), max_iterations: 1_000, memory: 10 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LrFit<T> {
    pub model: LrModel<T>,
    pub iterations: usize,
    /// False when the iteration cap was hit first.
    pub converged: bool,
    pub gradient_norm: T,
    /// Penalized log-likelihood at the returned parameters.
    pub objective: T,
}

/// `Σᵢ log P(yᵢ | xᵢ) − (λ/2)‖w‖²`; the intercept is not penalized.
pub fn penalized_objective<T: Real>(model: &LrModel<T>, docs: &[BinaryDocument]) -> T {
    let ll: T = docs
        .iter()
        .map(|d| {
            let z = model.logit(&d.features);
            let y = if d.label { z } else { T::zero() };
            y - softplus(z)
        })
        .sum();
    let norm2: T = model.weights.iter().map(|&w| w * w).sum();
    ll - model.l2_strength * norm2 / T::lit(2.0)
}

pub fn train_logistic_regression<T: Real>(
    docs: &[BinaryDocument],
    num_features: usize,
    l2_strength: T,
) -> Result<LrFit<T>> {
    train_logistic_regression_with(docs, num_features, l2_strength, LrOptions::default())
}

pub fn train_logistic_regression_with<T: Real>(
    docs: &[BinaryDocument],
    num_features: usize,
    l2_strength: T,
    options: LrOptions<T>,
) -> Result<LrFit<T>> {
    if docs.is_empty() {
        return Err(Error::NoData);
    }
    if !(l2_strength >= T::zero()) {
        return Err(Error::param("L2 strength must be non-negative"));
    }
    if !docs.iter().any(|d| d.label) || docs.iter().all(|d| d.label) {
        return Err(Error::Training("corpus contains a single class".into()));
    }
    if let Some(j) = docs.iter().flat_map(|d| &d.features).find(|&&j| j >= num_features) {
        return Err(Error::input(format!("feature id {j} outside vocabulary of {num_features}")));
    }

    let problem = Problem { docs, dim: num_features, l2: l2_strength };
    let (x, iterations, converged, fx, gx) = minimize(&problem, options)?;
    let (weights, intercept) = (x[..num_features].to_vec(), x[num_features]);
    Ok(LrFit {
        model: LrModel { weights, intercept, l2_strength },
        iterations,
        converged,
        gradient_norm: inf_norm(&gx),
        objective: -fx,
    })
}

fn softplus<T: Real>(z: T) -> T {
    z.max(T::zero()) + (-z.abs()).exp().ln_1p()
}

/// Negative penalized log-likelihood over `[w, b]`.
struct Problem<'a, T> {
    docs: &'a [BinaryDocument],
    dim: usize,
    l2: T,
}

impl<T: Real> Problem<'_, T> {
    fn eval(&self, x: &[T], grad: &mut [T]) -> T {
        let (w, b) = (&x[..self.dim], x[self.dim]);
        grad.iter_mut().for_each(|g| *g = T::zero());
        let mut f = T::zero();
        for d in self.docs {
            let z = d.features.iter().fold(b, |acc, &j| acc + w[j]);
            let y = if d.label { T::one() } else { T::zero() };
            f += softplus(z) - y * z;
            let r = sigmoid(z) - y;
            for &j in &d.features {
                grad[j] += r;
            }
            grad[self.dim] += r;
        }
        let half = T::lit(0.5);
        for j in 0..self.dim {
            f += half * self.l2 * w[j] * w[j];
            grad[j] += self.l2 * w[j];
        }
        f
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn inf_norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

type Minimum<T> = (Vec<T>, usize, bool, T, Vec<T>);

fn minimize<T: Real>(problem: &Problem<'_, T>, options: LrOptions<T>) -> Result<Minimum<T>> {
    let n = problem.dim + 1;
    let mut x = vec![T::zero(); n];
    let mut g = vec![T::zero(); n];
    let mut fx = problem.eval(&x, &mut g);
    if !fx.is_finite() {
        return Err(Error::Training("objective is not finite".into()));
    }
    let mut history: VecDeque<(Vec<T>, Vec<T>, T)> = VecDeque::with_capacity(options.memory);
    let mut x_new = vec![T::zero(); n];
    let mut g_new = vec![T::zero(); n];
    let c1 = T::lit(1e-4);
    // Accept steps whose change is lost in rounding of the objective.
    let slack = |f: T| T::lit(16.0) * T::epsilon() * (T::one() + f.abs());

    let mut iter = 0;
    while iter < options.max_iterations {
        if inf_norm(&g) < options.tolerance {
            return Ok((x, iter, true, fx, g));
        }
        iter += 1;

        let mut dir = two_loop(&g, &history);
        let mut gd = dot(&g, &dir);
        if !(gd < T::zero()) {
            history.clear();
            dir = g.iter().map(|&v| -v).collect();
            gd = -dot(&g, &g);
        }
        let mut step = if history.is_empty() { T::one() / inf_norm(&g).max(T::one()) } else { T::one() };

        let mut accepted = false;
        for _ in 0..60 {
            for i in 0..n {
                x_new[i] = x[i] + step * dir[i];
            }
            let f_new = problem.eval(&x_new, &mut g_new);
            if f_new.is_finite() && f_new <= fx + c1 * step * gd + slack(fx) {
                let s: Vec<T> = x_new.iter().zip(&x).map(|(&a, &b)| a - b).collect();
                let y: Vec<T> = g_new.iter().zip(&g).map(|(&a, &b)| a - b).collect();
                let sy = dot(&s, &y);
                if sy > T::epsilon() * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() {
                    if history.len() == options.memory {
                        history.pop_front();
                    }
                    history.push_back((s, y, T::one() / sy));
                }
                std::mem::swap(&mut x, &mut x_new);
                std::mem::swap(&mut g, &mut g_new);
                fx = f_new;
                accepted = true;
                break;
            }
            step *= T::lit(0.5);
        }
        if !fx.is_finite() {
            return Err(Error::Training("objective is not finite".into()));
        }
        if !accepted {
            if history.is_empty() {
                break;
            }
            history.clear();
        }
    }
    let converged = inf_norm(&g) < options.tolerance;
    Ok((x, iter, converged, fx, g))
}

/// L-BFGS two-loop recursion: returns `−H·g`.
fn two_loop<T: Real>(g: &[T], history: &VecDeque<(Vec<T>, Vec<T>, T)>) -> Vec<T> {
    let mut q: Vec<T> = g.to_vec();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, rho) in history.iter().rev() {
        let a = *rho * dot(s, &q);
        for (qi, &yi) in q.iter_mut().zip(y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    if let Some((s, y, _)) = history.back() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|v| *v *= gamma);
    }
    for ((s, y, rho), a) in history.iter().zip(alphas.into_iter().rev()) {
        let b = *rho * dot(y, &q);
        for (qi, &si) in q.iter_mut().zip(s) {
            *qi += (a - b) * si;
        }
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}

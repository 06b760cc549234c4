use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionProblem {
    /// Diagonal of the input covariance, strictly positive and non-increasing.
    pub h_diag: Vec<f64>,
    pub w_star: Vec<f64>,
    /// Standard deviation of the response noise.
    pub noise_std: f64,
    pub batch_size: usize,
}

impl Default for RegressionProblem {
    /// 50 dimensions, `H_ii = 1/i`, `w* = 1`, noise variance 0.01, batches of 11.
    fn default() -> Self {
        RegressionProblem::harmonic(50, 0.1, 11)
    }
}

impl RegressionProblem {
    /// `H_ii = 1/i` for `i = 1..=dim` with an all-ones optimum.
    pub fn harmonic(dim: usize, noise_std: f64, batch_size: usize) -> Self {
        RegressionProblem {
            h_diag: (1..=dim).map(|i| 1.0 / i as f64).collect(),
            w_star: vec![1.0; dim],
            noise_std,
            batch_size,
        }
    }

    pub fn dim(&self) -> usize {
        self.h_diag.len()
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: &str| Err(Error::InvalidParameter(msg.to_string()));
        if self.h_diag.is_empty() {
            return invalid("problem dimension must be at least 1");
        }
        if self.w_star.len() != self.h_diag.len() {
            return invalid("optimum and covariance dimensions differ");
        }
        if self.h_diag.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
            return invalid("covariance diagonal must be strictly positive");
        }
        if self.h_diag.windows(2).any(|w| w[1] > w[0]) {
            return invalid("covariance diagonal must be non-increasing");
        }
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return invalid("noise standard deviation must be non-negative");
        }
        if self.batch_size == 0 {
            return invalid("batch size must be at least 1");
        }
        Ok(())
    }
}

/// Row-major mini-batch.
#[derive(Debug, Clone, PartialEq)]
pub struct Batch {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<f64>,
}

pub fn sample_batch<R: Rng + ?Sized>(rng: &mut R, problem: &RegressionProblem) -> Batch {
    let mut x = Vec::with_capacity(problem.batch_size);
    let mut y = Vec::with_capacity(problem.batch_size);
    let scales: Vec<f64> = problem.h_diag.iter().map(|h| h.sqrt()).collect();
    for _ in 0..problem.batch_size {
        let row: Vec<f64> = scales
            .iter()
            .map(|s| s * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let clean: f64 = row.iter().zip(&problem.w_star).map(|(a, b)| a * b).sum();
        let noise = problem.noise_std * rng.sample::<f64, _>(StandardNormal);
        x.push(row);
        y.push(clean + noise);
    }
    Batch { x, y }
}

/// Mini-batch gradient of `mean_j (x_j.w - y_j)^2`.
pub fn batch_gradient(w: &[f64], batch: &Batch) -> Vec<f64> {
    let mut grad = vec![0.0; w.len()];
    let scale = 2.0 / batch.y.len() as f64;
    for (row, &y) in batch.x.iter().zip(&batch.y) {
        let residual: f64 = row.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() - y;
        for (g, &a) in grad.iter_mut().zip(row) {
            *g += scale * residual * a;
        }
    }
    grad
}

/// `w - stepsize * (2/B) X'(Xw - y)`.
pub fn sgd_step(w: &[f64], batch: &Batch, stepsize: f64) -> Vec<f64> {
    let grad = batch_gradient(w, batch);
    w.iter()
        .zip(grad)
        .map(|(wi, g)| wi - stepsize * g)
        .collect()
}

/// `l(w) - l(w*) = sum_i H_ii (w_i - w*_i)^2`.
pub fn excess_error(w: &[f64], problem: &RegressionProblem) -> f64 {
    w.iter()
        .zip(&problem.w_star)
        .zip(&problem.h_diag)
        .map(|((wi, si), h)| h * (wi - si) * (wi - si))
        .sum()
}

//! Stochastic linear regression benchmark for iterate averaging.
//!
//! Inputs are drawn as `x ~ N(0, H)` with diagonal `H_ii = 1/i`, responses as
//! `y = x.w* + noise`. Mini-batch SGD with a constant stepsize produces one
//! iterate per batch; every averager in the roster consumes the same iterates
//! and the excess error `(w - w*)' H (w - w*)` of each averaged estimate is
//! recorded per step and averaged over independent runs.

mod problem;
mod runner;

pub use problem::{excess_error, sample_batch, sgd_step, Batch, RegressionProblem};
pub use runner::{run_experiment, ExperimentConfig, RunRecord, TrajectorySet};

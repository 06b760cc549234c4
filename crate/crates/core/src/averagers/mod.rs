//! Constant-memory averaging estimators.
//!
//! Each estimator consumes a stream of equal-length vectors one sample at a
//! time and can report an average after every step. All of them weight the
//! samples so that the weights sum to one; the variance-matched ones also keep
//! the squared weights summing to `1 / k_t`, the variance of a plain mean over
//! the last `k_t` samples.

mod any;
mod awa;
mod exp_fixed;
mod exp_growing;

pub use any::{AnyAverager, AveragerKind};
pub use awa::{awa_gamma_oldest, awa_gamma_two, Awa, Blend, BlendKind};
pub use exp_fixed::ExpFixed;
pub use exp_growing::{exp_growing_gamma, smaller_root, ExpGrowing};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Common interface of every streaming averager.
pub trait Averager<T: Scalar> {
    fn dim(&self) -> usize;

    /// Number of samples observed so far.
    fn steps(&self) -> u64;

    fn observe(&mut self, x: &[T]) -> Result<()>;

    fn estimate(&self) -> Result<Vec<T>>;

    /// `1 / sum(alpha^2)` for the weights behind the current estimate.
    fn effective_sample_size(&self) -> Result<T>;

    /// Window `k_t` the estimator is matching at the current step, if any.
    fn target_window(&self) -> Option<u64>;

    /// Mixing coefficients used by the latest estimate, with column labels.
    fn coefficients(&self) -> Vec<(String, T)> {
        Vec::new()
    }

    /// Whether `sum(alpha^2) = 1 / k_t` is guaranteed at the current step.
    fn variance_contract_active(&self) -> bool;

    /// Number of scalars held in the state (excluding fixed-size bookkeeping).
    fn stored_scalars(&self) -> usize;
}

pub(crate) fn check_sample<T: Scalar>(dim: usize, x: &[T]) -> Result<()> {
    if x.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: x.len(),
        });
    }
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    Ok(())
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidParameter(
            "dimension must be at least 1".into(),
        ));
    }
    Ok(())
}

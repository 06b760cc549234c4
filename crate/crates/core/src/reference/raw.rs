use serde::{Deserialize, Serialize};

use crate::accumulator::Accumulator;
use crate::averagers::{check_dim, check_sample, Averager};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::schedule::{ceil_tolerant, WindowSchedule};

/// First step included in the fixed-horizon tail average: `ceil(T (1 - c))`.
pub fn raw_start(horizon: u64, c: f64) -> u64 {
    ceil_tolerant(horizon as f64 * (1.0 - c)).max(1)
}

/// Classic tail average for a known horizon: nothing is averaged before
/// [`raw_start`], after which a single running mean accumulates every sample.
///
/// Used as an averager it reports the latest sample until averaging starts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawTailAverage<T> {
    horizon: u64,
    c: f64,
    start: u64,
    acc: Accumulator<T>,
    last: Vec<T>,
    t: u64,
}

impl<T: Scalar> RawTailAverage<T> {
    pub fn new(dim: usize, horizon: u64, c: f64) -> Result<Self> {
        check_dim(dim)?;
        WindowSchedule::proportional(c)?;
        if horizon == 0 {
            return Err(Error::InvalidParameter("horizon must be at least 1".into()));
        }
        Ok(RawTailAverage {
            horizon,
            c,
            start: raw_start(horizon, c),
            acc: Accumulator::new(dim),
            last: vec![T::zero(); dim],
            t: 0,
        })
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Number of samples in the running tail mean.
    pub fn averaged(&self) -> u64 {
        self.acc.count()
    }

    /// The tail mean, or `None` before averaging has started.
    pub fn raw_tail_average(&self) -> Option<&[T]> {
        (!self.acc.is_empty()).then(|| self.acc.mean())
    }
}

impl<T: Scalar> Averager<T> for RawTailAverage<T> {
    fn dim(&self) -> usize {
        self.last.len()
    }

    fn steps(&self) -> u64 {
        self.t
    }

    fn observe(&mut self, x: &[T]) -> Result<()> {
        check_sample(self.dim(), x)?;
        self.t += 1;
        self.last.copy_from_slice(x);
        if self.t >= self.start {
            self.acc.push(x);
        }
        Ok(())
    }

    fn estimate(&self) -> Result<Vec<T>> {
        if self.t == 0 {
            return Err(Error::Empty);
        }
        Ok(self.raw_tail_average().unwrap_or(&self.last).to_vec())
    }

    fn effective_sample_size(&self) -> Result<T> {
        if self.t == 0 {
            return Err(Error::Empty);
        }
        Ok(T::of_count(self.acc.count().max(1)))
    }

    fn target_window(&self) -> Option<u64> {
        (self.t > 0).then(|| self.acc.count().max(1))
    }

    fn variance_contract_active(&self) -> bool {
        false
    }

    fn stored_scalars(&self) -> usize {
        2 * self.dim()
    }
}

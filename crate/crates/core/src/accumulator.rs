use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Running mean of a contiguous block of samples.
///
/// An empty accumulator holds the zero vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Accumulator<T> {
    mean: Vec<T>,
    count: u64,
}

impl<T: Scalar> Accumulator<T> {
    pub fn new(dim: usize) -> Self {
        Accumulator {
            mean: vec![T::zero(); dim],
            count: 0,
        }
    }

    pub fn mean(&self) -> &[T] {
        &self.mean
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Folds `x` in with `mean += (x - mean) / count`.
    pub fn push(&mut self, x: &[T]) {
        debug_assert_eq!(x.len(), self.mean.len());
        self.count += 1;
        let inv = T::of_count(self.count).recip();
        for (m, &xi) in self.mean.iter_mut().zip(x) {
            *m = *m + (xi - *m) * inv;
        }
    }

    pub fn reset(&mut self) {
        self.count = 0;
        self.mean.iter_mut().for_each(|m| *m = T::zero());
    }
}

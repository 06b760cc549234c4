use serde::{Deserialize, Serialize};

use super::{check_dim, check_sample, Averager};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exponential moving average whose stationary variance matches a `k`-sample
/// mean: `gamma = (k - 1) / (k + 1)`.
///
/// The first sample initializes the mean so the weights sum to one from the
/// start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpFixed<T> {
    mean: Vec<T>,
    gamma: T,
    k: u64,
    steps_seen: u64,
    last_gamma: T,
}

impl<T: Scalar> ExpFixed<T> {
    pub fn new(dim: usize, k: u64) -> Result<Self> {
        check_dim(dim)?;
        if k == 0 {
            return Err(Error::InvalidParameter(
                "window size k must be at least 1".into(),
            ));
        }
        Ok(ExpFixed {
            mean: vec![T::zero(); dim],
            gamma: Self::gamma_for(k),
            k,
            steps_seen: 0,
            last_gamma: T::zero(),
        })
    }

    pub fn gamma_for(k: u64) -> T {
        let k = T::of_count(k);
        (k - T::one()) / (k + T::one())
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Decay actually applied on the latest step (zero on the first one).
    pub fn last_gamma(&self) -> T {
        self.last_gamma
    }

    pub fn mean(&self) -> &[T] {
        &self.mean
    }

    /// `sum(alpha^2)` after `t` steps:
    /// `gamma^(2(t-1)) + (1-gamma)^2 (1 - gamma^(2(t-1))) / (1 - gamma^2)`.
    fn squared_weight_sum(&self) -> T {
        let g = self.gamma;
        let one = T::one();
        let head = g.powf(T::of_count(2 * (self.steps_seen - 1)));
        head + (one - g) * (one - g) * (one - head) / (one - g * g)
    }
}

impl<T: Scalar> Averager<T> for ExpFixed<T> {
    fn dim(&self) -> usize {
        self.mean.len()
    }

    fn steps(&self) -> u64 {
        self.steps_seen
    }

    fn observe(&mut self, x: &[T]) -> Result<()> {
        check_sample(self.mean.len(), x)?;
        self.last_gamma = if self.steps_seen == 0 {
            T::zero()
        } else {
            self.gamma
        };
        let g = self.last_gamma;
        let w = T::one() - g;
        for (m, &xi) in self.mean.iter_mut().zip(x) {
            *m = g * *m + w * xi;
        }
        self.steps_seen += 1;
        Ok(())
    }

    fn estimate(&self) -> Result<Vec<T>> {
        if self.steps_seen == 0 {
            return Err(Error::Empty);
        }
        Ok(self.mean.clone())
    }

    fn effective_sample_size(&self) -> Result<T> {
        if self.steps_seen == 0 {
            return Err(Error::Empty);
        }
        Ok(self.squared_weight_sum().recip())
    }

    fn target_window(&self) -> Option<u64> {
        Some(self.k)
    }

    fn coefficients(&self) -> Vec<(String, T)> {
        vec![("gamma".to_string(), self.last_gamma)]
    }

    /// The contract only holds asymptotically; it is considered in force once
    /// the start-up term is below 1e-10 in squared weight.
    fn variance_contract_active(&self) -> bool {
        if self.steps_seen == 0 {
            return false;
        }
        let target = T::of_count(self.k).recip();
        (self.squared_weight_sum() - target).abs() <= T::from_f64_lossy(1e-10)
    }

    fn stored_scalars(&self) -> usize {
        self.mean.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_matches_window() {
        let g = ExpFixed::<f64>::gamma_for(10);
        assert!((g - 9.0 / 11.0).abs() < 1e-15);
        assert_eq!(ExpFixed::<f64>::gamma_for(1), 0.0);
    }

    #[test]
    fn direct_substitution() {
        let mut avg = ExpFixed::<f64>::new(1, 3).unwrap();
        assert_eq!(avg.gamma(), 0.5);
        avg.observe(&[0.0]).unwrap();
        avg.observe(&[4.0]).unwrap();
        assert_eq!(avg.estimate().unwrap(), vec![2.0]);
    }

    #[test]
    fn constant_stream_is_fixed_point() {
        let mut avg = ExpFixed::<f64>::new(3, 10).unwrap();
        for _ in 0..100 {
            avg.observe(&[1.5, -2.0, 0.25]).unwrap();
            assert_eq!(avg.estimate().unwrap(), vec![1.5, -2.0, 0.25]);
        }
    }

    #[test]
    fn effective_sample_size_limits() {
        let mut avg = ExpFixed::<f64>::new(1, 10).unwrap();
        assert_eq!(avg.effective_sample_size(), Err(Error::Empty));
        avg.observe(&[0.0]).unwrap();
        assert!((avg.effective_sample_size().unwrap() - 1.0).abs() < 1e-15);
        for _ in 0..2000 {
            avg.observe(&[0.0]).unwrap();
        }
        assert!((avg.effective_sample_size().unwrap() - 10.0).abs() < 1e-9);
        assert!(avg.variance_contract_active());
    }

    #[test]
    fn rejects_bad_samples() {
        let mut avg = ExpFixed::<f64>::new(2, 4).unwrap();
        assert_eq!(
            avg.observe(&[1.0]),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        );
        assert_eq!(avg.observe(&[1.0, f64::NAN]), Err(Error::NonFinite(1)));
        assert_eq!(avg.steps(), 0);
    }
}

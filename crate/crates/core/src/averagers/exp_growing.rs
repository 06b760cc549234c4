use serde::{Deserialize, Serialize};

use super::{check_dim, check_sample, Averager};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::schedule::{target_window, WindowSchedule};

/// Smaller root of `gamma^2 / n_prev + (1 - gamma)^2 = 1 / target`.
///
/// Returns `None` when the quadratic has no real root, i.e. when one extra
/// sample cannot bring the effective sample size up to `target`
/// (`target > n_prev + 1`).
pub fn smaller_root<T: Scalar>(n_prev: T, target: T) -> Option<T> {
    let one = T::one();
    // Reduced discriminant (n - K + 1) / (n K), kept in this form so its sign
    // is exact for integer arguments.
    let disc = (n_prev - target + one) / (n_prev * target);
    if disc < T::zero() {
        return None;
    }
    Some(n_prev * (one - disc.sqrt()) / (n_prev + one))
}

/// Decay for step `t` of the growing exponential average with window
/// `ceil(c t)`, given the effective sample size `n_prev` after step `t - 1`.
///
/// Falls back to the running-mean decay `n_prev / (n_prev + 1)` when the
/// window target cannot be reached in one step.
pub fn exp_growing_gamma<T: Scalar>(t: u64, c: f64, n_prev: T) -> T {
    let target = T::of_count(target_window(WindowSchedule::Proportional(c), t));
    solve_gamma(n_prev, target).0
}

fn solve_gamma<T: Scalar>(n_prev: T, target: T) -> (T, bool) {
    match smaller_root(n_prev, target) {
        Some(g) => (g.max(T::zero()).min(T::one()), true),
        None => (n_prev / (n_prev + T::one()), false),
    }
}

/// Exponential average whose decay changes every step so that the effective
/// sample size tracks `ceil(c t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpGrowing<T> {
    mean: Vec<T>,
    n_eff: T,
    c: f64,
    t: u64,
    last_gamma: T,
    on_target: bool,
}

impl<T: Scalar> ExpGrowing<T> {
    pub fn new(dim: usize, c: f64) -> Result<Self> {
        check_dim(dim)?;
        WindowSchedule::proportional(c)?;
        Ok(ExpGrowing {
            mean: vec![T::zero(); dim],
            n_eff: T::zero(),
            c,
            t: 0,
            last_gamma: T::zero(),
            on_target: false,
        })
    }

    /// Resumes from an arbitrary state: `mean` after `t` samples with
    /// effective sample size `n_eff` (`1 <= n_eff <= t`).
    pub fn from_state(mean: Vec<T>, n_eff: T, t: u64, c: f64) -> Result<Self> {
        check_dim(mean.len())?;
        check_sample(mean.len(), &mean)?;
        WindowSchedule::proportional(c)?;
        if t == 0 || !(n_eff >= T::one() && n_eff <= T::of_count(t)) {
            return Err(Error::InvalidParameter(format!(
                "effective sample size {n_eff} must lie in [1, t={t}]"
            )));
        }
        Ok(ExpGrowing {
            mean,
            n_eff,
            c,
            t,
            last_gamma: T::zero(),
            on_target: false,
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn n_eff(&self) -> T {
        self.n_eff
    }

    pub fn last_gamma(&self) -> T {
        self.last_gamma
    }

    pub fn mean(&self) -> &[T] {
        &self.mean
    }

    pub fn schedule(&self) -> WindowSchedule {
        WindowSchedule::Proportional(self.c)
    }
}

impl<T: Scalar> Averager<T> for ExpGrowing<T> {
    fn dim(&self) -> usize {
        self.mean.len()
    }

    fn steps(&self) -> u64 {
        self.t
    }

    fn observe(&mut self, x: &[T]) -> Result<()> {
        check_sample(self.mean.len(), x)?;
        self.t += 1;
        if self.t == 1 {
            self.mean.copy_from_slice(x);
            self.n_eff = T::one();
            self.last_gamma = T::zero();
            self.on_target = true;
            return Ok(());
        }
        let target = T::of_count(target_window(self.schedule(), self.t));
        let (g, on_target) = solve_gamma(self.n_eff, target);
        let w = T::one() - g;
        for (m, &xi) in self.mean.iter_mut().zip(x) {
            *m = g * *m + w * xi;
        }
        self.n_eff = (g * g / self.n_eff + w * w).recip();
        self.last_gamma = g;
        self.on_target = on_target;
        Ok(())
    }

    fn estimate(&self) -> Result<Vec<T>> {
        if self.t == 0 {
            return Err(Error::Empty);
        }
        Ok(self.mean.clone())
    }

    fn effective_sample_size(&self) -> Result<T> {
        if self.t == 0 {
            return Err(Error::Empty);
        }
        Ok(self.n_eff)
    }

    fn target_window(&self) -> Option<u64> {
        (self.t > 0).then(|| target_window(self.schedule(), self.t))
    }

    fn coefficients(&self) -> Vec<(String, T)> {
        vec![("gamma".to_string(), self.last_gamma)]
    }

    fn variance_contract_active(&self) -> bool {
        self.t > 0 && self.on_target
    }

    fn stored_scalars(&self) -> usize {
        self.mean.len()
    }
}

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::averagers::Averager;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::schedule::{target_window, WindowSchedule};

/// The last `capacity` samples of a stream, oldest first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingWindow<T> {
    buffer: VecDeque<Vec<T>>,
    capacity: usize,
}

impl<T: Scalar> RingWindow<T> {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidParameter(
                "ring capacity must be at least 1".into(),
            ));
        }
        Ok(RingWindow {
            buffer: VecDeque::with_capacity(capacity),
            capacity,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.buffer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buffer.is_empty()
    }

    pub fn push(&mut self, x: &[T]) {
        if self.buffer.len() == self.capacity {
            let mut slot = self.buffer.pop_front().expect("full ring is non-empty");
            slot.clear();
            slot.extend_from_slice(x);
            self.buffer.push_back(slot);
        } else {
            self.buffer.push_back(x.to_vec());
        }
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &[T]> {
        self.buffer.iter().map(Vec::as_slice)
    }
}

/// Arithmetic mean of the last `min(k, len)` samples held by `window`.
pub fn true_window_average<T: Scalar>(window: &RingWindow<T>, k: u64) -> Result<Vec<T>> {
    let Some(first) = window.buffer.front() else {
        return Err(Error::Empty);
    };
    if k == 0 || k as usize > window.capacity {
        return Err(Error::InvalidParameter(format!(
            "window {k} outside ring capacity {}",
            window.capacity
        )));
    }
    let n = (k as usize).min(window.len());
    let mut sum = vec![T::zero(); first.len()];
    for x in window.iter().rev().take(n) {
        for (s, &v) in sum.iter_mut().zip(x) {
            *s = *s + v;
        }
    }
    let inv = T::of_count(n as u64).recip();
    Ok(sum.into_iter().map(|s| s * inv).collect())
}

/// Exact tail average over `k_t` samples, storing up to the largest window the
/// schedule reaches within `horizon` steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrueAverager<T> {
    window: RingWindow<T>,
    schedule: WindowSchedule,
    dim: usize,
    t: u64,
}

impl<T: Scalar> TrueAverager<T> {
    pub fn new(dim: usize, schedule: WindowSchedule, horizon: u64) -> Result<Self> {
        crate::averagers::check_dim(dim)?;
        schedule.validate()?;
        let capacity = schedule.max_window(horizon.max(1));
        Ok(TrueAverager {
            window: RingWindow::new(capacity as usize)?,
            schedule,
            dim,
            t: 0,
        })
    }

    pub fn window(&self) -> &RingWindow<T> {
        &self.window
    }

    pub fn schedule(&self) -> WindowSchedule {
        self.schedule
    }
}

impl<T: Scalar> Averager<T> for TrueAverager<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn steps(&self) -> u64 {
        self.t
    }

    fn observe(&mut self, x: &[T]) -> Result<()> {
        crate::averagers::check_sample(self.dim, x)?;
        self.window.push(x);
        self.t += 1;
        Ok(())
    }

    fn estimate(&self) -> Result<Vec<T>> {
        true_window_average(&self.window, target_window(self.schedule, self.t))
    }

    fn effective_sample_size(&self) -> Result<T> {
        if self.t == 0 {
            return Err(Error::Empty);
        }
        Ok(T::of_count(target_window(self.schedule, self.t)))
    }

    fn target_window(&self) -> Option<u64> {
        (self.t > 0).then(|| target_window(self.schedule, self.t))
    }

    fn variance_contract_active(&self) -> bool {
        self.t > 0
    }

    fn stored_scalars(&self) -> usize {
        self.window.len() * self.dim
    }
}

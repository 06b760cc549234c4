use crate::averagers::{AnyAverager, Averager, AveragerKind};
use crate::error::{Error, Result};

/// Longest stream [`trace_weights`] will materialize (quadratic memory).
pub const MAX_TRACE_STEPS: usize = 10_000;

/// Weight of every sample `1..=t` in an averager's estimate at step `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTrace {
    pub t: u64,
    pub weights: Vec<f64>,
    /// `k_t` the averager targets at this step, if it has one.
    pub window: Option<u64>,
    /// Whether the averager guarantees `sum(w^2) = 1 / k_t` at this step.
    pub contract_active: bool,
}

impl WeightTrace {
    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn sum_sq(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum()
    }

    /// `sum_i w_i x_i` over a recorded scalar stream.
    pub fn apply(&self, stream: &[Vec<f64>]) -> Vec<f64> {
        let dim = stream.first().map_or(0, Vec::len);
        let mut out = vec![0.0; dim];
        for (w, x) in self.weights.iter().zip(stream) {
            for (o, v) in out.iter_mut().zip(x) {
                *o += w * v;
            }
        }
        out
    }

    /// Age (in steps) of the oldest sample carrying nonzero weight.
    pub fn oldest_age(&self) -> Option<u64> {
        let i = self.weights.iter().position(|&w| w != 0.0)?;
        Some(self.t - i as u64)
    }
}

/// Replays an averager step by step and rebuilds the weights its estimate
/// puts on each past sample from the averager's own decay and blend choices.
///
/// Exponential weights follow `w_i <- gamma_t w_i`, `w_t = 1 - gamma_t`.
/// Window averages spread each accumulator's blend weight uniformly over the
/// contiguous block of samples it holds.
#[derive(Debug, Clone)]
pub struct WeightTracer {
    averager: AnyAverager<f64>,
    weights: Vec<f64>,
}

impl WeightTracer {
    pub fn new(kind: &AveragerKind, dim: usize) -> Result<Self> {
        Ok(WeightTracer {
            averager: kind.build(dim)?,
            weights: Vec::new(),
        })
    }

    pub fn averager(&self) -> &AnyAverager<f64> {
        &self.averager
    }

    pub fn observe(&mut self, x: &[f64]) -> Result<WeightTrace> {
        self.averager.observe(x)?;
        let t = self.averager.steps() as usize;
        match &self.averager {
            AnyAverager::ExpFixed(a) => self.decay(a.last_gamma()),
            AnyAverager::ExpGrowing(a) => self.decay(a.last_gamma()),
            AnyAverager::Awa(a) => {
                let blend = a.blend()?;
                self.weights.clear();
                self.weights.resize(t, 0.0);
                let mut end = t;
                for (acc, w) in a.accumulators().iter().zip(&blend.weights).rev() {
                    let n = acc.count() as usize;
                    let start = end - n;
                    if n > 0 {
                        self.weights[start..end].fill(w / n as f64);
                    }
                    end = start;
                }
            }
            AnyAverager::True(a) => {
                let k = a.target_window().unwrap_or(1) as usize;
                self.weights.clear();
                self.weights.resize(t, 0.0);
                self.weights[t - k..].fill(1.0 / k as f64);
            }
            AnyAverager::Raw(a) => {
                self.weights.clear();
                self.weights.resize(t, 0.0);
                match a.averaged() as usize {
                    0 => self.weights[t - 1] = 1.0,
                    n => self.weights[t - n..].fill(1.0 / n as f64),
                }
            }
        }
        Ok(WeightTrace {
            t: t as u64,
            weights: self.weights.clone(),
            window: self.averager.target_window(),
            contract_active: self.averager.variance_contract_active(),
        })
    }

    fn decay(&mut self, gamma: f64) {
        self.weights.iter_mut().for_each(|w| *w *= gamma);
        self.weights.push(1.0 - gamma);
    }
}

/// Weight traces for the first `steps` steps of `kind`. Weights do not depend
/// on the sample values, so a scalar zero stream is replayed.
pub fn trace_weights(kind: &AveragerKind, steps: usize) -> Result<Vec<WeightTrace>> {
    if steps > MAX_TRACE_STEPS {
        return Err(Error::InvalidParameter(format!(
            "trace length {steps} exceeds {MAX_TRACE_STEPS}"
        )));
    }
    let mut tracer = WeightTracer::new(kind, 1)?;
    (0..steps).map(|_| tracer.observe(&[0.0])).collect()
}

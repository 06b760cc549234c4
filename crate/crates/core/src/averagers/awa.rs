use serde::{Deserialize, Serialize};

use super::{check_dim, check_sample, Averager};
use crate::accumulator::Accumulator;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::schedule::{target_window, WindowSchedule};

/// Discriminant of the two-block variance equation,
/// `1/(a k) + 1/(b k) - 1/(a b)`, written as `(a + b - k) / (a b k)`.
fn discriminant<T: Scalar>(a: u64, b: u64, k: u64) -> Result<T> {
    if a == 0 || b == 0 || k == 0 {
        return Err(Error::InvalidParameter(format!(
            "block counts and window must be positive (got {a}, {b}, {k})"
        )));
    }
    if a + b < k {
        return Err(Error::Unattainable {
            n_old: a,
            n_recent: b,
            window: k,
        });
    }
    let num = T::of_count(a + b - k);
    Ok(num / (T::of_count(a) * T::of_count(b) * T::of_count(k)))
}

/// Largest weight `gamma` on a recent block of `n1` samples, blended with an
/// older block of `n0` samples, such that
/// `gamma^2 / n1 + (1 - gamma)^2 / n0 = 1 / k`.
pub fn awa_gamma_two<T: Scalar>(n1: u64, n0: u64, k: u64) -> Result<T> {
    let d = discriminant::<T>(n0, n1, k)?;
    let (n0f, n1f) = (T::of_count(n0), T::of_count(n1));
    let g = (n1f + n0f * n1f * d.sqrt()) / (n1f + n0f);
    Ok(g.max(T::zero()).min(T::one()))
}

/// Smallest weight `gamma0` on the oldest block (`n0` samples) such that
/// blending it with the pooled recent blocks (`n_rest` samples) gives
/// `(1 - gamma0)^2 / n_rest + gamma0^2 / n0 = 1 / k`.
pub fn awa_gamma_oldest<T: Scalar>(n0: u64, n_rest: u64, k: u64) -> Result<T> {
    let d = discriminant::<T>(n0, n_rest, k)?;
    let (n0f, nrf) = (T::of_count(n0), T::of_count(n_rest));
    let g = n0f * (T::one() - nrf * d.sqrt()) / (n0f + nrf);
    Ok(g.max(T::zero()).min(T::one()))
}

/// How the per-accumulator weights of an estimate were chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlendKind {
    /// The oldest accumulator is still empty; plain mean of everything seen.
    Warmup,
    /// Squared weights sum to exactly `1 / k_t`.
    Matched,
    /// The recent blocks alone already exceed the window; oldest weight is 0.
    Clamped,
    /// Not enough samples for `1 / k_t`; count-proportional pooling.
    Fallback,
}

/// Per-accumulator weights of an estimate (index 0 oldest).
#[derive(Debug, Clone, PartialEq)]
pub struct Blend<T> {
    pub weights: Vec<T>,
    pub kind: BlendKind,
    pub window: u64,
}

/// Anytime window average over `z + 1` accumulators.
///
/// Samples enter the newest accumulator. When it fills (constant window) or
/// when the recent accumulators together cover the window (proportional
/// window), every accumulator shifts one slot toward index 0 and the newest
/// one is reset. Estimates blend the oldest accumulator with the pooled
/// recent ones so that the variance equals that of a `k_t`-sample mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Awa<T> {
    accumulators: Vec<Accumulator<T>>,
    schedule: WindowSchedule,
    z: usize,
    t: u64,
    #[serde(default)]
    flushed: bool,
}

impl<T: Scalar> Awa<T> {
    pub fn new(dim: usize, schedule: WindowSchedule, z: usize) -> Result<Self> {
        check_dim(dim)?;
        schedule.validate()?;
        if z == 0 {
            return Err(Error::InvalidParameter(
                "at least one recent accumulator (z >= 1) is required".into(),
            ));
        }
        Ok(Awa {
            accumulators: (0..=z).map(|_| Accumulator::new(dim)).collect(),
            schedule,
            z,
            t: 0,
            flushed: false,
        })
    }

    pub fn two_accumulators(dim: usize, schedule: WindowSchedule) -> Result<Self> {
        Self::new(dim, schedule, 1)
    }

    pub fn accumulators(&self) -> &[Accumulator<T>] {
        &self.accumulators
    }

    pub fn schedule(&self) -> WindowSchedule {
        self.schedule
    }

    pub fn z(&self) -> usize {
        self.z
    }

    /// Whether the latest observation triggered a shift.
    pub fn flushed(&self) -> bool {
        self.flushed
    }

    /// Samples per block in constant-window mode: `ceil(k / z)`.
    pub fn block_size(&self) -> Option<u64> {
        match self.schedule {
            WindowSchedule::Constant(k) => Some(k.div_ceil(self.z as u64)),
            WindowSchedule::Proportional(_) => None,
        }
    }

    fn recent_count(&self) -> u64 {
        self.accumulators[1..].iter().map(Accumulator::count).sum()
    }

    fn should_flush(&self) -> bool {
        match self.block_size() {
            Some(block) => self.accumulators[self.z].count() >= block,
            None => self.recent_count() >= target_window(self.schedule, self.t),
        }
    }

    fn flush(&mut self) {
        self.accumulators.rotate_left(1);
        self.accumulators[self.z].reset();
    }

    /// Weights the current estimate assigns to each accumulator.
    pub fn blend(&self) -> Result<Blend<T>> {
        if self.t == 0 {
            return Err(Error::Empty);
        }
        let window = target_window(self.schedule, self.t);
        let n0 = self.accumulators[0].count();
        let n_rest = self.recent_count();
        let pooled = |from: usize, kind| {
            let total = T::of_count(
                self.accumulators[from..]
                    .iter()
                    .map(Accumulator::count)
                    .sum(),
            );
            let weights = self
                .accumulators
                .iter()
                .enumerate()
                .map(|(j, a)| {
                    if j < from {
                        T::zero()
                    } else {
                        T::of_count(a.count()) / total
                    }
                })
                .collect();
            Blend {
                weights,
                kind,
                window,
            }
        };

        if n0 == 0 {
            return Ok(pooled(1, BlendKind::Warmup));
        }
        if n0 + n_rest < window {
            return Ok(pooled(0, BlendKind::Fallback));
        }
        if n_rest == 0 {
            let kind = if n0 == window {
                BlendKind::Matched
            } else {
                BlendKind::Clamped
            };
            let mut weights = vec![T::zero(); self.z + 1];
            weights[0] = T::one();
            return Ok(Blend {
                weights,
                kind,
                window,
            });
        }
        if n_rest > window {
            return Ok(pooled(1, BlendKind::Clamped));
        }

        let g0 = awa_gamma_oldest::<T>(n0, n_rest, window)?;
        let rest = (T::one() - g0) / T::of_count(n_rest);
        let weights = self
            .accumulators
            .iter()
            .enumerate()
            .map(|(j, a)| {
                if j == 0 {
                    g0
                } else {
                    rest * T::of_count(a.count())
                }
            })
            .collect();
        Ok(Blend {
            weights,
            kind: BlendKind::Matched,
            window,
        })
    }
}

impl<T: Scalar> Averager<T> for Awa<T> {
    fn dim(&self) -> usize {
        self.accumulators[0].dim()
    }

    fn steps(&self) -> u64 {
        self.t
    }

    fn observe(&mut self, x: &[T]) -> Result<()> {
        check_sample(self.dim(), x)?;
        self.t += 1;
        self.accumulators[self.z].push(x);
        self.flushed = self.should_flush();
        if self.flushed {
            self.flush();
        }
        Ok(())
    }

    fn estimate(&self) -> Result<Vec<T>> {
        let blend = self.blend()?;
        // Anchor on the newest non-empty block and add weighted deviations;
        // the weights sum to one, and agreeing means then blend exactly.
        let anchor = self
            .accumulators
            .iter()
            .rev()
            .find(|a| !a.is_empty())
            .ok_or(Error::Empty)?
            .mean();
        let mut out = anchor.to_vec();
        for (w, acc) in blend.weights.iter().zip(&self.accumulators) {
            if *w == T::zero() {
                continue;
            }
            for ((o, &m), &a) in out.iter_mut().zip(acc.mean()).zip(anchor) {
                *o = *o + *w * (m - a);
            }
        }
        Ok(out)
    }

    fn effective_sample_size(&self) -> Result<T> {
        let blend = self.blend()?;
        let sq: T = blend
            .weights
            .iter()
            .zip(&self.accumulators)
            .filter(|(_, a)| !a.is_empty())
            .map(|(&w, a)| w * w / T::of_count(a.count()))
            .fold(T::zero(), |s, v| s + v);
        Ok(sq.recip())
    }

    fn target_window(&self) -> Option<u64> {
        (self.t > 0).then(|| target_window(self.schedule, self.t))
    }

    fn coefficients(&self) -> Vec<(String, T)> {
        let weights = self
            .blend()
            .map(|b| b.weights)
            .unwrap_or_else(|_| vec![T::zero(); self.z + 1]);
        weights
            .into_iter()
            .enumerate()
            .map(|(j, w)| (format!("gamma{j}"), w))
            .collect()
    }

    fn variance_contract_active(&self) -> bool {
        matches!(self.blend(), Ok(b) if b.kind == BlendKind::Matched)
    }

    fn stored_scalars(&self) -> usize {
        self.accumulators.iter().map(Accumulator::dim).sum()
    }
}

use serde::{Deserialize, Serialize};

use super::{Averager, Awa, ExpFixed, ExpGrowing};
use crate::error::{Error, Result};
use crate::reference::{RawTailAverage, TrueAverager};
use crate::scalar::Scalar;
use crate::schedule::WindowSchedule;

/// Configuration of one averager, independent of the stream dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AveragerKind {
    ExpFixed {
        k: u64,
    },
    ExpGrowing {
        c: f64,
    },
    Awa {
        schedule: WindowSchedule,
        z: usize,
    },
    True {
        schedule: WindowSchedule,
        horizon: u64,
    },
    Raw {
        c: f64,
        horizon: u64,
    },
}

impl AveragerKind {
    pub const IDS: [&'static str; 8] =
        ["true", "raw", "exp", "expk", "awa", "awa3", "awak", "truek"];

    /// Resolves a roster name against a schedule.
    ///
    /// `exp` is the fixed exponential average under a constant window and the
    /// growing one under a proportional window; `awa` uses `z` recent
    /// accumulators and `awa3` always uses three accumulators in total.
    /// The `*k` names require a constant window and `raw` a proportional one.
    pub fn from_id(id: &str, schedule: WindowSchedule, horizon: u64, z: usize) -> Result<Self> {
        schedule.validate()?;
        let constant_only = |id: &str| match schedule {
            WindowSchedule::Constant(k) => Ok(k),
            WindowSchedule::Proportional(_) => Err(Error::InvalidParameter(format!(
                "`{id}` needs a constant window (--k)"
            ))),
        };
        let kind = match id {
            "true" => AveragerKind::True { schedule, horizon },
            "truek" => {
                constant_only(id)?;
                AveragerKind::True { schedule, horizon }
            }
            "awa" => AveragerKind::Awa { schedule, z },
            "awak" => {
                constant_only(id)?;
                AveragerKind::Awa { schedule, z: 1 }
            }
            "awa3" => AveragerKind::Awa { schedule, z: 2 },
            "exp" => match schedule {
                WindowSchedule::Constant(k) => AveragerKind::ExpFixed { k },
                WindowSchedule::Proportional(c) => AveragerKind::ExpGrowing { c },
            },
            "expk" => AveragerKind::ExpFixed {
                k: constant_only(id)?,
            },
            "raw" => match schedule {
                WindowSchedule::Proportional(c) => AveragerKind::Raw { c, horizon },
                WindowSchedule::Constant(_) => {
                    return Err(Error::InvalidParameter(
                        "`raw` needs a proportional window (--c)".into(),
                    ))
                }
            },
            other => return Err(Error::UnknownAverager(other.to_string())),
        };
        Ok(kind)
    }

    pub fn build<T: Scalar>(&self, dim: usize) -> Result<AnyAverager<T>> {
        Ok(match *self {
            AveragerKind::ExpFixed { k } => AnyAverager::ExpFixed(ExpFixed::new(dim, k)?),
            AveragerKind::ExpGrowing { c } => AnyAverager::ExpGrowing(ExpGrowing::new(dim, c)?),
            AveragerKind::Awa { schedule, z } => AnyAverager::Awa(Awa::new(dim, schedule, z)?),
            AveragerKind::True { schedule, horizon } => {
                AnyAverager::True(TrueAverager::new(dim, schedule, horizon)?)
            }
            AveragerKind::Raw { c, horizon } => {
                AnyAverager::Raw(RawTailAverage::new(dim, horizon, c)?)
            }
        })
    }
}

/// Any averager, dispatched by value. Serializes to a snapshot record from
/// which the stream can be resumed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "state", rename_all = "snake_case")]
pub enum AnyAverager<T> {
    ExpFixed(ExpFixed<T>),
    ExpGrowing(ExpGrowing<T>),
    Awa(Awa<T>),
    True(TrueAverager<T>),
    Raw(RawTailAverage<T>),
}

macro_rules! dispatch {
    ($self:expr, $inner:ident => $body:expr) => {
        match $self {
            AnyAverager::ExpFixed($inner) => $body,
            AnyAverager::ExpGrowing($inner) => $body,
            AnyAverager::Awa($inner) => $body,
            AnyAverager::True($inner) => $body,
            AnyAverager::Raw($inner) => $body,
        }
    };
}

impl<T: Scalar> Averager<T> for AnyAverager<T> {
    fn dim(&self) -> usize {
        dispatch!(self, a => a.dim())
    }

    fn steps(&self) -> u64 {
        dispatch!(self, a => a.steps())
    }

    fn observe(&mut self, x: &[T]) -> Result<()> {
        dispatch!(self, a => a.observe(x))
    }

    fn estimate(&self) -> Result<Vec<T>> {
        dispatch!(self, a => a.estimate())
    }

    fn effective_sample_size(&self) -> Result<T> {
        dispatch!(self, a => a.effective_sample_size())
    }

    fn target_window(&self) -> Option<u64> {
        dispatch!(self, a => a.target_window())
    }

    fn coefficients(&self) -> Vec<(String, T)> {
        dispatch!(self, a => a.coefficients())
    }

    fn variance_contract_active(&self) -> bool {
        dispatch!(self, a => a.variance_contract_active())
    }

    fn stored_scalars(&self) -> usize {
        dispatch!(self, a => a.stored_scalars())
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Law giving the number of most recent samples `k_t` an average should cover.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WindowSchedule {
    /// Fixed window of `k` samples.
    Constant(u64),
    /// Window growing as `ceil(c * t)`, `0 < c < 1`.
    Proportional(f64),
}

impl WindowSchedule {
    pub fn constant(k: u64) -> Result<Self> {
        let s = WindowSchedule::Constant(k);
        s.validate()?;
        Ok(s)
    }

    pub fn proportional(c: f64) -> Result<Self> {
        let s = WindowSchedule::Proportional(c);
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            WindowSchedule::Constant(0) => Err(Error::InvalidParameter(
                "window size k must be at least 1".into(),
            )),
            WindowSchedule::Proportional(c) if !(c > 0.0 && c < 1.0) => Err(
                Error::InvalidParameter(format!("window fraction c={c} must lie in (0, 1)")),
            ),
            _ => Ok(()),
        }
    }

    /// `k_t` for step `t >= 1`, clamped to `[1, t]`.
    pub fn target_window(&self, t: u64) -> u64 {
        target_window(*self, t)
    }

    /// Largest window the schedule asks for over a horizon of `horizon` steps.
    pub fn max_window(&self, horizon: u64) -> u64 {
        match *self {
            WindowSchedule::Constant(k) => k,
            WindowSchedule::Proportional(c) => ceil_tolerant(c * horizon as f64).max(1),
        }
    }
}

/// `k` for constant schedules, `ceil(c * t)` for proportional ones; never
/// larger than the number of samples seen and never below one.
pub fn target_window(schedule: WindowSchedule, t: u64) -> u64 {
    let t = t.max(1);
    let raw = match schedule {
        WindowSchedule::Constant(k) => k,
        WindowSchedule::Proportional(c) => ceil_tolerant(c * t as f64),
    };
    raw.clamp(1, t)
}

/// Ceiling that treats values within a few ulps of an integer as that integer,
/// so that e.g. `0.55 * 100.0 = 55.00000000000001` yields 55.
pub(crate) fn ceil_tolerant(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
        r.max(0.0) as u64
    } else {
        x.ceil().max(0.0) as u64
    }
}

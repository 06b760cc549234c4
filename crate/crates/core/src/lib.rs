//! Anytime tail averaging.
//!
//! Constant-memory estimators of the mean of the last `k_t` samples of a
//! vector stream, available at every step and matching the variance of the
//! exact tail mean:
//!
//! * [`ExpFixed`]: exponential average with `gamma = (k-1)/(k+1)`;
//! * [`ExpGrowing`]: exponential average with a per-step decay that keeps the
//!   effective sample size at `ceil(c t)`;
//! * [`Awa`]: anytime window average over `z + 1` block accumulators, for a
//!   constant or proportional window.
//!
//! The [`reference`] module holds exact (non-constant-memory) oracles and
//! [`experiment`] the stochastic linear regression benchmark.
//!
//! ```
//! use ata_core::{Averager, Awa64, WindowSchedule};
//!
//! let mut awa = Awa64::two_accumulators(1, WindowSchedule::Constant(2)).unwrap();
//! for x in [1.0, 2.0, 3.0] {
//!     awa.observe(&[x]).unwrap();
//! }
//! assert!((awa.estimate().unwrap()[0] - 2.5).abs() < 1e-12);
//! ```

pub mod accumulator;
pub mod averagers;
pub mod error;
pub mod experiment;
pub mod reference;
pub mod scalar;
pub mod schedule;

pub use accumulator::Accumulator;
pub use averagers::{
    AnyAverager, Averager, AveragerKind, Awa, Blend, BlendKind, ExpFixed, ExpGrowing,
};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use schedule::{target_window, WindowSchedule};

pub type Awa64 = Awa<f64>;
pub type Awa32 = Awa<f32>;
pub type ExpFixed64 = ExpFixed<f64>;
pub type ExpFixed32 = ExpFixed<f32>;
pub type ExpGrowing64 = ExpGrowing<f64>;
pub type ExpGrowing32 = ExpGrowing<f32>;
pub type AnyAverager64 = AnyAverager<f64>;

//! Exact oracles: the ring-buffer tail average, the fixed-horizon `raw` tail
//! average, and a tracer that materializes the per-sample weights behind any
//! averager's estimate.
//!
//! The ring buffer's memory grows with the window and the tracer's with the
//! stream length; neither is meant for production streams.

mod raw;
mod ring;
mod trace;

pub use raw::{raw_start, RawTailAverage};
pub use ring::{true_window_average, RingWindow, TrueAverager};
pub use trace::{trace_weights, WeightTrace, WeightTracer, MAX_TRACE_STEPS};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::problem::{excess_error, sample_batch, sgd_step, RegressionProblem};
use crate::averagers::{AnyAverager, Averager, AveragerKind};
use crate::error::{Error, Result};
use crate::schedule::WindowSchedule;

/// RNG stream tag for the data generator of a run.
const DATA_STREAM: u64 = 0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub problem: RegressionProblem,
    /// Number of SGD batches `T`; averagers see one iterate per batch.
    pub horizon: usize,
    pub runs: usize,
    pub stepsize: f64,
    pub schedule: WindowSchedule,
    /// Averager names, see [`AveragerKind::from_id`].
    pub roster: Vec<String>,
    /// Recent accumulators used by `awa`.
    pub z: usize,
    pub base_seed: u64,
    /// Starting iterate; zero when `None`.
    pub initial_w: Option<Vec<f64>>,
    /// Keep every run's curves in the result.
    pub keep_runs: bool,
}

impl ExperimentConfig {
    /// Defaults with the standard roster for `schedule`.
    pub fn new(schedule: WindowSchedule) -> Self {
        ExperimentConfig {
            problem: RegressionProblem::default(),
            horizon: 1000,
            runs: 100,
            stepsize: 0.05,
            schedule,
            roster: Self::default_roster(schedule)
                .iter()
                .map(|s| s.to_string())
                .collect(),
            z: 1,
            base_seed: 1,
            initial_w: None,
            keep_runs: false,
        }
    }

    pub fn default_roster(schedule: WindowSchedule) -> &'static [&'static str] {
        match schedule {
            WindowSchedule::Constant(_) => &["expk", "awak", "truek"],
            WindowSchedule::Proportional(_) => &["raw", "exp", "awa", "awa3", "true"],
        }
    }

    /// Checks the configuration and resolves the roster.
    pub fn resolve(&self) -> Result<Vec<AveragerKind>> {
        self.problem.validate()?;
        self.schedule.validate()?;
        if !(self.stepsize > 0.0 && self.stepsize.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "stepsize {} must be positive",
                self.stepsize
            )));
        }
        if self.horizon == 0 || self.runs == 0 {
            return Err(Error::InvalidParameter(
                "horizon and run count must be at least 1".into(),
            ));
        }
        if let Some(w0) = &self.initial_w {
            if w0.len() != self.problem.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.problem.dim(),
                    got: w0.len(),
                });
            }
        }
        self.roster
            .iter()
            .map(|id| AveragerKind::from_id(id, self.schedule, self.horizon as u64, self.z))
            .collect()
    }
}

/// Curves of one run, in roster order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub curves: Vec<Vec<f64>>,
    /// Excess error of the bare SGD iterate.
    pub iterate_curve: Vec<f64>,
    /// Hash of the iterate sequence each averager consumed.
    pub checksums: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySet {
    pub names: Vec<String>,
    pub kinds: Vec<AveragerKind>,
    /// Mean excess error per averager and step (index `t - 1`).
    pub mean: Vec<Vec<f64>>,
    pub iterate_mean: Vec<f64>,
    /// Per-run curves when `keep_runs` was set.
    pub runs: Vec<RunRecord>,
}

impl TrajectorySet {
    pub fn curve(&self, name: &str) -> Option<&[f64]> {
        let i = self.names.iter().position(|n| n == name)?;
        Some(&self.mean[i])
    }

    pub fn final_value(&self, name: &str) -> Option<f64> {
        self.curve(name).and_then(|c| c.last().copied())
    }
}

/// FNV-1a over the bit patterns of a stream of vectors.
#[derive(Debug, Clone, Copy)]
struct StreamHash(u64);

impl StreamHash {
    fn new() -> Self {
        StreamHash(0xcbf2_9ce4_8422_2325)
    }

    fn feed(&mut self, x: &[f64]) {
        for v in x {
            for b in v.to_bits().to_le_bytes() {
                self.0 ^= b as u64;
                self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
    }
}

fn run_once(config: &ExperimentConfig, kinds: &[AveragerKind], run: usize) -> Result<RunRecord> {
    let problem = &config.problem;
    let dim = problem.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(config.base_seed);
    rng.set_stream(((run as u64) << 8) | DATA_STREAM);

    let mut averagers: Vec<AnyAverager<f64>> =
        kinds.iter().map(|k| k.build(dim)).collect::<Result<_>>()?;
    let mut hashes = vec![StreamHash::new(); kinds.len()];
    let mut curves = vec![Vec::with_capacity(config.horizon); kinds.len()];
    let mut iterate_curve = Vec::with_capacity(config.horizon);

    let mut w = config.initial_w.clone().unwrap_or_else(|| vec![0.0; dim]);
    for _ in 0..config.horizon {
        let batch = sample_batch(&mut rng, problem);
        w = sgd_step(&w, &batch, config.stepsize);
        iterate_curve.push(excess_error(&w, problem));
        for ((avg, hash), curve) in averagers.iter_mut().zip(&mut hashes).zip(&mut curves) {
            avg.observe(&w)?;
            hash.feed(&w);
            curve.push(excess_error(&avg.estimate()?, problem));
        }
    }
    Ok(RunRecord {
        curves,
        iterate_curve,
        checksums: hashes.into_iter().map(|h| h.0).collect(),
    })
}

/// Runs every configured run (in parallel) and averages the curves.
///
/// All averagers of a run consume the same iterate sequence. Results are
/// bit-identical for a given configuration regardless of thread count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<TrajectorySet> {
    let kinds = config.resolve()?;
    let records: Vec<RunRecord> = (0..config.runs)
        .into_par_iter()
        .map(|run| run_once(config, &kinds, run))
        .collect::<Result<_>>()?;

    let scale = 1.0 / config.runs as f64;
    let mut mean = vec![vec![0.0; config.horizon]; kinds.len()];
    let mut iterate_mean = vec![0.0; config.horizon];
    for record in &records {
        for (m, c) in mean.iter_mut().zip(&record.curves) {
            m.iter_mut().zip(c).for_each(|(a, b)| *a += b);
        }
        iterate_mean
            .iter_mut()
            .zip(&record.iterate_curve)
            .for_each(|(a, b)| *a += b);
    }
    mean.iter_mut()
        .flatten()
        .chain(iterate_mean.iter_mut())
        .for_each(|v| *v *= scale);

    Ok(TrajectorySet {
        names: config.roster.clone(),
        kinds,
        mean,
        iterate_mean,
        runs: if config.keep_runs {
            records
        } else {
            Vec::new()
        },
    })
}

use ata_core::averagers::{awa_gamma_oldest, awa_gamma_two, Averager, AveragerKind, Awa};
use ata_core::experiment::{run_experiment, ExperimentConfig, RegressionProblem};
use ata_core::reference::{trace_weights, WeightTracer};
use ata_core::{AnyAverager, Awa32, Awa64, ExpGrowing32, ExpGrowing64, WindowSchedule};
use proptest::prelude::*;

fn schedule_strategy() -> impl Strategy<Value = WindowSchedule> {
    prop_oneof![
        (1u64..40).prop_map(WindowSchedule::Constant),
        (0.05f64..0.95).prop_map(WindowSchedule::Proportional),
    ]
}

fn kind_strategy() -> impl Strategy<Value = AveragerKind> {
    prop_oneof![
        (1u64..50).prop_map(|k| AveragerKind::ExpFixed { k }),
        (0.05f64..0.95).prop_map(|c| AveragerKind::ExpGrowing { c }),
        (schedule_strategy(), 1usize..5)
            .prop_map(|(schedule, z)| AveragerKind::Awa { schedule, z }),
        schedule_strategy().prop_map(|schedule| AveragerKind::True {
            schedule,
            horizon: 300
        }),
        (0.05f64..0.95).prop_map(|c| AveragerKind::Raw { c, horizon: 300 }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constant_stream_gives_constant_estimate(
        kind in kind_strategy(),
        v in prop::collection::vec(-1e3f64..1e3, 1..4),
        steps in 1usize..300,
    ) {
        let mut avg = kind.build::<f64>(v.len()).unwrap();
        for _ in 0..steps {
            avg.observe(&v).unwrap();
            let est = avg.estimate().unwrap();
            for (e, x) in est.iter().zip(&v) {
                prop_assert!((e - x).abs() <= 1e-12 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn traced_weights_reproduce_estimate(
        kind in kind_strategy(),
        stream in prop::collection::vec(-10.0f64..10.0, 1..300),
    ) {
        let samples: Vec<Vec<f64>> = stream.iter().map(|&x| vec![x]).collect();
        let mut tracer = WeightTracer::new(&kind, 1).unwrap();
        for (i, x) in samples.iter().enumerate() {
            let trace = tracer.observe(x).unwrap();
            prop_assert!((trace.sum() - 1.0).abs() <= 1e-12);
            let rebuilt = trace.apply(&samples[..=i])[0];
            let est = tracer.averager().estimate().unwrap()[0];
            prop_assert!((rebuilt - est).abs() <= 1e-10, "t={} {} vs {}", i + 1, rebuilt, est);
        }
    }

    #[test]
    fn two_block_reductions(n1 in 1u64..500, extra in 0u64..500, n_other in 1u64..500) {
        let k = n1 + extra;
        if k >= 1 && n1 <= k {
            let g: f64 = awa_gamma_two(n1, k, k).unwrap();
            prop_assert!((g - 2.0 * n1 as f64 / (n1 + k) as f64).abs() <= 1e-12);
        }
        // Larger and smaller roots of the same quadratic sum to one.
        let window = (n1 + n_other).min(k.max(1));
        let oldest: f64 = awa_gamma_oldest(n_other, n1, window).unwrap();
        let recent: f64 = awa_gamma_two(n1, n_other, window).unwrap();
        if oldest > 0.0 && recent < 1.0 {
            prop_assert!((oldest + recent - 1.0).abs() <= 1e-12);
        }
        for g in [oldest, recent] {
            prop_assert!((0.0..=1.0).contains(&g));
        }
    }

    #[test]
    fn snapshot_round_trip(kind in kind_strategy(), split in 1usize..100) {
        let stream: Vec<Vec<f64>> = (0..150).map(|i| vec![(i as f64 * 0.37).sin(), i as f64]).collect();
        let mut a = kind.build::<f64>(2).unwrap();
        for x in &stream[..split] {
            a.observe(x).unwrap();
        }
        let json = serde_json::to_string(&a).unwrap();
        let mut b: AnyAverager<f64> = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&a, &b);
        for x in &stream[split..] {
            a.observe(x).unwrap();
            b.observe(x).unwrap();
        }
        prop_assert_eq!(a.estimate().unwrap(), b.estimate().unwrap());
    }
}

#[test]
fn awa_block_invariants() {
    for (k, z) in [(10u64, 1usize), (10, 2), (12, 3), (10, 3), (7, 4)] {
        let block = k.div_ceil(z as u64);
        let mut awa = Awa64::new(1, WindowSchedule::Constant(k), z).unwrap();
        for _ in 0..1000 {
            awa.observe(&[0.0]).unwrap();
            assert_eq!(awa.accumulators().len(), z + 1);
            assert!(awa.accumulators()[z].count() < block);
            let total: u64 = awa.accumulators().iter().map(|a| a.count()).sum();
            assert!(total <= awa.steps());
        }
    }
    for c in [0.25, 0.5, 0.8] {
        for z in 1..4 {
            let schedule = WindowSchedule::Proportional(c);
            let mut awa = Awa64::new(1, schedule, z).unwrap();
            for t in 1..=2000u64 {
                awa.observe(&[0.0]).unwrap();
                let recent: u64 = awa.accumulators()[1..].iter().map(|a| a.count()).sum();
                // A shift only drops the oldest recent block, so for z > 1 the
                // bound holds on the steps without a flush.
                if z == 1 || !awa.flushed() {
                    assert!(recent < schedule.target_window(t), "c={c} z={z} t={t}");
                }
            }
        }
    }
}

#[test]
fn awa_staleness_bound() {
    for (k, z) in [(10u64, 1usize), (10, 2), (20, 4), (9, 2)] {
        let kind = AveragerKind::Awa {
            schedule: WindowSchedule::Constant(k),
            z,
        };
        let bound = k + k.div_ceil(z as u64);
        for trace in trace_weights(&kind, 600).unwrap() {
            let age = trace.oldest_age().unwrap();
            assert!(age < bound, "k={k} z={z} t={}: age {age}", trace.t);
        }
    }
}

#[test]
fn growing_exponential_weights_decay_geometrically() {
    let kind = AveragerKind::ExpGrowing { c: 0.5 };
    let mut tracer = WeightTracer::new(&kind, 1).unwrap();
    let mut prev = tracer.observe(&[0.0]).unwrap();
    for _ in 0..300 {
        let cur = tracer.observe(&[0.0]).unwrap();
        let gamma = match tracer.averager() {
            AnyAverager::ExpGrowing(a) => a.last_gamma(),
            _ => unreachable!(),
        };
        for (a, b) in cur.weights.iter().zip(&prev.weights) {
            assert_eq!(*a, gamma * b);
        }
        prev = cur;
    }
}

#[test]
fn effective_sample_size_after_one_sample() {
    let kinds = [
        AveragerKind::ExpFixed { k: 10 },
        AveragerKind::ExpGrowing { c: 0.3 },
        AveragerKind::Awa {
            schedule: WindowSchedule::Constant(5),
            z: 2,
        },
        AveragerKind::True {
            schedule: WindowSchedule::Constant(5),
            horizon: 10,
        },
    ];
    for kind in &kinds {
        let mut avg = kind.build::<f64>(1).unwrap();
        assert!(avg.effective_sample_size().is_err());
        avg.observe(&[1.0]).unwrap();
        assert!(
            (avg.effective_sample_size().unwrap() - 1.0).abs() < 1e-15,
            "{kind:?}"
        );
    }
    let mut awa = Awa64::two_accumulators(1, WindowSchedule::Constant(6)).unwrap();
    for _ in 0..60 {
        awa.observe(&[1.0]).unwrap();
        if awa.flushed() {
            assert!((awa.effective_sample_size().unwrap() - 6.0).abs() < 1e-12);
        }
    }
}

#[test]
fn single_precision_streams() {
    let mut awa32 = Awa32::new(2, WindowSchedule::Proportional(0.5), 2).unwrap();
    let mut awa64 = Awa64::new(2, WindowSchedule::Proportional(0.5), 2).unwrap();
    let mut exp32 = ExpGrowing32::new(2, 0.25).unwrap();
    let mut exp64 = ExpGrowing64::new(2, 0.25).unwrap();
    for i in 0..500 {
        let x = [(i as f64 * 0.1).cos(), i as f64 / 100.0];
        let x32 = [x[0] as f32, x[1] as f32];
        awa32.observe(&x32).unwrap();
        awa64.observe(&x).unwrap();
        exp32.observe(&x32).unwrap();
        exp64.observe(&x).unwrap();
        for (a, b) in awa32
            .estimate()
            .unwrap()
            .iter()
            .zip(awa64.estimate().unwrap())
        {
            assert!((*a as f64 - b).abs() < 1e-4);
        }
        for (a, b) in exp32
            .estimate()
            .unwrap()
            .iter()
            .zip(exp64.estimate().unwrap())
        {
            assert!((*a as f64 - b).abs() < 1e-4);
        }
    }
}

#[test]
fn harness_window_average_meets_exact_mean_at_block_ends() {
    let k = 10;
    let config = ExperimentConfig {
        problem: RegressionProblem::harmonic(20, 0.1, 11),
        horizon: 300,
        runs: 5,
        keep_runs: true,
        roster: vec!["truek".into(), "awak".into()],
        ..ExperimentConfig::new(WindowSchedule::Constant(k))
    };
    let set = run_experiment(&config).unwrap();
    for run in &set.runs {
        assert_eq!(run.checksums[0], run.checksums[1]);
        for t in (k as usize..=300).step_by(k as usize) {
            let (a, b) = (run.curves[0][t - 1], run.curves[1][t - 1]);
            assert!((a - b).abs() <= 1e-12 * a.max(1.0), "t={t}: {a} vs {b}");
        }
    }
}

#[test]
fn averaging_beats_iterate_in_the_noise_ball() {
    for schedule in [
        WindowSchedule::Constant(10),
        WindowSchedule::Constant(100),
        WindowSchedule::Proportional(0.25),
        WindowSchedule::Proportional(0.5),
    ] {
        let config = ExperimentConfig {
            stepsize: 0.25,
            ..ExperimentConfig::new(schedule)
        };
        let set = run_experiment(&config).unwrap();
        let iterate = *set.iterate_mean.last().unwrap();
        for name in &set.names {
            let v = set.final_value(name).unwrap();
            assert!(v < iterate, "{schedule:?} {name}: {v} vs iterate {iterate}");
        }
        assert!(set.mean.iter().flatten().all(|&v| v >= 0.0));
    }
}

#[test]
fn awa_variance_contract_in_proportional_mode() {
    for z in 1..=3 {
        let mut awa = Awa::<f64>::new(1, WindowSchedule::Proportional(0.5), z).unwrap();
        for _ in 0..3000 {
            awa.observe(&[0.0]).unwrap();
            if !awa.accumulators()[0].is_empty() {
                let k = awa.target_window().unwrap() as f64;
                let n = awa.effective_sample_size().unwrap();
                assert!((n - k).abs() <= 1e-9 * k, "z={z} t={}", awa.steps());
            }
        }
    }
}

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use ata_core::averagers::{Averager, AveragerKind};
use ata_core::experiment::{run_experiment, ExperimentConfig, TrajectorySet};
use ata_core::reference::{WeightTracer, MAX_TRACE_STEPS};
use ata_core::WindowSchedule;

use crate::input::read_vectors;
use crate::{AverageArgs, ExperimentArgs, TraceArgs};

fn open_output(path: Option<&Path>) -> Result<csv::Writer<Box<dyn Write>>> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    Ok(csv::Writer::from_writer(sink))
}

fn num(v: f64) -> String {
    format!("{v}")
}

pub fn average(args: &AverageArgs) -> Result<()> {
    let schedule = args.window.required()?;
    let rows = read_vectors(&args.input)?;
    let horizon = args.steps.unwrap_or(rows.len() as u64).max(1);
    let kind = AveragerKind::from_id(&args.averager, schedule, horizon, args.z)?;

    // Coefficient labels do not depend on the data; read them off a probe.
    let mut probe = kind.build::<f64>(1)?;
    probe.observe(&[0.0])?;
    let coef_names: Vec<String> = probe.coefficients().into_iter().map(|(n, _)| n).collect();

    let dim = rows.first().map(|(_, v)| v.len());
    let mut out = open_output(args.out.as_deref())?;
    let mut header = vec!["t".to_string(), "k_t".to_string()];
    header.extend(coef_names.iter().cloned());
    header.extend((0..dim.unwrap_or(0)).map(|j| format!("x{j}")));
    header.push("n_eff".to_string());
    out.write_record(&header)?;

    if let Some(dim) = dim {
        let mut avg = kind
            .build::<f64>(dim)
            .with_context(|| format!("line {}", rows[0].0))?;
        for (lineno, x) in &rows {
            avg.observe(x).with_context(|| format!("line {lineno}"))?;
            let mut record = vec![
                avg.steps().to_string(),
                avg.target_window()
                    .map(|k| k.to_string())
                    .unwrap_or_default(),
            ];
            record.extend(avg.coefficients().into_iter().map(|(_, g)| num(g)));
            record.extend(avg.estimate()?.into_iter().map(num));
            record.push(num(avg.effective_sample_size()?));
            out.write_record(&record)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn file_stem(schedule: WindowSchedule) -> String {
    match schedule {
        WindowSchedule::Constant(k) => format!("constant_k{k}"),
        WindowSchedule::Proportional(c) => format!("proportional_c{c}"),
    }
}

pub fn experiment(args: &ExperimentArgs) -> Result<()> {
    let schedules = match args.window.schedule()? {
        Some(s) => vec![s],
        None => vec![
            WindowSchedule::Constant(10),
            WindowSchedule::Constant(100),
            WindowSchedule::Proportional(0.25),
            WindowSchedule::Proportional(0.5),
        ],
    };
    let configs = schedules
        .into_iter()
        .map(|schedule| {
            let base = ExperimentConfig::new(schedule);
            let config = ExperimentConfig {
                horizon: args.steps,
                runs: args.runs,
                stepsize: args.stepsize,
                roster: args.averagers.clone().unwrap_or(base.roster.clone()),
                z: args.z,
                base_seed: args.seed,
                keep_runs: args.per_run,
                ..base
            };
            config.resolve()?;
            Ok(config)
        })
        .collect::<Result<Vec<_>>>()?;

    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating output directory {}", args.out.display()))?;
    for config in &configs {
        let stem = file_stem(config.schedule);
        let set = run_experiment(config)?;
        let path = args.out.join(format!("{stem}.csv"));
        write_trajectories(&path, &set)?;
        if args.per_run {
            write_runs(&args.out.join(format!("{stem}_runs.csv")), &set)?;
        }
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn write_trajectories(path: &Path, set: &TrajectorySet) -> Result<()> {
    let mut out = open_output(Some(path))?;
    let mut header = vec!["step".to_string()];
    header.extend(set.names.iter().cloned());
    out.write_record(&header)?;
    for t in 0..set.iterate_mean.len() {
        let mut record = vec![(t + 1).to_string()];
        record.extend(set.mean.iter().map(|curve| num(curve[t])));
        out.write_record(&record)?;
    }
    out.flush()?;
    Ok(())
}

fn write_runs(path: &Path, set: &TrajectorySet) -> Result<()> {
    let mut out = open_output(Some(path))?;
    let mut header = vec!["run".to_string(), "step".to_string()];
    header.extend(set.names.iter().cloned());
    header.push("iterate".to_string());
    out.write_record(&header)?;
    for (r, run) in set.runs.iter().enumerate() {
        for t in 0..run.iterate_curve.len() {
            let mut record = vec![r.to_string(), (t + 1).to_string()];
            record.extend(run.curves.iter().map(|curve| num(curve[t])));
            record.push(num(run.iterate_curve[t]));
            out.write_record(&record)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn trace(args: &TraceArgs) -> Result<()> {
    let schedule = args.window.required()?;
    if args.steps > MAX_TRACE_STEPS {
        bail!(
            "--steps {} exceeds the trace limit of {MAX_TRACE_STEPS}",
            args.steps
        );
    }
    let kind = AveragerKind::from_id(&args.averager, schedule, args.steps as u64, args.z)?;
    let mut tracer = WeightTracer::new(&kind, 1)?;
    let mut out = open_output(args.out.as_deref())?;
    out.write_record([
        "t",
        "i",
        "weight",
        "sum_alpha",
        "sum_alpha_sq",
        "inv_k_t",
        "contract_active",
    ])?;
    for _ in 0..args.steps {
        let trace = tracer.observe(&[0.0])?;
        let sum = num(trace.sum());
        let sum_sq = num(trace.sum_sq());
        let inv_k = trace
            .window
            .map(|k| num(1.0 / k as f64))
            .unwrap_or_default();
        let active = if trace.contract_active { "1" } else { "0" };
        let t = trace.t.to_string();
        for (i, w) in trace.weights.iter().enumerate() {
            out.write_record([
                t.as_str(),
                &(i + 1).to_string(),
                &num(*w),
                &sum,
                &sum_sq,
                &inv_k,
                active,
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

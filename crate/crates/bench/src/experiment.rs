use crate::config::{ExperimentConfig, ResolvedInstance};
use crate::report::{Report, RunResult};
use crate::{Error, Result};
use ils_core::engine::{RunOptions, TraceMode};
use ils_core::problem::{run_ils_with, Setup};
use ils_core::{Cost, TraceEntry};
use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

struct Job<'a> {
    instance: &'a ResolvedInstance,
    combination: String,
    strength: Option<String>,
    setup: Setup,
    seed: u64,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Report> {
    run_experiment_with(config, |_| {})
}

/// Runs every (instance × combination × strength × seed) cell and
/// aggregates. Instances are loaded and every setup is checked before the
/// first run starts. `on_run` sees each result as it completes.
pub fn run_experiment_with(
    config: &ExperimentConfig,
    on_run: impl Fn(&RunResult) + Sync,
) -> Result<Report> {
    config.validate()?;
    let termination = config.termination.resolve()?;
    let instances = config
        .instances
        .iter()
        .map(|e| e.resolve(config.layout))
        .collect::<Result<Vec<_>>>()?;

    let mut names = HashSet::new();
    for inst in &instances {
        if !names.insert(inst.name.as_str()) {
            return Err(Error::Config(format!("instance name `{}` appears twice", inst.name)));
        }
    }

    let mut jobs = Vec::new();
    for inst in &instances {
        let mut labels = HashSet::new();
        for combo in &config.combinations {
            let label = combo.label_for(&inst.problem);
            if !labels.insert(label.clone()) {
                return Err(Error::Config(format!(
                    "combination label `{label}` is used twice; set distinct labels"
                )));
            }
            for (strength, setup) in combo.expand(&inst.problem)? {
                setup.check(&inst.problem).map_err(|e| {
                    Error::Config(format!("{label} on {}: {e}", inst.name))
                })?;
                for &seed in &config.seeds {
                    jobs.push(Job {
                        instance: inst,
                        combination: label.clone(),
                        strength: strength.clone(),
                        setup: setup.clone(),
                        seed,
                    });
                }
            }
        }
    }

    let run = |job: &Job| -> Result<RunResult> {
        let summary = run_ils_with(
            &job.instance.problem,
            &job.setup,
            termination,
            job.seed,
            RunOptions {
                trace: TraceMode::Changes,
            },
            |_| {},
        )?;
        Ok(RunResult {
            instance: job.instance.name.clone(),
            combination: job.combination.clone(),
            strength: job.strength.clone(),
            seed: job.seed,
            best_cost: summary.best_cost,
            best_known: job.instance.best_known,
            iterations: summary.iterations,
            local_searches: summary.n_local_searches,
            elapsed: summary.elapsed,
            trajectory: config
                .trajectory_every
                .map(|every| trajectory_capture(&summary.trace, every))
                .unwrap_or_default(),
        })
    };

    let threads = config.threads.unwrap_or(1).min(jobs.len().max(1));
    let results: Vec<RunResult> = if threads <= 1 {
        jobs.iter()
            .map(|j| {
                let r = run(j)?;
                on_run(&r);
                Ok(r)
            })
            .collect::<Result<_>>()?
    } else {
        let next = AtomicUsize::new(0);
        let slots: Mutex<Vec<Option<Result<RunResult>>>> =
            Mutex::new((0..jobs.len()).map(|_| None).collect());
        std::thread::scope(|scope| {
            for _ in 0..threads {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(job) = jobs.get(i) else { break };
                    let r = run(job);
                    if let Ok(ok) = &r {
                        on_run(ok);
                    }
                    slots.lock().expect("no panics while holding the lock")[i] = Some(r);
                });
            }
        });
        slots
            .into_inner()
            .expect("workers joined")
            .into_iter()
            .map(|s| s.expect("every job ran"))
            .collect::<Result<_>>()?
    };
    Report::aggregate(results)
}

/// Best cost every `sample_every` iterations from 0, plus the final
/// iteration. Works on full and change-only traces alike, since the best
/// cost between entries is that of the latest earlier entry.
pub fn trajectory_capture(trace: &[TraceEntry], sample_every: u64) -> Vec<(u64, Cost)> {
    let Some(last) = trace.last() else {
        return Vec::new();
    };
    let every = sample_every.max(1);
    let mut out = Vec::new();
    let mut k = 0;
    let mut at = trace[0].iteration.div_ceil(every) * every;
    while at <= last.iteration {
        while k + 1 < trace.len() && trace[k + 1].iteration <= at {
            k += 1;
        }
        out.push((at, trace[k].best));
        at += every;
    }
    if out.last().is_none_or(|&(i, _)| i != last.iteration) {
        out.push((last.iteration, last.best));
    }
    out
}

//! Problem-agnostic iterated local search.
//!
//! A run starts from `initial`, descends with `local_search`, and then loops:
//! perturb the current local optimum, descend again, and let the acceptance
//! criterion pick the next walk state. The best local optimum ever visited is
//! kept regardless of what the criterion decides.

mod acceptance;
mod escape;

pub use acceptance::{AcceptanceCriterion, Acceptor, RestartSource, Verdict};
pub use escape::{escape_beyond_distance, EscapeOutcome, EscapeParams};

use crate::rng::{self, Rng, Stream};
use crate::{Cost, Error, Result};
use std::time::{Duration, Instant};

/// A walk state: a permutation together with its cached objective value.
pub trait Solution: Clone {
    fn cost(&self) -> Cost;
    fn permutation(&self) -> &[usize];
}

/// Produces a fresh starting solution.
pub trait Construct<S> {
    fn construct(&mut self, rng: &mut Rng) -> S;
}

impl<S, F: FnMut(&mut Rng) -> S> Construct<S> for F {
    fn construct(&mut self, rng: &mut Rng) -> S {
        self(rng)
    }
}

/// Improves a solution in place until it is a local optimum.
pub trait LocalSearch<S> {
    fn search(&mut self, solution: &mut S);
}

impl<S, F: FnMut(&mut S)> LocalSearch<S> for F {
    fn search(&mut self, solution: &mut S) {
        self(solution)
    }
}

/// Derives a new starting point from the current walk state.
pub trait Perturbation<S> {
    fn perturb(&mut self, current: &S, history: &SearchHistory<S>, rng: &mut Rng) -> S;
}

impl<S, F: FnMut(&S, &SearchHistory<S>, &mut Rng) -> S> Perturbation<S> for F {
    fn perturb(&mut self, current: &S, history: &SearchHistory<S>, rng: &mut Rng) -> S {
        self(current, history, rng)
    }
}

pub type DistanceFn<'a, S> = Box<dyn Fn(&S, &S) -> usize + 'a>;

/// The four pluggable parts of an ILS plus the extras some acceptance
/// criteria need.
pub struct Components<'a, S> {
    /// Permutation length of the problem being solved.
    pub size: usize,
    pub initial: Box<dyn Construct<S> + 'a>,
    pub local_search: Box<dyn LocalSearch<S> + 'a>,
    pub perturbation: Box<dyn Perturbation<S> + 'a>,
    pub acceptance: AcceptanceCriterion,
    /// Source of fresh solutions for `Restart`.
    pub restart: Option<Box<dyn Construct<S> + 'a>>,
    /// Solution distance for `DistanceEscape`.
    pub distance: Option<DistanceFn<'a, S>>,
}

impl<S> Components<'_, S> {
    pub fn validate(&self) -> Result<()> {
        if self.size < 2 {
            return Err(Error::Config(format!(
                "problem size must be at least 2, got {}",
                self.size
            )));
        }
        self.acceptance.validate()?;
        match &self.acceptance {
            AcceptanceCriterion::Restart { .. } if self.restart.is_none() => Err(Error::Config(
                "Restart acceptance needs a restart source".into(),
            )),
            AcceptanceCriterion::DistanceEscape(params) => {
                if self.distance.is_none() {
                    return Err(Error::Config(
                        "DistanceEscape acceptance needs a distance function".into(),
                    ));
                }
                if params.min_distance >= self.size {
                    return Err(Error::Config(format!(
                        "min distance {} must be below the problem size {}",
                        params.min_distance, self.size
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// When to stop a run. At least one bound must be set.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Termination {
    pub max_wall_time: Option<Duration>,
    pub max_iterations: Option<u64>,
    pub target_cost: Option<Cost>,
}

impl Termination {
    pub fn iterations(n: u64) -> Self {
        Termination {
            max_iterations: Some(n),
            ..Default::default()
        }
    }

    pub fn wall_time(limit: Duration) -> Self {
        Termination {
            max_wall_time: Some(limit),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_wall_time.is_none() && self.max_iterations.is_none() && self.target_cost.is_none()
        {
            return Err(Error::Config("termination needs at least one bound".into()));
        }
        Ok(())
    }

    fn reached(&self, iteration: u64, best: Cost, elapsed: Duration) -> bool {
        self.max_iterations.is_some_and(|m| iteration >= m)
            || self.target_cost.is_some_and(|t| best <= t)
            || self.max_wall_time.is_some_and(|m| elapsed >= m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TraceEntry {
    pub iteration: u64,
    /// Cost of the walk state after the acceptance decision.
    pub current: Cost,
    pub best: Cost,
    /// Seconds since the start of the run.
    pub elapsed: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TraceMode {
    /// One entry per iteration.
    #[default]
    Every,
    /// Only iterations where the current or best cost changed, plus the last.
    Changes,
}

/// What the acceptance criterion and perturbation may consult.
#[derive(Debug, Clone)]
pub struct SearchHistory<S> {
    pub iteration: u64,
    /// Last iteration at which the walk's current cost strictly improved
    /// (or a restart happened).
    pub last_improvement: u64,
    pub best: S,
    pub trace: Vec<TraceEntry>,
}

impl<S: Solution> SearchHistory<S> {
    pub fn new(start: S) -> Self {
        SearchHistory {
            iteration: 0,
            last_improvement: 0,
            best: start,
            trace: Vec::new(),
        }
    }

    /// Records `s` as the new best if it is strictly better.
    pub fn offer(&mut self, s: &S) -> bool {
        if s.cost() < self.best.cost() {
            self.best = s.clone();
            true
        } else {
            false
        }
    }

    pub fn since_improvement(&self) -> u64 {
        self.iteration - self.last_improvement
    }
}

/// Outcome of one ILS run.
#[derive(Debug, Clone)]
pub struct RunRecord<S> {
    pub seed: u64,
    pub best: S,
    pub iterations: u64,
    pub n_local_searches: u64,
    pub n_accepted: u64,
    pub n_restarts: u64,
    pub n_escape_failures: u64,
    /// Seconds of wall time, measured on a monotonic clock.
    pub elapsed: f64,
    pub trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub trace: TraceMode,
}

pub fn run<S: Solution>(
    components: Components<'_, S>,
    termination: Termination,
    seed: u64,
) -> Result<RunRecord<S>> {
    run_with(components, termination, seed, RunOptions::default(), |_| {})
}

/// Runs the ILS loop. `observer` sees every iteration's trace entry, also
/// when the stored trace is thinned by [`TraceMode::Changes`].
pub fn run_with<S: Solution>(
    mut components: Components<'_, S>,
    termination: Termination,
    seed: u64,
    options: RunOptions,
    mut observer: impl FnMut(&TraceEntry),
) -> Result<RunRecord<S>> {
    termination.validate()?;
    components.validate()?;

    let mut init_rng = rng::stream(seed, Stream::Initial);
    let mut perturb_rng = rng::stream(seed, Stream::Perturbation);
    let mut accept_rng = rng::stream(seed, Stream::Acceptance);
    let mut restart_rng = rng::stream(seed, Stream::Restart);
    let mut escape_rng = rng::stream(seed, Stream::Escape);

    let start = Instant::now();
    let mut acceptor = Acceptor::new(components.acceptance.clone());

    let mut current = components.initial.construct(&mut init_rng);
    components.local_search.search(&mut current);
    let mut n_local_searches = 1u64;
    let mut n_accepted = 0u64;
    let mut n_restarts = 0u64;
    let mut n_escape_failures = 0u64;

    let mut history = SearchHistory::new(current.clone());
    let first = TraceEntry {
        iteration: 0,
        current: current.cost(),
        best: current.cost(),
        elapsed: start.elapsed().as_secs_f64(),
    };
    observer(&first);
    history.trace.push(first);

    while !termination.reached(history.iteration, history.best.cost(), start.elapsed()) {
        history.iteration += 1;

        let mut candidate = components
            .perturbation
            .perturb(&current, &history, &mut perturb_rng);
        components.local_search.search(&mut candidate);
        n_local_searches += 1;
        let mut best_changed = history.offer(&candidate);

        let before = current.cost();
        match acceptor.decide(current.cost(), candidate.cost(), &history, &mut accept_rng) {
            Verdict::Current => {}
            Verdict::Candidate => {
                if candidate.cost() < current.cost() {
                    history.last_improvement = history.iteration;
                }
                current = candidate;
                n_accepted += 1;
            }
            Verdict::Restart => {
                let restart = components
                    .restart
                    .as_mut()
                    .expect("validated: restart source present");
                let mut fresh = restart.construct(&mut restart_rng);
                components.local_search.search(&mut fresh);
                n_local_searches += 1;
                best_changed |= history.offer(&fresh);
                current = fresh;
                history.last_improvement = history.iteration;
                n_restarts += 1;
            }
            Verdict::Escape(params) => {
                let distance = components
                    .distance
                    .as_ref()
                    .expect("validated: distance present");
                let from = history.best.clone();
                let outcome = escape_beyond_distance(
                    &from,
                    &params,
                    components.perturbation.as_mut(),
                    components.local_search.as_mut(),
                    distance.as_ref(),
                    &history,
                    &mut escape_rng,
                );
                n_local_searches += outcome.local_searches;
                best_changed |= history.offer(&outcome.best_seen);
                if outcome.failed {
                    n_escape_failures += 1;
                }
                current = outcome.solution;
                history.last_improvement = history.iteration;
                n_restarts += 1;
            }
        }

        let entry = TraceEntry {
            iteration: history.iteration,
            current: current.cost(),
            best: history.best.cost(),
            elapsed: start.elapsed().as_secs_f64(),
        };
        observer(&entry);
        if options.trace == TraceMode::Every || best_changed || current.cost() != before {
            history.trace.push(entry);
        }
    }

    if let Some(last) = history.trace.last() {
        if last.iteration != history.iteration {
            history.trace.push(TraceEntry {
                iteration: history.iteration,
                current: current.cost(),
                best: history.best.cost(),
                elapsed: start.elapsed().as_secs_f64(),
            });
        }
    }

    Ok(RunRecord {
        seed,
        best: history.best,
        iterations: history.iteration,
        n_local_searches,
        n_accepted,
        n_restarts,
        n_escape_failures,
        elapsed: start.elapsed().as_secs_f64(),
        trace: history.trace,
    })
}

#[cfg(test)]
mod tests;

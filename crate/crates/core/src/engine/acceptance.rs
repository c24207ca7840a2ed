use super::{EscapeParams, SearchHistory, Solution};
use crate::rng::Rng;
use crate::{Cost, Error, Result};
use rand::Rng as _;

/// Where `Restart` takes its fresh solutions from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RestartSource {
    #[default]
    Random,
    Greedy,
}

/// Rule choosing the next walk state among the current local optimum and
/// the candidate produced by perturbation plus local search.
#[derive(Debug, Clone, PartialEq)]
pub enum AcceptanceCriterion {
    /// Strict improvement only.
    Better,
    /// Always move to the candidate.
    RandomWalk,
    /// Metropolis rule at temperature `temperature`; after every acceptance
    /// test the temperature is multiplied by `cooling` (1.0 keeps it fixed).
    Lsmc { temperature: f64, cooling: f64 },
    /// Metropolis rule at a fixed temperature.
    ConstTemp { temperature: f64 },
    /// Better, but restart from a fresh solution after `patience`
    /// iterations without improvement.
    Restart { patience: u64, source: RestartSource },
    /// Better, but after `patience` iterations without improvement jump to a
    /// good solution at least `min_distance` away from the best one.
    DistanceEscape(EscapeParams),
}

impl AcceptanceCriterion {
    pub fn name(&self) -> &'static str {
        match self {
            AcceptanceCriterion::Better => "Better",
            AcceptanceCriterion::RandomWalk => "RW",
            AcceptanceCriterion::Lsmc { .. } => "LSMC",
            AcceptanceCriterion::ConstTemp { .. } => "ConstTemp",
            AcceptanceCriterion::Restart { .. } => "Restart",
            AcceptanceCriterion::DistanceEscape(_) => "DistanceEscape",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AcceptanceCriterion::Lsmc { temperature, cooling } => {
                if !(*temperature > 0.0) {
                    return Err(Error::Config(format!("temperature must be positive, got {temperature}")));
                }
                if !(*cooling > 0.0 && *cooling <= 1.0) {
                    return Err(Error::Config(format!("cooling factor must lie in (0, 1], got {cooling}")));
                }
                Ok(())
            }
            AcceptanceCriterion::ConstTemp { temperature } if !(*temperature > 0.0) => Err(
                Error::Config(format!("temperature must be positive, got {temperature}")),
            ),
            AcceptanceCriterion::Restart { patience: 0, .. } => {
                Err(Error::Config("restart patience must be at least 1".into()))
            }
            AcceptanceCriterion::DistanceEscape(p) => p.validate(),
            _ => Ok(()),
        }
    }
}

/// Decision taken by [`Acceptor::decide`].
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Current,
    Candidate,
    /// Replace the walk state with a fresh solution from the restart source.
    Restart,
    /// Replace the walk state with the result of the distance escape.
    Escape(EscapeParams),
}

/// Stateful wrapper around a criterion (LSMC cools as it goes).
#[derive(Debug, Clone)]
pub struct Acceptor {
    criterion: AcceptanceCriterion,
    temperature: f64,
}

impl Acceptor {
    pub fn new(criterion: AcceptanceCriterion) -> Self {
        let temperature = match &criterion {
            AcceptanceCriterion::Lsmc { temperature, .. }
            | AcceptanceCriterion::ConstTemp { temperature } => *temperature,
            _ => f64::NAN,
        };
        Acceptor {
            criterion,
            temperature,
        }
    }

    pub fn criterion(&self) -> &AcceptanceCriterion {
        &self.criterion
    }

    /// Current temperature of a Metropolis-type criterion.
    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn decide<S>(
        &mut self,
        current: Cost,
        candidate: Cost,
        history: &SearchHistory<S>,
        rng: &mut Rng,
    ) -> Verdict {
        let improves = candidate < current;
        match &self.criterion {
            AcceptanceCriterion::Better => {
                if improves {
                    Verdict::Candidate
                } else {
                    Verdict::Current
                }
            }
            AcceptanceCriterion::RandomWalk => Verdict::Candidate,
            AcceptanceCriterion::Lsmc { cooling, .. } => {
                let cooling = *cooling;
                let verdict = self.metropolis(current, candidate, rng);
                self.temperature *= cooling;
                verdict
            }
            AcceptanceCriterion::ConstTemp { .. } => self.metropolis(current, candidate, rng),
            AcceptanceCriterion::Restart { patience, .. } => {
                if improves {
                    Verdict::Candidate
                } else if history.iteration - history.last_improvement > *patience {
                    Verdict::Restart
                } else {
                    Verdict::Current
                }
            }
            AcceptanceCriterion::DistanceEscape(params) => {
                if improves {
                    Verdict::Candidate
                } else if history.iteration - history.last_improvement > params.patience {
                    Verdict::Escape(params.clone())
                } else {
                    Verdict::Current
                }
            }
        }
    }

    /// Probability of moving from `current` to a candidate of cost
    /// `candidate` under the Metropolis rule at the present temperature.
    pub fn metropolis_probability(&self, current: Cost, candidate: Cost) -> f64 {
        if candidate < current {
            1.0
        } else {
            ((current - candidate) as f64 / self.temperature).exp()
        }
    }

    fn metropolis(&self, current: Cost, candidate: Cost, rng: &mut Rng) -> Verdict {
        if candidate < current {
            return Verdict::Candidate;
        }
        let p = self.metropolis_probability(current, candidate);
        if rng.random::<f64>() < p {
            Verdict::Candidate
        } else {
            Verdict::Current
        }
    }

    /// Returns the next walk state. `fresh` is only called for restart and
    /// escape verdicts.
    pub fn accept<S: Solution>(
        &mut self,
        current: S,
        candidate: S,
        history: &SearchHistory<S>,
        rng: &mut Rng,
        fresh: impl FnOnce(&mut Rng) -> S,
    ) -> S {
        match self.decide(current.cost(), candidate.cost(), history, rng) {
            Verdict::Current => current,
            Verdict::Candidate => candidate,
            Verdict::Restart | Verdict::Escape(_) => fresh(rng),
        }
    }
}

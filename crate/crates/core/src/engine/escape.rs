use super::{LocalSearch, Perturbation, SearchHistory, Solution};
use crate::rng::Rng;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EscapeParams {
    /// Iterations without improvement before an escape is attempted.
    pub patience: u64,
    /// Copies perturbed and locally optimised per attempt (`p`).
    pub copies: usize,
    /// Best copies kept as candidates (`q`, with `1 < q <= p`).
    pub keep: usize,
    /// Required distance from the escaped-from solution (strictly exceeded).
    pub min_distance: usize,
    pub max_attempts: usize,
}

impl EscapeParams {
    pub fn validate(&self) -> Result<()> {
        if self.patience == 0 {
            return Err(Error::Config("escape patience must be at least 1".into()));
        }
        if !(1 < self.keep && self.keep <= self.copies) {
            return Err(Error::Config(format!(
                "escape needs 1 < keep <= copies, got keep={} copies={}",
                self.keep, self.copies
            )));
        }
        if self.max_attempts == 0 {
            return Err(Error::Config("escape needs at least one attempt".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct EscapeOutcome<S> {
    pub solution: S,
    pub distance: usize,
    /// Lowest-cost local optimum produced during the escape.
    pub best_seen: S,
    pub attempts: usize,
    pub local_searches: u64,
    /// Set when every attempt stayed within `min_distance`.
    pub failed: bool,
}

/// Searches for a good local optimum farther than `min_distance` from `from`.
///
/// Each attempt perturbs and locally optimises `copies` copies of `from`,
/// keeps the `keep` cheapest, and picks the one farthest from `from`. The
/// first pick beyond `min_distance` is returned. When all attempts fail the
/// farthest candidate seen is returned with `failed` set.
pub fn escape_beyond_distance<S: Solution>(
    from: &S,
    params: &EscapeParams,
    perturbation: &mut dyn Perturbation<S>,
    local_search: &mut dyn LocalSearch<S>,
    distance: &dyn Fn(&S, &S) -> usize,
    history: &SearchHistory<S>,
    rng: &mut Rng,
) -> EscapeOutcome<S> {
    let mut fallback: Option<(usize, S)> = None;
    let mut best_seen: Option<S> = None;
    let mut local_searches = 0;

    for attempt in 1..=params.max_attempts {
        let mut batch: Vec<S> = (0..params.copies)
            .map(|_| {
                let mut s = perturbation.perturb(from, history, rng);
                local_search.search(&mut s);
                s
            })
            .collect();
        local_searches += params.copies as u64;

        // stable: equal costs keep generation order
        batch.sort_by_key(|s| s.cost());
        batch.truncate(params.keep);
        if best_seen.as_ref().is_none_or(|b| batch[0].cost() < b.cost()) {
            best_seen = Some(batch[0].clone());
        }

        let (d, pick) = batch
            .into_iter()
            .map(|s| (distance(&s, from), s))
            .fold(None::<(usize, S)>, |acc, (d, s)| match acc {
                Some((bd, b)) if bd >= d => Some((bd, b)),
                _ => Some((d, s)),
            })
            .expect("keep >= 2");

        if d > params.min_distance {
            return EscapeOutcome {
                solution: pick,
                distance: d,
                best_seen: best_seen.expect("at least one batch"),
                attempts: attempt,
                local_searches,
                failed: false,
            };
        }
        if fallback.as_ref().is_none_or(|(fd, _)| d > *fd) {
            fallback = Some((d, pick));
        }
    }

    let (distance, solution) = fallback.expect("max_attempts >= 1");
    EscapeOutcome {
        solution,
        distance,
        best_seen: best_seen.expect("at least one batch"),
        attempts: params.max_attempts,
        local_searches,
        failed: true,
    }
}

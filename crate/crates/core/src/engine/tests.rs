use super::*;
use crate::perm;
use rand::Rng as _;

/// Linear assignment toy: cost of placing item i at slot p[i] is w[i][p[i]].
/// Pairwise-swap descent on it has many local optima.
#[derive(Clone, Debug, PartialEq)]
struct Toy {
    p: Vec<usize>,
    cost: Cost,
}

impl Solution for Toy {
    fn cost(&self) -> Cost {
        self.cost
    }
    fn permutation(&self) -> &[usize] {
        &self.p
    }
}

fn weights(n: usize, seed: u64) -> Vec<Vec<Cost>> {
    let mut rng = rng::seeded(seed);
    (0..n)
        .map(|_| (0..n).map(|_| rng.random_range(0..100)).collect())
        .collect()
}

fn eval(w: &[Vec<Cost>], p: &[usize]) -> Cost {
    p.iter().enumerate().map(|(i, &s)| w[i][s]).sum()
}

fn toy_components<'a>(w: &'a [Vec<Cost>], acceptance: AcceptanceCriterion) -> Components<'a, Toy> {
    let n = w.len();
    Components {
        size: n,
        initial: Box::new(move |rng: &mut Rng| {
            let p = perm::random(n, rng);
            Toy { cost: eval(w, &p), p }
        }),
        local_search: Box::new(move |s: &mut Toy| loop {
            let mut improved = false;
            for i in 0..n {
                for j in i + 1..n {
                    let delta = w[i][s.p[j]] + w[j][s.p[i]] - w[i][s.p[i]] - w[j][s.p[j]];
                    if delta < 0 {
                        s.p.swap(i, j);
                        s.cost += delta;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }),
        perturbation: Box::new(move |s: &Toy, _: &SearchHistory<Toy>, rng: &mut Rng| {
            let mut p = s.p.clone();
            for _ in 0..3 {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                p.swap(i, j);
            }
            Toy { cost: eval(w, &p), p }
        }),
        acceptance,
        restart: Some(Box::new(move |rng: &mut Rng| {
            let p = perm::random(n, rng);
            Toy { cost: eval(w, &p), p }
        })),
        distance: Some(Box::new(|a: &Toy, b: &Toy| perm::hamming(&a.p, &b.p))),
    }
}

fn history_at(iteration: u64, last_improvement: u64) -> SearchHistory<Toy> {
    let mut h = SearchHistory::new(Toy { p: vec![0, 1], cost: 0 });
    h.iteration = iteration;
    h.last_improvement = last_improvement;
    h
}

#[test]
fn better_takes_strict_improvements_only() {
    let h = history_at(1, 0);
    let mut rng = rng::seeded(1);
    let mut a = Acceptor::new(AcceptanceCriterion::Better);
    assert_eq!(a.decide(100, 90, &h, &mut rng), Verdict::Candidate);
    assert_eq!(a.decide(100, 100, &h, &mut rng), Verdict::Current);
    assert_eq!(a.decide(100, 101, &h, &mut rng), Verdict::Current);
}

#[test]
fn const_temp_matches_closed_form_probability() {
    let h = history_at(1, 0);
    let mut rng = rng::seeded(2);
    let mut a = Acceptor::new(AcceptanceCriterion::ConstTemp { temperature: 2.0 });
    let expected = (-1.0f64).exp();
    assert!((a.metropolis_probability(10, 12) - 0.3679).abs() < 1e-4);
    let trials = 100_000;
    let accepted = (0..trials)
        .filter(|_| a.decide(10, 12, &h, &mut rng) == Verdict::Candidate)
        .count();
    let rate = accepted as f64 / trials as f64;
    assert!((rate - expected).abs() <= 0.01, "rate {rate}");
}

#[test]
fn restart_fires_after_patience_and_resets_bookkeeping() {
    let mut a = Acceptor::new(AcceptanceCriterion::Restart {
        patience: 5,
        source: RestartSource::Random,
    });
    let mut rng = rng::seeded(3);
    assert_eq!(a.decide(10, 11, &history_at(6, 0), &mut rng), Verdict::Restart);
    assert_eq!(a.decide(10, 11, &history_at(5, 0), &mut rng), Verdict::Current);
    assert_eq!(a.decide(10, 9, &history_at(6, 0), &mut rng), Verdict::Candidate);

    // In a run, restarts set i_last to the restart iteration, so with patience
    // p two restarts are at least p + 1 iterations apart.
    let w = weights(12, 9);
    let mut restarts = Vec::new();
    let mut prev_best = Cost::MAX;
    let record = run_with(
        toy_components(&w, AcceptanceCriterion::Restart { patience: 5, source: RestartSource::Random }),
        Termination::iterations(400),
        11,
        RunOptions::default(),
        |e| {
            assert!(e.best <= prev_best);
            prev_best = e.best;
        },
    )
    .unwrap();
    assert!(record.n_restarts > 0);
    for pair in record.trace.windows(2) {
        if pair[1].current > pair[0].current {
            restarts.push(pair[1].iteration);
        }
    }
    for w in restarts.windows(2) {
        assert!(w[1] - w[0] >= 6, "{restarts:?}");
    }
}

/// Direct transcription of the three acceptance rules, evaluated independently of
/// the `Acceptor` code path. `u` is the uniform draw used by Metropolis.
fn transcribed(criterion: &AcceptanceCriterion, cur: Cost, cand: Cost, i: u64, i_last: u64, u: f64) -> Verdict {
    match criterion {
        AcceptanceCriterion::Better => {
            if cand < cur { Verdict::Candidate } else { Verdict::Current }
        }
        AcceptanceCriterion::RandomWalk => Verdict::Candidate,
        AcceptanceCriterion::ConstTemp { temperature } => {
            if cand < cur || u < f64::exp((cur - cand) as f64 / temperature) {
                Verdict::Candidate
            } else {
                Verdict::Current
            }
        }
        AcceptanceCriterion::Restart { patience, .. } => {
            if cand < cur {
                Verdict::Candidate
            } else if cand >= cur && i - i_last > *patience {
                Verdict::Restart
            } else {
                Verdict::Current
            }
        }
        _ => unreachable!(),
    }
}

#[test]
fn acceptance_matches_transcription_on_random_triples() {
    let mut gen = rng::seeded(4);
    let criteria = [
        AcceptanceCriterion::Better,
        AcceptanceCriterion::RandomWalk,
        AcceptanceCriterion::ConstTemp { temperature: 3.5 },
        AcceptanceCriterion::Restart { patience: 7, source: RestartSource::Random },
    ];
    for _ in 0..10_000 {
        let cur: Cost = gen.random_range(-50..50);
        let cand: Cost = gen.random_range(-50..50);
        let i: u64 = gen.random_range(0..30);
        let i_last = gen.random_range(0..=i);
        let seed: u64 = gen.random();
        for c in &criteria {
            let h = history_at(i, i_last);
            let mut a = Acceptor::new(c.clone());
            let mut r1 = rng::seeded(seed);
            let got = a.decide(cur, cand, &h, &mut r1);
            // Metropolis draws exactly one uniform, and only for non-improving candidates.
            let mut r2 = rng::seeded(seed);
            let u = if cand >= cur { r2.random::<f64>() } else { 0.0 };
            assert_eq!(got, transcribed(c, cur, cand, i, i_last, u), "{c:?} {cur} {cand} {i} {i_last}");
        }
    }
}

#[test]
fn lsmc_degenerates_to_better_and_rw() {
    let mut gen = rng::seeded(5);
    let pairs: Vec<(Cost, Cost)> = (0..2_000)
        .map(|_| loop {
            let a = gen.random_range(0..100);
            let b = gen.random_range(0..100);
            if a != b {
                break (a, b);
            }
        })
        .collect();
    let h = history_at(1, 0);
    let mut cold = Acceptor::new(AcceptanceCriterion::Lsmc { temperature: 1e-9, cooling: 1.0 });
    let mut hot = Acceptor::new(AcceptanceCriterion::Lsmc { temperature: 1e12, cooling: 1.0 });
    let mut better = Acceptor::new(AcceptanceCriterion::Better);
    let mut rw = Acceptor::new(AcceptanceCriterion::RandomWalk);
    let mut rng = rng::seeded(6);
    for &(cur, cand) in &pairs {
        assert_eq!(cold.decide(cur, cand, &h, &mut rng), better.decide(cur, cand, &h, &mut rng));
        assert_eq!(hot.decide(cur, cand, &h, &mut rng), rw.decide(cur, cand, &h, &mut rng));
    }
}

#[test]
fn lsmc_cools_geometrically() {
    let h = history_at(1, 0);
    let mut rng = rng::seeded(7);
    let mut a = Acceptor::new(AcceptanceCriterion::Lsmc { temperature: 8.0, cooling: 0.5 });
    for _ in 0..3 {
        a.decide(1, 2, &h, &mut rng);
    }
    assert_eq!(a.temperature(), 1.0);
}

#[test]
fn invalid_parameters_are_rejected_before_running() {
    let w = weights(6, 1);
    let bad = [
        AcceptanceCriterion::ConstTemp { temperature: 0.0 },
        AcceptanceCriterion::Lsmc { temperature: 1.0, cooling: 1.5 },
        AcceptanceCriterion::Restart { patience: 0, source: RestartSource::Random },
        AcceptanceCriterion::DistanceEscape(EscapeParams {
            patience: 3,
            copies: 4,
            keep: 1,
            min_distance: 2,
            max_attempts: 3,
        }),
        AcceptanceCriterion::DistanceEscape(EscapeParams {
            patience: 3,
            copies: 4,
            keep: 2,
            min_distance: 6,
            max_attempts: 3,
        }),
    ];
    for c in bad {
        let err = run(toy_components(&w, c.clone()), Termination::iterations(5), 1).unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{c:?}: {err}");
    }
    let err = run(toy_components(&w, AcceptanceCriterion::Better), Termination::default(), 1).unwrap_err();
    assert!(matches!(err, Error::Config(_)));
}

#[test]
fn runs_are_deterministic_per_seed() {
    let w = weights(15, 2);
    let strip = |r: &RunRecord<Toy>| {
        r.trace.iter().map(|e| (e.iteration, e.current, e.best)).collect::<Vec<_>>()
    };
    let a = run(toy_components(&w, AcceptanceCriterion::Better), Termination::iterations(300), 42).unwrap();
    let b = run(toy_components(&w, AcceptanceCriterion::Better), Termination::iterations(300), 42).unwrap();
    let c = run(toy_components(&w, AcceptanceCriterion::Better), Termination::iterations(300), 43).unwrap();
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(a.best, b.best);
    assert_ne!(strip(&a), strip(&c));
}

#[test]
fn counts_match_acceptance_semantics() {
    let w = weights(15, 3);
    let rw = run(toy_components(&w, AcceptanceCriterion::RandomWalk), Termination::iterations(200), 1).unwrap();
    assert_eq!(rw.n_accepted, rw.iterations);
    assert_eq!(rw.n_local_searches, rw.iterations + 1);

    let better = run(toy_components(&w, AcceptanceCriterion::Better), Termination::iterations(200), 1).unwrap();
    let improvements = better
        .trace
        .windows(2)
        .filter(|p| p[1].current < p[0].current)
        .count() as u64;
    assert_eq!(better.n_accepted, improvements);
    assert!(better.n_accepted <= better.n_local_searches);
}

#[test]
fn best_is_kept_when_random_walk_moves_away() {
    let w = weights(20, 4);
    let r = run(toy_components(&w, AcceptanceCriterion::RandomWalk), Termination::iterations(500), 9).unwrap();
    let min_current = r.trace.iter().map(|e| e.current).min().unwrap();
    assert_eq!(r.best.cost, min_current);
    assert_eq!(r.best.cost, eval(&w, &r.best.p));
    assert!(r.trace.windows(2).all(|p| p[1].best <= p[0].best));
    assert!(r.trace.last().unwrap().current >= r.best.cost);
}

#[test]
fn walk_states_are_local_optima() {
    let w = weights(14, 5);
    let mut comps = toy_components(&w, AcceptanceCriterion::RandomWalk);
    let r = run(toy_components(&w, AcceptanceCriterion::RandomWalk), Termination::iterations(100), 3).unwrap();
    let mut again = r.best.clone();
    comps.local_search.search(&mut again);
    assert_eq!(again, r.best);
}

#[test]
fn target_cost_stops_the_run() {
    let w = weights(10, 6);
    let free = run(toy_components(&w, AcceptanceCriterion::Better), Termination::iterations(2_000), 5).unwrap();
    let target = Termination {
        target_cost: Some(free.best.cost),
        max_iterations: Some(2_000),
        ..Default::default()
    };
    let r = run(toy_components(&w, AcceptanceCriterion::Better), target, 5).unwrap();
    assert_eq!(r.best.cost, free.best.cost);
    assert!(r.iterations <= free.iterations);
}

#[test]
fn thinned_trace_keeps_changes_and_final_entry() {
    let w = weights(15, 7);
    let full = run(toy_components(&w, AcceptanceCriterion::Better), Termination::iterations(300), 8).unwrap();
    let mut seen = 0;
    let thin = run_with(
        toy_components(&w, AcceptanceCriterion::Better),
        Termination::iterations(300),
        8,
        RunOptions { trace: TraceMode::Changes },
        |_| seen += 1,
    )
    .unwrap();
    assert_eq!(seen, 301);
    assert!(thin.trace.len() < full.trace.len());
    assert_eq!(thin.trace.last().unwrap().iteration, 300);
    for e in &thin.trace {
        let f = full.trace[e.iteration as usize];
        assert_eq!((f.current, f.best), (e.current, e.best));
    }
}

#[test]
fn distance_escape_runs_and_counts_local_searches() {
    let w = weights(16, 8);
    let params = EscapeParams { patience: 10, copies: 4, keep: 2, min_distance: 3, max_attempts: 5 };
    let r = run(
        toy_components(&w, AcceptanceCriterion::DistanceEscape(params)),
        Termination::iterations(300),
        4,
    )
    .unwrap();
    assert!(r.n_restarts > 0);
    assert!(r.n_local_searches >= r.iterations + 1 + 4 * r.n_restarts);
}

#[test]
fn escape_with_equal_copies_and_keep_picks_farthest_of_batch() {
    let w = weights(16, 10);
    let mut comps = toy_components(&w, AcceptanceCriterion::Better);
    let mut rng = rng::seeded(1);
    let mut from = comps.initial.construct(&mut rng);
    comps.local_search.search(&mut from);
    let history = SearchHistory::new(from.clone());
    let params = EscapeParams { patience: 1, copies: 5, keep: 5, min_distance: 0, max_attempts: 1 };

    // Replay the same batch independently.
    let mut replay_rng = rng::seeded(77);
    let mut batch = Vec::new();
    for _ in 0..5 {
        let mut s = comps.perturbation.perturb(&from, &history, &mut replay_rng);
        comps.local_search.search(&mut s);
        batch.push(perm::hamming(&s.p, &from.p));
    }
    let farthest = *batch.iter().max().unwrap();

    let dist = |a: &Toy, b: &Toy| perm::hamming(&a.p, &b.p);
    let out = escape_beyond_distance(
        &from,
        &params,
        comps.perturbation.as_mut(),
        comps.local_search.as_mut(),
        &dist,
        &history,
        &mut rng::seeded(77),
    );
    assert_eq!(out.distance, farthest);
    assert_eq!(out.failed, farthest == 0);
    assert_eq!(out.local_searches, 5);
}

#[test]
fn escape_gives_up_with_flag() {
    let w = weights(8, 11);
    let mut comps = toy_components(&w, AcceptanceCriterion::Better);
    let mut rng = rng::seeded(2);
    let from = comps.initial.construct(&mut rng);
    let history = SearchHistory::new(from.clone());
    let params = EscapeParams { patience: 1, copies: 3, keep: 2, min_distance: 8, max_attempts: 4 };
    let dist = |a: &Toy, b: &Toy| perm::hamming(&a.p, &b.p);
    let out = escape_beyond_distance(
        &from,
        &params,
        comps.perturbation.as_mut(),
        comps.local_search.as_mut(),
        &dist,
        &history,
        &mut rng,
    );
    assert!(out.failed);
    assert_eq!(out.attempts, 4);
    assert_eq!(out.local_searches, 12);
}

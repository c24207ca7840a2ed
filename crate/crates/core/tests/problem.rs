mod common;

use common::*;
use ils_core::engine::{RunOptions, TraceMode};
use ils_core::fsp::Layout;
use ils_core::problem::*;
use ils_core::{Error, RestartSource, Termination};

fn load(rel: &str) -> ProblemInstance {
    ProblemInstance::load(&fixture(rel), Layout::MachineMajor).unwrap()
}

#[test]
fn format_detection() {
    assert_eq!(
        ProblemInstance::detect(&read_fixture("tsp/rand100.tsp")).unwrap(),
        ProblemKind::Tsp
    );
    assert_eq!(
        ProblemInstance::detect(&read_fixture("qap/hosp30.dat")).unwrap(),
        ProblemKind::Qap
    );
    assert_eq!(
        ProblemInstance::detect(&read_fixture("fsp/taillard_20x5_873654221.fsp")).unwrap(),
        ProblemKind::Fsp
    );
    assert!(ProblemInstance::detect("1 2 3\n").is_err());
    assert!(ProblemInstance::detect("").is_err());
}

#[test]
fn loading_names_instances_by_file_stem() {
    let p = load("tsp/pcb442.tsp");
    assert_eq!((p.kind(), p.name(), p.size()), (ProblemKind::Tsp, "pcb442", 442));
    let q = load("qap/hosp30.dat");
    assert_eq!((q.name(), q.size()), ("hosp30", 30));
    let f = load("fsp/taillard_20x5_873654221.fsp");
    assert_eq!(f.size(), 20);
}

#[test]
fn solutions_round_trip_through_text() {
    for rel in ["tsp/rand100.tsp", "qap/hosp30.dat", "fsp/taillard_20x5_873654221.fsp"] {
        let p = load(rel);
        let perm: Vec<usize> = (0..p.size()).rev().collect();
        let cost = p.evaluate(&perm).unwrap();
        let text = p.format_solution(&perm).unwrap();
        assert_eq!(p.read_solution(&text).unwrap(), (perm, Some(cost)), "{rel}");
        assert!(p.evaluate(&[0, 0]).is_err());
    }
}

#[test]
fn pcb442_optimal_tour_evaluates_to_its_known_length() {
    let p = load("tsp/pcb442.tsp");
    let (tour, len) = p.read_solution(&read_fixture("tsp/pcb442.opt.tour")).unwrap();
    assert_eq!(len, Some(50778));
    assert_eq!(p.evaluate(&tour).unwrap(), 50778);
}

#[test]
fn two_city_tour_is_the_round_trip() {
    let text = "NAME: two\nTYPE: TSP\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D\n\
                NODE_COORD_SECTION\n1 0 0\n2 3 4\nEOF\n";
    let p = ProblemInstance::parse(text, Layout::default()).unwrap();
    let setup = Setup {
        perturbation: PerturbationSpec::RandomRestart,
        local_search: LocalSearchSpec::TwoOpt,
        ..Setup::default_for(ProblemKind::Tsp)
    };
    let s = run_ils(&p, &setup, Termination::iterations(1), 1).unwrap();
    assert_eq!(s.best_cost, 10);
    // A double bridge cannot act on two cities.
    let db = Setup::default_for(ProblemKind::Tsp);
    assert!(matches!(run_ils(&p, &db, Termination::iterations(1), 1), Err(Error::Config(_))));
}

#[test]
fn defaults_run_on_every_problem_and_are_deterministic() {
    for rel in ["tsp/rand100.tsp", "qap/hosp30.dat", "fsp/taillard_20x5_873654221.fsp"] {
        let p = load(rel);
        let setup = Setup::default_for(p.kind());
        let a = run_ils(&p, &setup, Termination::iterations(150), 7).unwrap();
        let b = run_ils(&p, &setup, Termination::iterations(150), 7).unwrap();
        assert_eq!(a.best_cost, p.evaluate(&a.best).unwrap());
        assert_eq!(a.iterations, 150);
        let strip = |s: &RunSummary| {
            let t: Vec<_> = s.trace.iter().map(|e| (e.iteration, e.current, e.best)).collect();
            (s.best.clone(), s.best_cost, s.n_accepted, s.n_restarts, t)
        };
        assert_eq!(strip(&a), strip(&b), "{rel}");
        // Best-so-far never rises.
        assert!(a.trace.windows(2).all(|w| w[1].best <= w[0].best));
    }
}

#[test]
fn change_trace_is_a_subsequence_of_the_full_trace() {
    let p = load("fsp/taillard_20x5_873654221.fsp");
    let setup = Setup::default_for(p.kind());
    let full = run_ils(&p, &setup, Termination::iterations(200), 3).unwrap();
    let mut seen = Vec::new();
    let changes = run_ils_with(
        &p,
        &setup,
        Termination::iterations(200),
        3,
        RunOptions { trace: TraceMode::Changes },
        |e| seen.push(e.iteration),
    )
    .unwrap();
    assert!(changes.trace.len() <= full.trace.len());
    for e in &changes.trace {
        let f = &full.trace[full.trace.iter().position(|f| f.iteration == e.iteration).unwrap()];
        assert_eq!((f.current, f.best), (e.current, e.best));
    }
    assert_eq!(changes.trace.last().unwrap().iteration, full.trace.last().unwrap().iteration);
    assert_eq!(changes.best_cost, full.best_cost);
    assert!(!seen.is_empty());
}

#[test]
fn target_cost_stops_the_run() {
    let p = load("fsp/taillard_20x5_873654221.fsp");
    let setup = Setup::default_for(p.kind());
    let t = Termination {
        max_iterations: Some(100_000),
        target_cost: Some(1400),
        ..Default::default()
    };
    let s = run_ils(&p, &setup, t, 1).unwrap();
    assert!(s.best_cost <= 1400);
    assert!(s.iterations < 100_000);
}

#[test]
fn mismatched_components_are_config_errors() {
    let tsp = load("tsp/rand100.tsp");
    let qap = load("qap/hosp30.dat");
    let fsp = load("fsp/taillard_20x5_873654221.fsp");
    let q = Setup::default_for(ProblemKind::Qap);
    let f = Setup::default_for(ProblemKind::Fsp);
    let t = Setup::default_for(ProblemKind::Tsp);
    assert!(matches!(q.check(&tsp), Err(Error::Config(_))));
    assert!(matches!(t.check(&qap), Err(Error::Config(_))));
    assert!(matches!(t.check(&fsp), Err(Error::Config(_))));
    let nn = Setup { initial: InitialSpec::NearestNeighbor, ..f.clone() };
    assert!(matches!(nn.check(&fsp), Err(Error::Config(_))));
    let mixed = Setup { local_search: LocalSearchSpec::PairwiseExchange, ..f.clone() };
    assert!(matches!(mixed.check(&fsp), Err(Error::Config(_))));
    assert!(f.check(&fsp).is_ok() && q.check(&qap).is_ok() && t.check(&tsp).is_ok());
}

#[test]
fn temperatures_default_only_for_flow_shop() {
    let fsp = load("fsp/taillard_20x5_873654221.fsp");
    let qap = load("qap/hosp30.dat");
    let ProblemInstance::Fsp(f) = &fsp else { unreachable!() };
    let expected = f.total_processing_time() as f64 / (10.0 * 20.0 * 5.0);
    assert_eq!(default_temperature(&fsp), Some(expected));
    assert_eq!(default_temperature(&qap), None);
    let lsmc = AcceptanceSpec::Lsmc { temperature: None, cooling: 1.0 };
    assert!(matches!(lsmc.resolve(&qap), Err(Error::Config(_))));
    assert!(lsmc.resolve(&fsp).is_ok());
}

#[test]
fn escape_distance_must_be_reachable() {
    let qap = load("qap/hosp30.dat");
    let escape = |min_distance| Setup {
        acceptance: AcceptanceSpec::DistanceEscape {
            patience: 10,
            copies: 5,
            keep: 2,
            min_distance,
            max_attempts: 3,
        },
        ..Setup::default_for(ProblemKind::Qap)
    };
    assert!(escape(10).check(&qap).is_ok());
    assert!(escape(0).check(&qap).is_ok());
    assert!(matches!(escape(30).check(&qap), Err(Error::Config(_))));
    assert!(matches!(escape(31).check(&qap), Err(Error::Config(_))));
}

#[test]
fn restart_and_escape_variants_run() {
    let qap = load("qap/hosp30.dat");
    let restart = Setup {
        acceptance: AcceptanceSpec::Restart { patience: 5, source: RestartSource::Greedy },
        ..Setup::default_for(ProblemKind::Qap)
    };
    let s = run_ils(&qap, &restart, Termination::iterations(100), 2).unwrap();
    assert!(s.n_restarts > 0);
    let escape = Setup {
        acceptance: AcceptanceSpec::DistanceEscape {
            patience: 5,
            copies: 4,
            keep: 2,
            min_distance: 8,
            max_attempts: 3,
        },
        ..restart
    };
    let s = run_ils(&qap, &escape, Termination::iterations(100), 2).unwrap();
    assert_eq!(s.best_cost, qap.evaluate(&s.best).unwrap());
}

#[test]
fn strength_expressions() {
    let e = |s: &str| s.parse::<Strength>().unwrap();
    assert_eq!(e("n/12").resolve(60, 2, 60).unwrap(), 5);
    assert_eq!(e("3n/4").resolve(30, 2, 30).unwrap(), 23); // 22.5 rounds up
    assert_eq!(e("n").resolve(30, 2, 30).unwrap(), 30);
    assert_eq!(e("n/12").resolve(7, 2, 7).unwrap(), 2); // clamped
    assert_eq!(e("5").resolve(3, 2, 3).unwrap(), 3);
    assert_eq!(e("3n/4").label(), "3n/4");
    assert!("n/0".parse::<Strength>().is_err());
    assert!("x/4".parse::<Strength>().is_err());
    let db = PerturbationSpec::DoubleBridge { count: 1, bias: None, reset_radius: 25 };
    assert_eq!(db.with_strength(&e("5"), 100).unwrap().label(), "DBx5");
    assert!(PerturbationSpec::RandomRestart.with_strength(&e("2"), 10).is_err());
}

#[test]
fn specs_deserialize_from_tagged_tables() {
    let s: Setup = serde_json::from_str(
        r#"{"local_search": "3-opt",
            "perturbation": {"kind": "double-bridge", "count": 3},
            "acceptance": {"kind": "lsmc", "temperature": 2.5}}"#,
    )
    .unwrap();
    assert_eq!(s.initial, InitialSpec::Greedy);
    assert_eq!(s.perturbation.label(), "DBx3");
    let k: PerturbationSpec =
        serde_json::from_str(r#"{"kind": "k-exchange", "strength": "n/4"}"#).unwrap();
    assert_eq!(k.label(), "k=n/4");
    let k: PerturbationSpec = serde_json::from_str(r#"{"kind": "k-exchange", "strength": 3}"#).unwrap();
    assert_eq!(k.label(), "k=3");
    let a: AcceptanceSpec = serde_json::from_str(r#"{"kind": "random-walk"}"#).unwrap();
    assert_eq!(a, AcceptanceSpec::Rw);
}

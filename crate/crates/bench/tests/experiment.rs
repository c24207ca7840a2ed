mod common;

use common::*;
use ils_bench::config::{BestKnown, Generator};
use ils_bench::report::{emit_report, Format};
use ils_bench::{run_experiment, run_experiment_with, trajectory_capture, Error, ExperimentConfig};
use ils_core::engine::{RunOptions, TraceMode};
use ils_core::fsp::Layout;
use ils_core::problem::{run_ils, run_ils_with, InitialSpec, ProblemInstance, Setup};
use ils_core::Termination;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};

fn config(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_toml(text, Path::new(env!("CARGO_MANIFEST_DIR"))).unwrap()
}

const SMALL: &str = r#"
seeds = [1, 2, 3]
[termination]
iterations = 30
[[instances]]
generate = { kind = "euclidean", n = 30, seed = 5 }
[[combinations]]
local_search = "2-opt"
"#;

#[test]
fn one_cell_averages_exactly_the_configured_seeds() {
    let report = run_experiment(&config(SMALL)).unwrap();
    assert_eq!(report.rows.len(), 1);
    assert_eq!(report.runs.len(), 3);
    let row = &report.rows[0];
    assert_eq!(row.runs, 3);
    assert_eq!(row.instance, "euclid30-s5");
    assert_eq!(row.combination, "DBx1+Better");
    let sum: i64 = report.runs.iter().map(|r| r.best_cost).sum();
    assert_eq!(row.mean_cost, sum as f64 / 3.0);
    assert_eq!(report.runs.iter().map(|r| r.seed).collect::<Vec<_>>(), [1, 2, 3]);
    assert!(report.runs.iter().all(|r| r.iterations == 30));
}

#[test]
fn runs_are_reproducible_and_thread_count_does_not_matter() {
    let strip = |r: &ils_bench::Report| {
        r.runs.iter().map(|x| (x.seed, x.best_cost, x.local_searches)).collect::<Vec<_>>()
    };
    let a = run_experiment(&config(SMALL)).unwrap();
    let b = run_experiment(&config(&format!("threads = 3\n{SMALL}"))).unwrap();
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn random_restart_baseline_is_labelled_rr() {
    let cfg = config(
        r#"
seeds = [1]
[termination]
iterations = 5
[[instances]]
generate = { kind = "euclidean", n = 20, seed = 1 }
[[combinations]]
perturbation = { kind = "random-restart" }
acceptance = { kind = "better" }
[[combinations]]
"#,
    );
    let report = run_experiment(&cfg).unwrap();
    let labels: Vec<&str> = report.rows.iter().map(|r| r.combination.as_str()).collect();
    assert_eq!(labels, ["RR", "DBx1+Better"]);
}

#[test]
fn strength_sweep_has_one_column_per_strength() {
    let cfg = config(
        r#"
seeds = [1, 2]
[termination]
iterations = 10
[[instances]]
generate = { kind = "qap-uniform", n = 24, seed = 3 }
[[combinations]]
label = "Better"
acceptance = { kind = "better" }
strengths = [3, "n/12", "n/6", "n/4", "n/3", "n/2", "3n/4", "n"]
"#,
    );
    let report = run_experiment(&cfg).unwrap();
    assert_eq!(report.rows.len(), 8);
    assert!(report.rows.iter().all(|r| r.runs == 2));
    let md = String::from_utf8(emit_report(&report, Format::Markdown)).unwrap();
    assert!(md.contains("| instance | 3 | n/12 | n/6 | n/4 | n/3 | n/2 | 3n/4 | n |"));
}

#[test]
fn unresolvable_instance_fails_before_any_run() {
    let cfg = config(
        r#"
seeds = [1]
[termination]
iterations = 5
[[instances]]
generate = { kind = "euclidean", n = 20, seed = 1 }
[[instances]]
path = "no/such/file.tsp"
[[combinations]]
"#,
    );
    let count = AtomicUsize::new(0);
    let e = run_experiment_with(&cfg, |_| {
        count.fetch_add(1, Ordering::Relaxed);
    })
    .unwrap_err();
    assert_eq!(e.category(), "io");
    assert_eq!(count.load(Ordering::Relaxed), 0);
}

#[test]
fn component_mismatch_fails_before_any_run() {
    let cfg = config(
        r#"
seeds = [1]
[termination]
iterations = 5
[[instances]]
generate = { kind = "euclidean", n = 20, seed = 1 }
[[instances]]
generate = { kind = "taillard", jobs = 10, machines = 3, seed = 9 }
[[combinations]]
local_search = "2-opt"
"#,
    );
    let count = AtomicUsize::new(0);
    let e = run_experiment_with(&cfg, |_| {
        count.fetch_add(1, Ordering::Relaxed);
    })
    .unwrap_err();
    assert!(matches!(e, Error::Config(_)), "{e}");
    assert_eq!(count.load(Ordering::Relaxed), 0);
}

#[test]
fn config_validation() {
    let base = Path::new(".");
    let bad = [
        "seeds = []\n[termination]\niterations = 1\n[[instances]]\ngenerate = { kind = \"euclidean\", n = 9, seed = 1 }\n[[combinations]]\n",
        "seeds = [1]\n[termination]\n[[instances]]\ngenerate = { kind = \"euclidean\", n = 9, seed = 1 }\n[[combinations]]\n",
        "seeds = [1]\n[termination]\ntime = -1.0\n[[instances]]\ngenerate = { kind = \"euclidean\", n = 9, seed = 1 }\n[[combinations]]\n",
        "seeds = [1]\nbogus = 1\n[termination]\niterations = 1\n[[instances]]\ngenerate = { kind = \"euclidean\", n = 9, seed = 1 }\n[[combinations]]\n",
        "seeds = [1]\n[termination]\niterations = 1\n[[combinations]]\n",
    ];
    for text in bad {
        let e = ExperimentConfig::from_toml(text, base).unwrap_err();
        assert_eq!(e.category(), "config", "{text}");
    }
    let cfg = ExperimentConfig::from_toml(
        "seeds = [1]\n[termination]\ntime = 2.5\n[[instances]]\npath = \"x/y.tsp\"\n[[combinations]]\n",
        Path::new("/base"),
    )
    .unwrap();
    let ils_bench::InstanceSource::Path { path } = &cfg.instances[0].source else { panic!() };
    assert_eq!(path, Path::new("/base/x/y.tsp"));
}

#[test]
fn duplicate_combination_labels_are_rejected() {
    let cfg = config(&format!("{SMALL}[[combinations]]\nlocal_search = \"2-opt\"\n"));
    assert!(matches!(run_experiment(&cfg), Err(Error::Config(_))));
}

#[test]
fn best_known_comes_from_the_sidecar_unless_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let coords: Vec<(i64, i64)> = (0..12).map(|i| ((i * 37) % 100, (i * 61) % 100)).collect();
    std::fs::write(dir.path().join("pts.tsp"), tsplib("pts", &coords)).unwrap();
    std::fs::write(dir.path().join("best_known.toml"), "pts = 300\nother = 5\n").unwrap();
    let text = "seeds = [1]\n[termination]\niterations = 3\n[[instances]]\npath = \"pts.tsp\"\n[[combinations]]\nlocal_search = \"2-opt\"\n";
    let cfg = ExperimentConfig::from_toml(text, dir.path()).unwrap();
    let report = run_experiment(&cfg).unwrap();
    let row = &report.rows[0];
    assert_eq!(row.best_known, Some(300));
    let expected = 100.0 * (row.mean_cost - 300.0) / 300.0;
    assert!((row.mean_excess_pct.unwrap() - expected).abs() < 1e-9);

    let text = text.replace("path = \"pts.tsp\"", "path = \"pts.tsp\"\nbest_known = 250");
    let cfg = ExperimentConfig::from_toml(&text, dir.path()).unwrap();
    assert_eq!(run_experiment(&cfg).unwrap().rows[0].best_known, Some(250));

    assert_eq!(BestKnown::parse("a = 1\nb = 2\n").unwrap().get("b"), Some(2));
    assert!(BestKnown::parse("a = \"x\"").is_err());
}

#[test]
fn bundled_sidecars_cover_the_fixtures() {
    for (rel, name) in [
        ("tsp/pcb442.tsp", "pcb442"),
        ("qap/hosp30.dat", "hosp30"),
        ("fsp/taillard_20x5_873654221.fsp", "taillard_20x5_873654221"),
    ] {
        let bk = BestKnown::sidecar_for(&fixture(rel)).unwrap();
        assert!(bk.get(name).is_some(), "{name}");
    }
    let bk = BestKnown::sidecar_for(&fixture("tsp/pcb442.tsp")).unwrap();
    assert_eq!(bk.get("pcb442"), Some(50778));
}

#[test]
fn generators_are_deterministic() {
    let g = Generator::Euclidean { n: 15, seed: 4, side: 500 };
    let (a, b) = (g.generate().unwrap(), g.generate().unwrap());
    let id: Vec<usize> = (0..15).collect();
    assert_eq!(a.evaluate(&id).unwrap(), b.evaluate(&id).unwrap());
    let t = Generator::Taillard { jobs: 20, machines: 5, seed: 873654221 }.generate().unwrap();
    let file = ProblemInstance::load(&fixture("fsp/taillard_20x5_873654221.fsp"), Layout::default()).unwrap();
    let id: Vec<usize> = (0..20).collect();
    assert_eq!(t.evaluate(&id).unwrap(), file.evaluate(&id).unwrap());
}

#[test]
fn trajectory_with_unit_step_is_the_full_trace() {
    let p = ProblemInstance::load(&fixture("qap/hosp30.dat"), Layout::default()).unwrap();
    let setup = Setup::default_for(p.kind());
    let s = run_ils(&p, &setup, Termination::iterations(60), 2).unwrap();
    let full: Vec<(u64, i64)> = s.trace.iter().map(|e| (e.iteration, e.best)).collect();
    assert_eq!(trajectory_capture(&s.trace, 1), full);
    assert!(trajectory_capture(&[], 5).is_empty());
}

#[test]
fn sparse_traces_sample_like_full_ones() {
    let p = ProblemInstance::load(&fixture("fsp/taillard_20x5_873654221.fsp"), Layout::default()).unwrap();
    let setup = Setup::default_for(p.kind());
    let t = Termination::iterations(97);
    let full = run_ils(&p, &setup, t, 4).unwrap();
    let sparse = run_ils_with(&p, &setup, t, 4, RunOptions { trace: TraceMode::Changes }, |_| {}).unwrap();
    for every in [1, 7, 10, 97, 200] {
        let a = trajectory_capture(&full.trace, every);
        assert_eq!(a, trajectory_capture(&sparse.trace, every), "every {every}");
        assert!(a.windows(2).all(|w| w[1].1 <= w[0].1 && w[1].0 > w[0].0));
        assert_eq!(a.last().unwrap(), &(97, full.best_cost));
    }
    let ten = trajectory_capture(&full.trace, 10);
    assert_eq!(ten.iter().map(|x| x.0).collect::<Vec<_>>(), [0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 97]);
}

#[test]
fn neh_start_leads_a_random_start_at_the_first_iteration() {
    // Compared on the mean over seeds, as trajectories are averaged.
    for rel in ["fsp/taillard_20x5_873654221.fsp", "fsp/taillard_50x20_1328042058.fsp"] {
        let p = ProblemInstance::load(&fixture(rel), Layout::default()).unwrap();
        let neh = Setup::default_for(p.kind());
        let random = Setup { initial: InitialSpec::Random, ..neh.clone() };
        let mean_at_one = |s: &Setup| {
            let total: i64 = (1..=10)
                .map(|seed| {
                    let r = run_ils(&p, s, Termination::iterations(1), seed).unwrap();
                    trajectory_capture(&r.trace, 1)[1].1
                })
                .sum();
            total as f64 / 10.0
        };
        let (a, b) = (mean_at_one(&neh), mean_at_one(&random));
        assert!(a < b, "{rel}: NEH {a} vs random {b}");
    }
}

#[test]
fn shipped_configs_load_and_run() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|e| e != "toml") {
            continue;
        }
        let mut cfg = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        // Shrink to one short run per cell; this still resolves every
        // instance and checks every setup.
        cfg.seeds.truncate(1);
        cfg.termination = ils_bench::TerminationConfig {
            iterations: Some(2),
            ..Default::default()
        };
        let report = run_experiment(&cfg).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(!report.rows.is_empty());
        seen += 1;
    }
    assert!(seen >= 4);
}

use clap::{Parser, Subcommand, ValueEnum};
use ils_bench::report::Format;
use ils_bench::{brute_force, emit_report, run_experiment_with, Error, ExperimentConfig, Result};
use ils_core::fsp::Layout;
use ils_core::problem::{
    run_ils, AcceptanceSpec, InitialSpec, LocalSearchSpec, PerturbationSpec, ProblemInstance,
    Setup, Strength,
};
use ils_core::{RestartSource, Termination};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

/// Environment variable naming the directory `run` writes reports into.
const REPORT_DIR_VAR: &str = "ILS_REPORT_DIR";

#[derive(Parser)]
#[command(name = "ils-bench", version, about = "Iterated local search experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write CSV, markdown and JSON-lines
    /// reports into $ILS_REPORT_DIR (default `reports`).
    Run {
        config: PathBuf,
        /// Suppress per-run progress on stderr.
        #[arg(long)]
        quiet: bool,
    },
    /// Run one ILS and print the best solution found.
    Solve(SolveArgs),
    /// Solve a small instance exactly by enumeration.
    Oracle {
        problem: PathBuf,
        #[arg(long, value_enum, default_value_t = LayoutArg::MachineMajor)]
        layout: LayoutArg,
    },
    /// Validate a solution file against an instance and re-score it.
    Check {
        solution: PathBuf,
        problem: PathBuf,
        #[arg(long, value_enum, default_value_t = LayoutArg::MachineMajor)]
        layout: LayoutArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LayoutArg {
    MachineMajor,
    JobMajor,
}

impl From<LayoutArg> for Layout {
    fn from(l: LayoutArg) -> Self {
        match l {
            LayoutArg::MachineMajor => Layout::MachineMajor,
            LayoutArg::JobMajor => Layout::JobMajor,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum InitialArg {
    Random,
    Greedy,
    NearestNeighbor,
}

#[derive(Clone, Copy, ValueEnum)]
enum LocalSearchArg {
    #[value(name = "2-opt")]
    TwoOpt,
    #[value(name = "3-opt")]
    ThreeOpt,
    PairwiseExchange,
    Insert,
    InsertAccelerated,
}

#[derive(Clone, Copy, ValueEnum)]
enum PerturbationArg {
    DoubleBridge,
    CoordinateNoise,
    KExchange,
    SwapInterchange,
    RandomRestart,
}

#[derive(Clone, Copy, ValueEnum)]
enum AcceptanceArg {
    Better,
    Rw,
    Lsmc,
    ConstTemp,
    Restart,
    DistanceEscape,
}

#[derive(clap::Args)]
struct SolveArgs {
    problem: PathBuf,
    #[arg(long, value_enum, default_value_t = LayoutArg::MachineMajor)]
    layout: LayoutArg,
    #[arg(long, value_enum)]
    initial: Option<InitialArg>,
    #[arg(long, value_enum)]
    local_search: Option<LocalSearchArg>,
    #[arg(long, value_enum)]
    perturbation: Option<PerturbationArg>,
    /// Perturbation strength: a count or an expression such as `n/4`.
    #[arg(long)]
    strength: Option<Strength>,
    /// Coordinate noise magnitude, relative to mean edge length.
    #[arg(long, default_value_t = 0.1)]
    noise: f64,
    #[arg(long, value_enum)]
    acceptance: Option<AcceptanceArg>,
    #[arg(long)]
    temperature: Option<f64>,
    /// LSMC cooling factor applied after each acceptance test.
    #[arg(long, default_value_t = 1.0)]
    cooling: f64,
    /// Iterations without improvement before a restart or escape.
    #[arg(long, default_value_t = 100)]
    patience: u64,
    /// Restart from a greedy construction instead of a random one.
    #[arg(long)]
    greedy_restart: bool,
    #[arg(long, default_value_t = 8)]
    copies: usize,
    #[arg(long, default_value_t = 3)]
    keep: usize,
    /// Default: a tenth of the instance size.
    #[arg(long)]
    min_distance: Option<usize>,
    #[arg(long, default_value_t = 10)]
    max_attempts: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Wall-time limit in seconds.
    #[arg(long)]
    time: Option<f64>,
    #[arg(long)]
    iterations: Option<u64>,
    /// Stop once this cost is reached.
    #[arg(long)]
    target: Option<i64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report_error("usage", &e.to_string());
            return ExitCode::from(2);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report_error(e.category(), &e.to_string());
            ExitCode::FAILURE
        }
    }
}

fn report_error(category: &str, message: &str) {
    let line = serde_json::json!({ "error": category, "message": message.trim() });
    eprintln!("{line}");
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Run { config, quiet } => run(&config, quiet),
        Command::Solve(args) => solve(args),
        Command::Oracle { problem, layout } => {
            let p = load(&problem, layout)?;
            let (_, best) = brute_force(&p)?;
            print!("{}", p.format_solution(&best)?);
            Ok(())
        }
        Command::Check {
            solution,
            problem,
            layout,
        } => {
            let p = load(&problem, layout)?;
            let text = std::fs::read_to_string(&solution).map_err(|e| io(&solution, e))?;
            let (perm, stated) = p.read_solution(&text)?;
            let actual = p.evaluate(&perm)?;
            if let Some(stated) = stated.filter(|&s| s != actual) {
                return Err(Error::CostMismatch { stated, actual });
            }
            println!("valid {} solution for {}, cost {actual}", p.kind(), p.name());
            Ok(())
        }
    }
}

fn io(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source: e,
    }
}

fn load(path: &Path, layout: LayoutArg) -> Result<ProblemInstance> {
    if !path.is_file() {
        return Err(io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "instance file not found"),
        ));
    }
    Ok(ProblemInstance::load(path, layout.into())?)
}

fn run(path: &Path, quiet: bool) -> Result<()> {
    let config = ExperimentConfig::load(path)?;
    let report = run_experiment_with(&config, |r| {
        if !quiet {
            let strength = r.strength.as_deref().map(|s| format!(" [{s}]")).unwrap_or_default();
            eprintln!(
                "{} {}{} seed {}: cost {} after {} iterations ({:.2} s)",
                r.instance, r.combination, strength, r.seed, r.best_cost, r.iterations, r.elapsed
            );
        }
    })?;
    let dir = std::env::var_os(REPORT_DIR_VAR)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("reports"));
    std::fs::create_dir_all(&dir).map_err(|e| io(&dir, e))?;
    for format in [Format::Csv, Format::Markdown, Format::JsonLines] {
        let file = dir.join(format!("{}.{}", config.name, format.extension()));
        std::fs::write(&file, emit_report(&report, format)).map_err(|e| io(&file, e))?;
        if !quiet {
            eprintln!("wrote {}", file.display());
        }
    }
    print!("{}", String::from_utf8_lossy(&emit_report(&report, Format::Markdown)));
    Ok(())
}

fn solve(a: SolveArgs) -> Result<()> {
    let problem = load(&a.problem, a.layout)?;
    let n = problem.size();
    let mut setup = Setup::default_for(problem.kind());
    if let Some(i) = a.initial {
        setup.initial = match i {
            InitialArg::Random => InitialSpec::Random,
            InitialArg::Greedy => InitialSpec::Greedy,
            InitialArg::NearestNeighbor => InitialSpec::NearestNeighbor,
        };
    }
    if let Some(ls) = a.local_search {
        setup.local_search = match ls {
            LocalSearchArg::TwoOpt => LocalSearchSpec::TwoOpt,
            LocalSearchArg::ThreeOpt => LocalSearchSpec::ThreeOpt,
            LocalSearchArg::PairwiseExchange => LocalSearchSpec::PairwiseExchange,
            LocalSearchArg::Insert => LocalSearchSpec::Insert,
            LocalSearchArg::InsertAccelerated => LocalSearchSpec::InsertAccelerated,
        };
    }
    if let Some(p) = a.perturbation {
        setup.perturbation = match p {
            PerturbationArg::DoubleBridge => PerturbationSpec::DoubleBridge {
                count: 1,
                bias: None,
                reset_radius: ils_core::tsp::DEFAULT_RESET_RADIUS,
            },
            PerturbationArg::CoordinateNoise => PerturbationSpec::CoordinateNoise { magnitude: a.noise },
            PerturbationArg::KExchange => PerturbationSpec::KExchange {
                strength: Strength::Expr("n/4".into()),
                derangement: true,
            },
            PerturbationArg::SwapInterchange => PerturbationSpec::SwapInterchange {
                swaps: 2,
                interchanges: 2,
            },
            PerturbationArg::RandomRestart => PerturbationSpec::RandomRestart,
        };
    }
    if let Some(s) = &a.strength {
        setup.perturbation = setup.perturbation.with_strength(s, n)?;
    }
    if let Some(acc) = a.acceptance {
        setup.acceptance = match acc {
            AcceptanceArg::Better => AcceptanceSpec::Better,
            AcceptanceArg::Rw => AcceptanceSpec::Rw,
            AcceptanceArg::Lsmc => AcceptanceSpec::Lsmc {
                temperature: a.temperature,
                cooling: a.cooling,
            },
            AcceptanceArg::ConstTemp => AcceptanceSpec::ConstTemp {
                temperature: a.temperature,
            },
            AcceptanceArg::Restart => AcceptanceSpec::Restart {
                patience: a.patience,
                source: if a.greedy_restart {
                    RestartSource::Greedy
                } else {
                    RestartSource::Random
                },
            },
            AcceptanceArg::DistanceEscape => AcceptanceSpec::DistanceEscape {
                patience: a.patience,
                copies: a.copies,
                keep: a.keep,
                min_distance: a.min_distance.unwrap_or((n / 10).max(1)),
                max_attempts: a.max_attempts,
            },
        };
    }
    let termination = match (a.time, a.iterations, a.target) {
        (None, None, None) => Termination::wall_time(Duration::from_secs(10)),
        (time, iterations, target) => ils_bench::TerminationConfig {
            time,
            iterations,
            target,
        }
        .resolve()?,
    };
    let summary = run_ils(&problem, &setup, termination, a.seed)?;
    print!("{}", problem.format_solution(&summary.best)?);
    eprintln!(
        "{}: {} {} {} {}, seed {}: best {} after {} iterations, {} local searches, {:.2} s",
        problem.name(),
        setup.perturbation.label(),
        setup.acceptance.label(),
        serde_json::to_string(&setup.local_search)?.trim_matches('"'),
        serde_json::to_string(&setup.initial)?.trim_matches('"'),
        a.seed,
        summary.best_cost,
        summary.iterations,
        summary.n_local_searches,
        summary.elapsed,
    );
    Ok(())
}

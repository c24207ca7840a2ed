//! One configuration surface over the three problems: instance loading with
//! format detection, declarative component choices, and a dispatching
//! `run_ils`.

use crate::engine::{
    self, AcceptanceCriterion, Components, EscapeParams, RestartSource, RunOptions, RunRecord,
    Solution, Termination, TraceEntry,
};
use crate::fsp::{self, FspInstance, JobSequence, Layout};
use crate::qap::{self, Assignment, QapInstance};
use crate::rng::Rng;
use crate::tsp::{self, Tour, TourSearch, TspInstance};
use crate::{perm, Cost, Error, Result};
use rand::Rng as _;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Tsp,
    Qap,
    Fsp,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::Tsp => "tsp",
            ProblemKind::Qap => "qap",
            ProblemKind::Fsp => "fsp",
        })
    }
}

#[derive(Debug, Clone)]
pub enum ProblemInstance {
    Tsp(TspInstance),
    Qap(QapInstance),
    Fsp(FspInstance),
}

impl ProblemInstance {
    /// Guesses the format: TSPLIB keywords mean TSP, a first line with one
    /// number means QAPLIB, two numbers mean a flow shop.
    pub fn detect(text: &str) -> Result<ProblemKind> {
        let first = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty())
            .ok_or_else(|| Error::parse(1, "empty problem file"))?;
        if text.contains("DIMENSION") || text.contains("EDGE_WEIGHT_TYPE") || first.contains(':') {
            return Ok(ProblemKind::Tsp);
        }
        match first.split_whitespace().count() {
            1 => Ok(ProblemKind::Qap),
            2 => Ok(ProblemKind::Fsp),
            k => Err(Error::Unsupported(format!(
                "cannot tell the problem type from a first line with {k} fields"
            ))),
        }
    }

    pub fn parse(text: &str, layout: Layout) -> Result<Self> {
        Ok(match Self::detect(text)? {
            ProblemKind::Tsp => ProblemInstance::Tsp(tsp::parse_tsplib(text)?),
            ProblemKind::Qap => ProblemInstance::Qap(qap::parse_qaplib(text)?),
            ProblemKind::Fsp => ProblemInstance::Fsp(fsp::parse_fsp(text, layout)?),
        })
    }

    /// Reads and parses a file; the instance is named after the file stem
    /// unless the file names itself.
    pub fn load(path: &Path, layout: Layout) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut inst = Self::parse(&text, layout)?;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        match &mut inst {
            ProblemInstance::Tsp(t) if t.name == "unnamed" => t.name = stem,
            ProblemInstance::Qap(q) => q.name = stem,
            ProblemInstance::Fsp(f) => f.name = stem,
            _ => {}
        }
        Ok(inst)
    }

    pub fn kind(&self) -> ProblemKind {
        match self {
            ProblemInstance::Tsp(_) => ProblemKind::Tsp,
            ProblemInstance::Qap(_) => ProblemKind::Qap,
            ProblemInstance::Fsp(_) => ProblemKind::Fsp,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            ProblemInstance::Tsp(t) => &t.name,
            ProblemInstance::Qap(q) => &q.name,
            ProblemInstance::Fsp(f) => &f.name,
        }
    }

    /// Permutation length.
    pub fn size(&self) -> usize {
        match self {
            ProblemInstance::Tsp(t) => t.n(),
            ProblemInstance::Qap(q) => q.n(),
            ProblemInstance::Fsp(f) => f.n_jobs(),
        }
    }

    /// Objective of `perm`, after checking it is a permutation of the right
    /// length.
    pub fn evaluate(&self, perm: &[usize]) -> Result<Cost> {
        perm::validate(perm, self.size())?;
        Ok(match self {
            ProblemInstance::Tsp(t) => tsp::tour_length(t, perm),
            ProblemInstance::Qap(q) => qap::qap_cost(q, perm),
            ProblemInstance::Fsp(f) => fsp::makespan(f, perm),
        })
    }

    /// Solution text in the problem's own format.
    pub fn format_solution(&self, perm: &[usize]) -> Result<String> {
        Ok(match self {
            ProblemInstance::Tsp(t) => tsp::write_tour(&Tour::new(t, perm.to_vec())?),
            ProblemInstance::Qap(q) => qap::write_assignment(&Assignment::new(q, perm.to_vec())?),
            ProblemInstance::Fsp(f) => fsp::write_sequence(&JobSequence::new(f, perm.to_vec())?),
        })
    }

    /// Parses a solution file for this problem: the permutation and the cost
    /// it claims, if any.
    pub fn read_solution(&self, text: &str) -> Result<(Vec<usize>, Option<Cost>)> {
        match self {
            ProblemInstance::Tsp(_) => tsp::read_tour(text),
            ProblemInstance::Qap(_) => qap::read_assignment(text),
            ProblemInstance::Fsp(_) => fsp::read_sequence(text),
        }
    }
}

/// A count given literally or relative to the problem size: `3`, `"n"`,
/// `"n/12"`, `"3n/4"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Strength {
    Count(usize),
    Expr(String),
}

impl Strength {
    /// Evaluates against size `n`, rounding to the nearest integer and
    /// clamping into `lo..=hi`.
    pub fn resolve(&self, n: usize, lo: usize, hi: usize) -> Result<usize> {
        let raw = match self {
            Strength::Count(k) => *k as f64,
            Strength::Expr(e) => eval_size_expr(e, n)?,
        };
        Ok((raw.round() as usize).clamp(lo, hi.max(lo)))
    }

    pub fn label(&self) -> String {
        match self {
            Strength::Count(k) => k.to_string(),
            Strength::Expr(e) => e.replace(' ', ""),
        }
    }
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl std::str::FromStr for Strength {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(k) = s.parse() {
            return Ok(Strength::Count(k));
        }
        eval_size_expr(s, 12)?;
        Ok(Strength::Expr(s.to_string()))
    }
}

/// `[a]n[/b]` or a plain number.
fn eval_size_expr(expr: &str, n: usize) -> Result<f64> {
    let e: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Config(format!("bad strength expression `{expr}`"));
    let (num, den) = match e.split_once('/') {
        Some((a, b)) => (a, b.parse::<f64>().map_err(|_| bad())?),
        None => (e.as_str(), 1.0),
    };
    if den <= 0.0 {
        return Err(bad());
    }
    let value = match num.strip_suffix('n') {
        Some("") => n as f64,
        Some(c) => c.trim_end_matches('*').parse::<f64>().map_err(|_| bad())? * n as f64,
        None => num.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(value / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialSpec {
    Random,
    /// Greedy-edge (TSP), greedy placement (QAP) or NEH (flow shop).
    #[default]
    #[serde(alias = "neh")]
    Greedy,
    /// TSP only: nearest neighbour from a random city.
    NearestNeighbor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalSearchSpec {
    #[serde(rename = "2-opt", alias = "two-opt")]
    TwoOpt,
    #[serde(rename = "3-opt", alias = "three-opt")]
    ThreeOpt,
    /// QAP pairwise exchange.
    #[serde(alias = "swap")]
    PairwiseExchange,
    /// Flow-shop insert moves with full re-evaluation.
    Insert,
    /// Flow-shop insert moves evaluated with heads and tails.
    InsertAccelerated,
}

fn one() -> usize {
    1
}

fn two() -> usize {
    2
}

fn yes() -> bool {
    true
}

fn default_radius() -> usize {
    tsp::DEFAULT_RESET_RADIUS
}

fn default_cooling() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PerturbationSpec {
    /// `count` double bridges; `bias` draws breakpoints from that many
    /// nearest neighbours. Don't-look bits are cleared within `reset_radius`
    /// of every breakpoint.
    DoubleBridge {
        #[serde(default = "one")]
        count: usize,
        #[serde(default)]
        bias: Option<usize>,
        #[serde(default = "default_radius")]
        reset_radius: usize,
    },
    CoordinateNoise { magnitude: f64 },
    KExchange {
        strength: Strength,
        #[serde(default = "yes")]
        derangement: bool,
    },
    SwapInterchange {
        #[serde(default = "two")]
        swaps: usize,
        #[serde(default = "two")]
        interchanges: usize,
    },
    /// A fresh random solution every iteration: random restart when paired
    /// with Better.
    RandomRestart,
}

impl PerturbationSpec {
    /// The same perturbation with its strength knob set to `s`: bridge count,
    /// exchanged items, or both swap and interchange counts.
    pub fn with_strength(&self, s: &Strength, n: usize) -> Result<Self> {
        Ok(match self {
            PerturbationSpec::DoubleBridge { bias, reset_radius, .. } => {
                PerturbationSpec::DoubleBridge {
                    count: s.resolve(n, 1, n)?,
                    bias: *bias,
                    reset_radius: *reset_radius,
                }
            }
            PerturbationSpec::KExchange { derangement, .. } => PerturbationSpec::KExchange {
                strength: s.clone(),
                derangement: *derangement,
            },
            PerturbationSpec::SwapInterchange { .. } => {
                let k = s.resolve(n, 1, n)?;
                PerturbationSpec::SwapInterchange {
                    swaps: k,
                    interchanges: k,
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "perturbation `{}` has no strength parameter",
                    other.name()
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            PerturbationSpec::DoubleBridge { .. } => "double-bridge",
            PerturbationSpec::CoordinateNoise { .. } => "coordinate-noise",
            PerturbationSpec::KExchange { .. } => "k-exchange",
            PerturbationSpec::SwapInterchange { .. } => "swap-interchange",
            PerturbationSpec::RandomRestart => "random-restart",
        }
    }

    /// Short label for reports, e.g. `DBx5`, `k=n/4`, `RR`.
    pub fn label(&self) -> String {
        match self {
            PerturbationSpec::DoubleBridge { count, bias, .. } => match bias {
                Some(b) => format!("DBx{count}(bias {b})"),
                None => format!("DBx{count}"),
            },
            PerturbationSpec::CoordinateNoise { magnitude } => format!("noise {magnitude}"),
            PerturbationSpec::KExchange { strength, .. } => format!("k={strength}"),
            PerturbationSpec::SwapInterchange { swaps, interchanges } => {
                format!("swap{swaps}+int{interchanges}")
            }
            PerturbationSpec::RandomRestart => "RR".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AcceptanceSpec {
    Better,
    #[serde(alias = "random-walk")]
    Rw,
    /// A missing temperature is derived from the instance (flow shop only).
    Lsmc {
        #[serde(default)]
        temperature: Option<f64>,
        #[serde(default = "default_cooling")]
        cooling: f64,
    },
    ConstTemp {
        #[serde(default)]
        temperature: Option<f64>,
    },
    Restart {
        patience: u64,
        #[serde(default)]
        source: RestartSource,
    },
    DistanceEscape {
        patience: u64,
        copies: usize,
        keep: usize,
        min_distance: usize,
        max_attempts: usize,
    },
}

impl AcceptanceSpec {
    pub fn label(&self) -> String {
        match self {
            AcceptanceSpec::Better => "Better".into(),
            AcceptanceSpec::Rw => "RW".into(),
            AcceptanceSpec::Lsmc { .. } => "LSMC".into(),
            AcceptanceSpec::ConstTemp { .. } => "ConstTemp".into(),
            AcceptanceSpec::Restart { .. } => "Restart".into(),
            AcceptanceSpec::DistanceEscape { .. } => "DistanceEscape".into(),
        }
    }

    /// Resolves instance-dependent defaults into an engine criterion.
    pub fn resolve(&self, problem: &ProblemInstance) -> Result<AcceptanceCriterion> {
        let temperature = |t: Option<f64>| {
            t.or_else(|| default_temperature(problem)).ok_or_else(|| {
                Error::Config(format!(
                    "{} acceptance on {} needs an explicit temperature",
                    self.label(),
                    problem.kind()
                ))
            })
        };
        let c = match self {
            AcceptanceSpec::Better => AcceptanceCriterion::Better,
            AcceptanceSpec::Rw => AcceptanceCriterion::RandomWalk,
            AcceptanceSpec::Lsmc { temperature: t, cooling } => AcceptanceCriterion::Lsmc {
                temperature: temperature(*t)?,
                cooling: *cooling,
            },
            AcceptanceSpec::ConstTemp { temperature: t } => AcceptanceCriterion::ConstTemp {
                temperature: temperature(*t)?,
            },
            AcceptanceSpec::Restart { patience, source } => AcceptanceCriterion::Restart {
                patience: *patience,
                source: *source,
            },
            AcceptanceSpec::DistanceEscape {
                patience,
                copies,
                keep,
                min_distance,
                max_attempts,
            } => AcceptanceCriterion::DistanceEscape(EscapeParams {
                patience: *patience,
                copies: *copies,
                keep: *keep,
                min_distance: *min_distance,
                max_attempts: *max_attempts,
            }),
        };
        c.validate()?;
        Ok(c)
    }
}

/// Flow shop: total processing time / (10 · jobs · machines).
pub fn default_temperature(problem: &ProblemInstance) -> Option<f64> {
    match problem {
        ProblemInstance::Fsp(f) => Some(
            f.total_processing_time() as f64 / (10.0 * f.n_jobs() as f64 * f.n_machines() as f64),
        ),
        _ => None,
    }
}

/// The four component choices of one ILS variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Setup {
    #[serde(default)]
    pub initial: InitialSpec,
    pub local_search: LocalSearchSpec,
    pub perturbation: PerturbationSpec,
    pub acceptance: AcceptanceSpec,
}

impl Setup {
    /// Per-problem defaults: TSP greedy + 3-opt + one double bridge + Better;
    /// QAP random + pairwise exchange + k-exchange (k = n/4) + Restart;
    /// flow shop NEH + insert + (2, 2) swaps/interchanges + ConstTemp.
    pub fn default_for(kind: ProblemKind) -> Self {
        match kind {
            ProblemKind::Tsp => Setup {
                initial: InitialSpec::Greedy,
                local_search: LocalSearchSpec::ThreeOpt,
                perturbation: PerturbationSpec::DoubleBridge {
                    count: 1,
                    bias: None,
                    reset_radius: tsp::DEFAULT_RESET_RADIUS,
                },
                acceptance: AcceptanceSpec::Better,
            },
            ProblemKind::Qap => Setup {
                initial: InitialSpec::Random,
                local_search: LocalSearchSpec::PairwiseExchange,
                perturbation: PerturbationSpec::KExchange {
                    strength: Strength::Expr("n/4".into()),
                    derangement: true,
                },
                acceptance: AcceptanceSpec::Restart {
                    patience: 100,
                    source: RestartSource::Random,
                },
            },
            ProblemKind::Fsp => Setup {
                initial: InitialSpec::Greedy,
                local_search: LocalSearchSpec::Insert,
                perturbation: PerturbationSpec::SwapInterchange {
                    swaps: 2,
                    interchanges: 2,
                },
                acceptance: AcceptanceSpec::ConstTemp { temperature: None },
            },
        }
    }

    /// Checks that every component fits the problem. Runs no search.
    pub fn check(&self, problem: &ProblemInstance) -> Result<()> {
        let kind = problem.kind();
        let mismatch = |what: &str| {
            Err(Error::Config(format!("{what} cannot be used on a {kind} instance")))
        };
        match (kind, self.initial) {
            (ProblemKind::Tsp, _) | (_, InitialSpec::Random | InitialSpec::Greedy) => {}
            (_, InitialSpec::NearestNeighbor) => return mismatch("nearest-neighbour start"),
        }
        match (kind, self.local_search) {
            (ProblemKind::Tsp, LocalSearchSpec::TwoOpt | LocalSearchSpec::ThreeOpt)
            | (ProblemKind::Qap, LocalSearchSpec::PairwiseExchange)
            | (ProblemKind::Fsp, LocalSearchSpec::Insert | LocalSearchSpec::InsertAccelerated) => {}
            (_, ls) => return mismatch(&format!("local search {ls:?}")),
        }
        let n = problem.size();
        match (&self.perturbation, problem) {
            (PerturbationSpec::RandomRestart, _) => {}
            (PerturbationSpec::DoubleBridge { count, .. }, ProblemInstance::Tsp(_)) => {
                if *count == 0 {
                    return Err(Error::Config("double-bridge count must be at least 1".into()));
                }
                if n < tsp::MIN_DOUBLE_BRIDGE_SIZE {
                    return Err(Error::Config(format!(
                        "double bridge needs at least {} cities, got {n}",
                        tsp::MIN_DOUBLE_BRIDGE_SIZE
                    )));
                }
            }
            (PerturbationSpec::CoordinateNoise { magnitude }, ProblemInstance::Tsp(t)) => {
                if t.coords().is_none() {
                    return Err(Error::Unsupported(
                        "coordinate noise needs a coordinate-based instance".into(),
                    ));
                }
                if !(*magnitude >= 0.0) {
                    return Err(Error::Config(format!("noise magnitude must be >= 0, got {magnitude}")));
                }
            }
            (PerturbationSpec::KExchange { strength, .. }, ProblemInstance::Qap(_)) => {
                strength.resolve(n, 2, n)?;
                if n < 2 {
                    return Err(Error::Config("k-exchange needs at least 2 items".into()));
                }
            }
            (PerturbationSpec::SwapInterchange { swaps, interchanges }, ProblemInstance::Fsp(_)) => {
                if *swaps == 0 && *interchanges == 0 {
                    return Err(Error::Config(
                        "perturbation needs at least one swap or interchange".into(),
                    ));
                }
            }
            (p, _) => return mismatch(&format!("perturbation `{}`", p.name())),
        }
        if let AcceptanceSpec::DistanceEscape { min_distance, .. } = self.acceptance {
            if min_distance >= n {
                return Err(Error::Config(format!(
                    "escape distance {min_distance} is unreachable on size {n}"
                )));
            }
        }
        self.acceptance.resolve(problem)?;
        Ok(())
    }
}

/// Problem-agnostic outcome of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub seed: u64,
    pub best_cost: Cost,
    pub best: Vec<usize>,
    pub iterations: u64,
    pub n_local_searches: u64,
    pub n_accepted: u64,
    pub n_restarts: u64,
    pub n_escape_failures: u64,
    pub elapsed: f64,
    pub trace: Vec<TraceEntry>,
}

impl<S: Solution> From<RunRecord<S>> for RunSummary {
    fn from(r: RunRecord<S>) -> Self {
        RunSummary {
            seed: r.seed,
            best_cost: r.best.cost(),
            best: r.best.permutation().to_vec(),
            iterations: r.iterations,
            n_local_searches: r.n_local_searches,
            n_accepted: r.n_accepted,
            n_restarts: r.n_restarts,
            n_escape_failures: r.n_escape_failures,
            elapsed: r.elapsed,
            trace: r.trace,
        }
    }
}

pub fn run_ils(
    problem: &ProblemInstance,
    setup: &Setup,
    termination: Termination,
    seed: u64,
) -> Result<RunSummary> {
    run_ils_with(problem, setup, termination, seed, RunOptions::default(), |_| {})
}

/// Builds the components for `problem` and runs the engine.
pub fn run_ils_with(
    problem: &ProblemInstance,
    setup: &Setup,
    termination: Termination,
    seed: u64,
    options: RunOptions,
    observer: impl FnMut(&TraceEntry),
) -> Result<RunSummary> {
    setup.check(problem)?;
    let acceptance = setup.acceptance.resolve(problem)?;
    Ok(match problem {
        ProblemInstance::Tsp(t) => {
            let c = tsp_components(t, setup, acceptance)?;
            engine::run_with(c, termination, seed, options, observer)?.into()
        }
        ProblemInstance::Qap(q) => {
            let c = qap_components(q, setup, acceptance)?;
            engine::run_with(c, termination, seed, options, observer)?.into()
        }
        ProblemInstance::Fsp(f) => {
            let c = fsp_components(f, setup, acceptance)?;
            engine::run_with(c, termination, seed, options, observer)?.into()
        }
    })
}

/// Engine components for a TSP instance.
pub fn tsp_components<'a>(
    inst: &'a TspInstance,
    setup: &Setup,
    acceptance: AcceptanceCriterion,
) -> Result<Components<'a, Tour>> {
    let initial: Box<dyn engine::Construct<Tour>> = match setup.initial {
        InitialSpec::Random => Box::new(move |rng: &mut Rng| tsp::random_tour(inst, rng)),
        InitialSpec::Greedy => Box::new(move |_: &mut Rng| tsp::greedy_tour(inst)),
        InitialSpec::NearestNeighbor => Box::new(move |rng: &mut Rng| {
            tsp::nearest_neighbor_tour(inst, rng.random_range(0..inst.n()))
        }),
    };
    let neighborhood = match setup.local_search {
        LocalSearchSpec::TwoOpt => tsp::Neighborhood::TwoOpt,
        LocalSearchSpec::ThreeOpt => tsp::Neighborhood::ThreeOpt,
        other => return Err(Error::Config(format!("local search {other:?} cannot be used on a tsp instance"))),
    };
    let mut search = TourSearch::new(neighborhood);
    let local_search = Box::new(move |t: &mut Tour| {
        search.run(inst, t);
    });
    let perturbation: Box<dyn engine::Perturbation<Tour>> = match setup.perturbation.clone() {
        PerturbationSpec::DoubleBridge {
            count,
            bias,
            reset_radius,
        } => Box::new(move |t: &Tour, _: &engine::SearchHistory<Tour>, rng: &mut Rng| {
            let mut kicked = match bias {
                Some(b) => {
                    let mut k = tsp::biased_double_bridge(inst, t, b, rng).expect("size checked");
                    for _ in 1..count {
                        let next =
                            tsp::biased_double_bridge(inst, &k.tour, b, rng).expect("size checked");
                        k.tour = next.tour;
                        k.breakpoints.extend(next.breakpoints);
                    }
                    k
                }
                None => tsp::k_double_bridge(inst, t, count, rng).expect("size checked"),
            };
            kicked.tour.set_all_dont_look(true);
            tsp::reset_dont_look_after_perturbation(inst, &mut kicked.tour, &kicked.breakpoints, reset_radius);
            kicked.tour
        }),
        PerturbationSpec::CoordinateNoise { magnitude } => {
            Box::new(move |t: &Tour, _: &engine::SearchHistory<Tour>, rng: &mut Rng| {
                tsp::coordinate_noise_perturbation(inst, t, magnitude, rng).expect("checked coordinates")
            })
        }
        PerturbationSpec::RandomRestart => {
            Box::new(move |_: &Tour, _: &engine::SearchHistory<Tour>, rng: &mut Rng| tsp::random_tour(inst, rng))
        }
        other => {
            return Err(Error::Config(format!(
                "perturbation `{}` cannot be used on a tsp instance",
                other.name()
            )))
        }
    };
    let restart: Option<Box<dyn engine::Construct<Tour>>> = match &acceptance {
        AcceptanceCriterion::Restart { source, .. } => Some(match source {
            RestartSource::Random => Box::new(move |rng: &mut Rng| tsp::random_tour(inst, rng)),
            RestartSource::Greedy => Box::new(move |rng: &mut Rng| {
                tsp::nearest_neighbor_tour(inst, rng.random_range(0..inst.n()))
            }),
        }),
        _ => None,
    };
    Ok(Components {
        size: inst.n(),
        initial,
        local_search,
        perturbation,
        acceptance,
        restart,
        distance: Some(Box::new(|a: &Tour, b: &Tour| {
            tsp::tour_distance(a, b).expect("same instance")
        })),
    })
}

/// Engine components for a QAP instance.
pub fn qap_components<'a>(
    inst: &'a QapInstance,
    setup: &Setup,
    acceptance: AcceptanceCriterion,
) -> Result<Components<'a, Assignment>> {
    let initial: Box<dyn engine::Construct<Assignment>> = match setup.initial {
        InitialSpec::Random => Box::new(move |rng: &mut Rng| qap::random_assignment(inst, rng)),
        InitialSpec::Greedy => Box::new(move |rng: &mut Rng| qap::greedy_assignment(inst, rng)),
        InitialSpec::NearestNeighbor => {
            return Err(Error::Config("nearest-neighbour start cannot be used on a qap instance".into()))
        }
    };
    if setup.local_search != LocalSearchSpec::PairwiseExchange {
        return Err(Error::Config(format!(
            "local search {:?} cannot be used on a qap instance",
            setup.local_search
        )));
    }
    let local_search = Box::new(move |a: &mut Assignment| {
        qap::local_search_qap(inst, a);
    });
    let n = inst.n();
    let perturbation: Box<dyn engine::Perturbation<Assignment>> = match &setup.perturbation {
        PerturbationSpec::KExchange {
            strength,
            derangement,
        } => {
            let k = strength.resolve(n, 2, n)?;
            let derangement = *derangement;
            Box::new(
                move |a: &Assignment, _: &engine::SearchHistory<Assignment>, rng: &mut Rng| {
                    qap::k_exchange(inst, a, k, derangement, rng).expect("k in range")
                },
            )
        }
        PerturbationSpec::RandomRestart => Box::new(
            move |_: &Assignment, _: &engine::SearchHistory<Assignment>, rng: &mut Rng| {
                qap::random_assignment(inst, rng)
            },
        ),
        other => {
            return Err(Error::Config(format!(
                "perturbation `{}` cannot be used on a qap instance",
                other.name()
            )))
        }
    };
    let restart: Option<Box<dyn engine::Construct<Assignment>>> = match &acceptance {
        AcceptanceCriterion::Restart { source, .. } => Some(match source {
            RestartSource::Random => Box::new(move |rng: &mut Rng| qap::random_assignment(inst, rng)),
            RestartSource::Greedy => Box::new(move |rng: &mut Rng| qap::greedy_assignment(inst, rng)),
        }),
        _ => None,
    };
    Ok(Components {
        size: n,
        initial,
        local_search,
        perturbation,
        acceptance,
        restart,
        distance: Some(Box::new(|a: &Assignment, b: &Assignment| {
            perm::hamming(a.perm(), b.perm())
        })),
    })
}

/// Engine components for a flow-shop instance.
pub fn fsp_components<'a>(
    inst: &'a FspInstance,
    setup: &Setup,
    acceptance: AcceptanceCriterion,
) -> Result<Components<'a, JobSequence>> {
    let initial: Box<dyn engine::Construct<JobSequence>> = match setup.initial {
        InitialSpec::Random => Box::new(move |rng: &mut Rng| fsp::random_sequence(inst, rng)),
        InitialSpec::Greedy => Box::new(move |_: &mut Rng| fsp::neh(inst)),
        InitialSpec::NearestNeighbor => {
            return Err(Error::Config("nearest-neighbour start cannot be used on a fsp instance".into()))
        }
    };
    let accelerated = match setup.local_search {
        LocalSearchSpec::Insert => false,
        LocalSearchSpec::InsertAccelerated => true,
        other => return Err(Error::Config(format!("local search {other:?} cannot be used on a fsp instance"))),
    };
    let local_search = Box::new(move |s: &mut JobSequence| {
        fsp::local_search_insert(inst, s, accelerated);
    });
    let perturbation: Box<dyn engine::Perturbation<JobSequence>> = match &setup.perturbation {
        PerturbationSpec::SwapInterchange {
            swaps,
            interchanges,
        } => {
            let (swaps, interchanges) = (*swaps, *interchanges);
            Box::new(
                move |s: &JobSequence, _: &engine::SearchHistory<JobSequence>, rng: &mut Rng| {
                    fsp::fsp_perturb(inst, s, swaps, interchanges, rng).expect("counts checked")
                },
            )
        }
        PerturbationSpec::RandomRestart => Box::new(
            move |_: &JobSequence, _: &engine::SearchHistory<JobSequence>, rng: &mut Rng| {
                fsp::random_sequence(inst, rng)
            },
        ),
        other => {
            return Err(Error::Config(format!(
                "perturbation `{}` cannot be used on a fsp instance",
                other.name()
            )))
        }
    };
    let restart: Option<Box<dyn engine::Construct<JobSequence>>> = match &acceptance {
        AcceptanceCriterion::Restart { source, .. } => Some(match source {
            RestartSource::Random => Box::new(move |rng: &mut Rng| fsp::random_sequence(inst, rng)),
            RestartSource::Greedy => Box::new(move |rng: &mut Rng| fsp::random_order_neh(inst, rng)),
        }),
        _ => None,
    };
    Ok(Components {
        size: inst.n_jobs(),
        initial,
        local_search,
        perturbation,
        acceptance,
        restart,
        distance: Some(Box::new(|a: &JobSequence, b: &JobSequence| {
            perm::hamming(a.order(), b.order())
        })),
    })
}

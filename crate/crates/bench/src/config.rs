//! Experiment configuration, read from TOML.
//!
//! ```toml
//! name = "qap-strength"
//! seeds = [1, 2, 3]
//! trajectory_every = 50      # optional, iterations between samples
//! threads = 1                # optional, concurrent runs
//! layout = "machine-major"   # optional, flow-shop matrix layout
//!
//! [termination]              # at least one bound
//! time = 30.0                # seconds
//! iterations = 5000
//! target = 0
//!
//! [[instances]]
//! path = "../fixtures/qap/hosp30.dat"   # relative to this file
//! best_known = 123456                   # optional, overrides the sidecar
//!
//! [[instances]]
//! generate = { kind = "euclidean", n = 100, seed = 7 }
//!
//! [[combinations]]
//! label = "Restart"                     # optional
//! local_search = "pairwise-exchange"    # each component optional,
//! perturbation = { kind = "k-exchange", strength = "n/4" }  # problem
//! acceptance = { kind = "restart", patience = 100 }         # defaults fill in
//! strengths = [3, "n/12", "n/4", "n"]   # optional sweep
//! ```
//!
//! Best-known costs for file instances are looked up in a `best_known.toml`
//! next to the instance (`stem = cost` lines) unless given inline.

use crate::{Error, Result};
use ils_core::fsp::{FspInstance, Layout};
use ils_core::problem::{
    AcceptanceSpec, InitialSpec, LocalSearchSpec, PerturbationSpec, ProblemInstance, Setup,
    Strength,
};
use ils_core::qap::QapInstance;
use ils_core::tsp::TspInstance;
use ils_core::{rng, Cost, Termination};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

pub const BEST_KNOWN_FILE: &str = "best_known.toml";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub seeds: Vec<u64>,
    pub termination: TerminationConfig,
    pub instances: Vec<InstanceEntry>,
    pub combinations: Vec<Combination>,
    #[serde(default)]
    pub trajectory_every: Option<u64>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub layout: Layout,
}

fn default_name() -> String {
    "experiment".into()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TerminationConfig {
    /// Seconds of wall time.
    #[serde(default)]
    pub time: Option<f64>,
    #[serde(default)]
    pub iterations: Option<u64>,
    #[serde(default)]
    pub target: Option<Cost>,
}

impl TerminationConfig {
    pub fn resolve(&self) -> Result<Termination> {
        let max_wall_time = match self.time {
            Some(t) if t.is_finite() && t > 0.0 => Some(Duration::from_secs_f64(t)),
            Some(t) => return Err(Error::Config(format!("time limit must be positive, got {t}"))),
            None => None,
        };
        let t = Termination {
            max_wall_time,
            max_iterations: self.iterations,
            target_cost: self.target,
        };
        t.validate()?;
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceEntry {
    #[serde(flatten)]
    pub source: InstanceSource,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub best_known: Option<Cost>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSource {
    Path { path: PathBuf },
    Generate { generate: Generator },
}

/// Synthetic instances, reproducible from their parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Generator {
    /// Uniform integer points on a `side` × `side` grid.
    Euclidean {
        n: usize,
        seed: u64,
        #[serde(default = "default_side")]
        side: u32,
    },
    /// Uniform flow and distance entries in `0..=max`.
    QapUniform {
        n: usize,
        seed: u64,
        #[serde(default = "default_max")]
        max: i64,
    },
    /// Taillard's flow-shop generator (times in 1..=99).
    Taillard { jobs: usize, machines: usize, seed: i64 },
}

fn default_side() -> u32 {
    1000
}

fn default_max() -> i64 {
    99
}

impl Generator {
    pub fn name(&self) -> String {
        match self {
            Generator::Euclidean { n, seed, .. } => format!("euclid{n}-s{seed}"),
            Generator::QapUniform { n, seed, .. } => format!("qapu{n}-s{seed}"),
            Generator::Taillard { jobs, machines, seed } => format!("ta{jobs}x{machines}-s{seed}"),
        }
    }

    pub fn generate(&self) -> Result<ProblemInstance> {
        let name = self.name();
        Ok(match *self {
            Generator::Euclidean { n, seed, side } => {
                if side == 0 {
                    return Err(Error::Config("grid side must be positive".into()));
                }
                ProblemInstance::Tsp(TspInstance::random_uniform(name, n, side, &mut rng::seeded(seed))?)
            }
            Generator::QapUniform { n, seed, max } => {
                if n == 0 || max < 0 {
                    return Err(Error::Config(format!("bad QAP generator parameters n={n} max={max}")));
                }
                ProblemInstance::Qap(QapInstance::random_uniform(name, n, max, &mut rng::seeded(seed)))
            }
            Generator::Taillard { jobs, machines, seed } => {
                if jobs == 0 || machines == 0 || seed <= 0 {
                    return Err(Error::Config(
                        "Taillard generator needs positive jobs, machines and seed".into(),
                    ));
                }
                ProblemInstance::Fsp(FspInstance::taillard(name, seed, jobs, machines))
            }
        })
    }
}

/// One ILS variant. Missing components take the problem's defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Combination {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub initial: Option<InitialSpec>,
    #[serde(default)]
    pub local_search: Option<LocalSearchSpec>,
    #[serde(default)]
    pub perturbation: Option<PerturbationSpec>,
    #[serde(default)]
    pub acceptance: Option<AcceptanceSpec>,
    #[serde(default)]
    pub strengths: Vec<Strength>,
}

impl Combination {
    pub fn setup_for(&self, problem: &ProblemInstance) -> Setup {
        let d = Setup::default_for(problem.kind());
        Setup {
            initial: self.initial.unwrap_or(d.initial),
            local_search: self.local_search.unwrap_or(d.local_search),
            perturbation: self.perturbation.clone().unwrap_or(d.perturbation),
            acceptance: self.acceptance.clone().unwrap_or(d.acceptance),
        }
    }

    /// Setups to run on `problem`: one per strength, or the single setup when
    /// no sweep is configured. Each comes with its strength label.
    pub fn expand(&self, problem: &ProblemInstance) -> Result<Vec<(Option<String>, Setup)>> {
        let base = self.setup_for(problem);
        if self.strengths.is_empty() {
            return Ok(vec![(None, base)]);
        }
        self.strengths
            .iter()
            .map(|s| {
                let perturbation = base.perturbation.with_strength(s, problem.size())?;
                Ok((
                    Some(s.label()),
                    Setup {
                        perturbation,
                        ..base.clone()
                    },
                ))
            })
            .collect()
    }

    /// Report label: the explicit one, else `RR` for the random-restart
    /// baseline, else perturbation and acceptance labels.
    pub fn label_for(&self, problem: &ProblemInstance) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        let s = self.setup_for(problem);
        match (&s.perturbation, &s.acceptance) {
            (PerturbationSpec::RandomRestart, AcceptanceSpec::Better) => "RR".into(),
            (p, a) if !self.strengths.is_empty() => format!("{}+{}", p.name(), a.label()),
            (p, a) => format!("{}+{}", p.label(), a.label()),
        }
    }
}

impl ExperimentConfig {
    /// Reads a config file; relative instance paths are resolved against
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&text, base)
    }

    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: ExperimentConfig = toml::from_str(text)?;
        for inst in &mut cfg.instances {
            if let InstanceSource::Path { path } = &mut inst.source {
                if path.is_relative() {
                    *path = base_dir.join(&*path);
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Config("seed list is empty".into()));
        }
        if self.instances.is_empty() {
            return Err(Error::Config("no instances configured".into()));
        }
        if self.combinations.is_empty() {
            return Err(Error::Config("no component combinations configured".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        if self.trajectory_every == Some(0) {
            return Err(Error::Config("trajectory_every must be at least 1".into()));
        }
        self.termination.resolve()?;
        Ok(())
    }
}

/// Best-known costs keyed by instance name.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BestKnown(pub BTreeMap<String, Cost>);

impl BestKnown {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// The sidecar next to `instance`, or an empty table when there is none.
    pub fn sidecar_for(instance: &Path) -> Result<Self> {
        let path = instance
            .parent()
            .unwrap_or(Path::new("."))
            .join(BEST_KNOWN_FILE);
        match std::fs::read_to_string(&path) {
            Ok(text) => Self::parse(&text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self::default()),
            Err(e) => Err(Error::io(path, e)),
        }
    }

    pub fn get(&self, name: &str) -> Option<Cost> {
        self.0.get(name).copied()
    }
}

/// An instance ready to run, with its report name and baseline.
#[derive(Debug, Clone)]
pub struct ResolvedInstance {
    pub name: String,
    pub problem: ProblemInstance,
    pub best_known: Option<Cost>,
}

impl InstanceEntry {
    pub fn resolve(&self, layout: Layout) -> Result<ResolvedInstance> {
        let (problem, sidecar) = match &self.source {
            InstanceSource::Path { path } => {
                if !path.is_file() {
                    return Err(Error::io(
                        path,
                        std::io::Error::new(std::io::ErrorKind::NotFound, "instance file not found"),
                    ));
                }
                let p = ProblemInstance::load(path, layout)?;
                let bk = BestKnown::sidecar_for(path)?.get(p.name());
                (p, bk)
            }
            InstanceSource::Generate { generate } => (generate.generate()?, None),
        };
        Ok(ResolvedInstance {
            name: self.name.clone().unwrap_or_else(|| problem.name().to_string()),
            best_known: self.best_known.or(sidecar),
            problem,
        })
    }
}

//! Dense-subgraph detectors for collusion rings.
//!
//! | algorithm         | reviewer graph | bipartite graph |
//! |-------------------|----------------|-----------------|
//! | `dsd`             | yes            | yes             |
//! | `oqc-greedy`      | yes            | yes             |
//! | `oqc-local`       | yes            | yes             |
//! | `telltail`        | yes            | yes             |
//! | `fraudar`         | no             | yes             |
//! | `oqc-specialized` | no             | yes             |
//!
//! Generic detectors run on a [`WeightedGraph`]: the reviewer graph with each
//! directed edge weighing 1 (TellTail keeps reciprocated pairs only), or the
//! unlabeled bipartite graph. Paper vertices are dropped from bipartite
//! outputs by [`detect_bi`].

mod dsd;
mod fraudar;
mod init;
mod local;
mod oqc;
mod specialized;
mod telltail;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dataset::ConferenceDataset;
use crate::error::{Error, Result};
use crate::graph::{build_bi, build_uni, BiEdgeChoice, BiGraph, UniGraph, WeightedGraph};

pub use dsd::{average_degree_objective, dsd_exact};
pub use fraudar::{fraudar, FraudarGraph};
pub use init::{cycle_scores, heuristic_start_bi, heuristic_start_reviewers, heuristic_start_uni, triangle_scores};
pub use local::{is_local_optimum, InitPlan, EPS};
pub use oqc::{oqc_greedy, oqc_local, surplus_objective};
pub use specialized::{oqc_specialized, specialized_objective};
pub use telltail::{adjusted_mass, telltail, telltail_objective, telltail_z, GPTail};

/// Default quasi-clique parameter.
pub const DEFAULT_ALPHA: f64 = 1.0 / 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Dsd,
    OqcGreedy,
    OqcLocal,
    TellTail,
    Fraudar,
    OqcSpecialized,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Dsd,
        Algorithm::OqcGreedy,
        Algorithm::OqcLocal,
        Algorithm::TellTail,
        Algorithm::Fraudar,
        Algorithm::OqcSpecialized,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dsd => "dsd",
            Algorithm::OqcGreedy => "oqc-greedy",
            Algorithm::OqcLocal => "oqc-local",
            Algorithm::TellTail => "telltail",
            Algorithm::Fraudar => "fraudar",
            Algorithm::OqcSpecialized => "oqc-specialized",
        }
    }

    pub fn supports(self, repr: Representation) -> bool {
        repr == Representation::Bi || !matches!(self, Algorithm::Fraudar | Algorithm::OqcSpecialized)
    }

    /// Algorithms that run on `repr`, in canonical order.
    pub fn supported_on(repr: Representation) -> Vec<Algorithm> {
        Self::ALL.into_iter().filter(|a| a.supports(repr)).collect()
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|a| a.name() == key)
            .ok_or_else(|| Error::config(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Representation {
    /// Directed reviewer graph.
    Uni,
    /// Labeled reviewer/paper graph.
    Bi,
}

impl Representation {
    pub fn name(self) -> &'static str {
        match self {
            Representation::Uni => "uni",
            Representation::Bi => "bi",
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uni" | "unipartite" => Ok(Representation::Uni),
            "bi" | "bipartite" => Ok(Representation::Bi),
            _ => Err(Error::config(format!("unknown representation `{s}`"))),
        }
    }
}

macro_rules! string_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(Algorithm);
string_serde!(Representation);
string_serde!(Initialization);

/// Starting set that produced a local-search result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Initialization {
    /// The algorithm is not a local search.
    None,
    Heuristic,
    Random(usize),
}

impl fmt::Display for Initialization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Initialization::None => f.write_str("none"),
            Initialization::Heuristic => f.write_str("heuristic"),
            Initialization::Random(i) => write!(f, "random-{i}"),
        }
    }
}

impl FromStr for Initialization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Initialization::None),
            "heuristic" => Ok(Initialization::Heuristic),
            _ => s
                .strip_prefix("random-")
                .and_then(|i| i.parse().ok())
                .map(Initialization::Random)
                .ok_or_else(|| Error::config(format!("unknown initialization `{s}`"))),
        }
    }
}

/// Raw detector output in the detector's own vertex space.
#[derive(Clone, Debug, PartialEq)]
pub struct Detection {
    pub vertices: Vec<usize>,
    pub objective: f64,
    pub initialization: Initialization,
    /// Designated empty result for edgeless or degenerate inputs.
    pub empty: bool,
}

impl Detection {
    pub fn empty() -> Self {
        Detection {
            vertices: Vec::new(),
            objective: 0.0,
            initialization: Initialization::None,
            empty: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectConfig {
    pub alpha: f64,
    /// Starting sets for local search; `None` picks the per-algorithm
    /// default (heuristic only for OQC-Local on the reviewer graph, one
    /// heuristic and ten random starts otherwise).
    pub init: Option<InitPlan>,
    pub seed: u64,
    pub tail: GPTail,
    pub edge_choice: BiEdgeChoice,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            alpha: DEFAULT_ALPHA,
            init: None,
            seed: 0,
            tail: GPTail::default(),
            edge_choice: BiEdgeChoice::BidsOnly,
        }
    }
}

impl DetectConfig {
    pub fn plan_for(&self, algorithm: Algorithm, repr: Representation) -> InitPlan {
        self.init.unwrap_or(match (algorithm, repr) {
            (Algorithm::OqcLocal, Representation::Uni) => InitPlan::HEURISTIC_ONLY,
            _ => InitPlan::STANDARD,
        })
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::config(format!("alpha must be positive, got {}", self.alpha)));
        }
        self.tail.validate()
    }
}

/// Reviewer-level detection output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionResult {
    pub algorithm: Algorithm,
    pub representation: Representation,
    pub seed: u64,
    /// Detected reviewers, ascending.
    pub subset: Vec<usize>,
    /// Vertices returned by the detector before paper vertices were dropped
    /// (papers are `n_reviewers + p`).
    pub raw_vertices: Vec<usize>,
    pub objective: f64,
    pub initialization: Initialization,
    pub elapsed_secs: f64,
    pub empty: bool,
}

fn finish(
    algorithm: Algorithm,
    repr: Representation,
    cfg: &DetectConfig,
    n_reviewers: usize,
    started: Instant,
    d: Detection,
) -> DetectionResult {
    DetectionResult {
        algorithm,
        representation: repr,
        seed: cfg.seed,
        subset: d.vertices.iter().copied().filter(|&v| v < n_reviewers).collect(),
        raw_vertices: d.vertices,
        objective: d.objective,
        initialization: d.initialization,
        elapsed_secs: started.elapsed().as_secs_f64(),
        empty: d.empty,
    }
}

fn unsupported(algorithm: Algorithm, repr: Representation) -> Error {
    Error::Unsupported {
        algorithm: algorithm.name().into(),
        representation: repr.name().into(),
    }
}

/// Runs `algorithm` on the directed reviewer graph.
pub fn detect_uni(g: &UniGraph, algorithm: Algorithm, cfg: &DetectConfig) -> Result<DetectionResult> {
    cfg.validate()?;
    let repr = Representation::Uni;
    if !algorithm.supports(repr) {
        return Err(unsupported(algorithm, repr));
    }
    let started = Instant::now();
    let plan = cfg.plan_for(algorithm, repr);
    let penalty = 2.0 * cfg.alpha;
    let d = match algorithm {
        Algorithm::Dsd => dsd_exact(&g.to_weighted()),
        Algorithm::OqcGreedy => oqc_greedy(&g.to_weighted(), penalty),
        Algorithm::OqcLocal => oqc_local(&g.to_weighted(), penalty, plan, cfg.seed, || heuristic_start_uni(g)),
        Algorithm::TellTail => telltail(&g.reciprocal(), &cfg.tail, plan, cfg.seed, || heuristic_start_uni(g))?,
        Algorithm::Fraudar | Algorithm::OqcSpecialized => unreachable!("rejected above"),
    };
    Ok(finish(algorithm, repr, cfg, g.n_vertices(), started, d))
}

/// Runs `algorithm` on the bipartite graph and keeps reviewer vertices.
pub fn detect_bi(g: &BiGraph, algorithm: Algorithm, cfg: &DetectConfig) -> Result<DetectionResult> {
    cfg.validate()?;
    let repr = Representation::Bi;
    let started = Instant::now();
    let plan = cfg.plan_for(algorithm, repr);
    let unlabeled = || -> WeightedGraph { g.unlabeled(cfg.edge_choice) };
    let d = match algorithm {
        Algorithm::Dsd => dsd_exact(&unlabeled()),
        Algorithm::OqcGreedy => oqc_greedy(&unlabeled(), cfg.alpha),
        Algorithm::OqcLocal => oqc_local(&unlabeled(), cfg.alpha, plan, cfg.seed, || heuristic_start_bi(g)),
        Algorithm::TellTail => telltail(&unlabeled(), &cfg.tail, plan, cfg.seed, || heuristic_start_bi(g))?,
        Algorithm::Fraudar => fraudar(&FraudarGraph::new(g, cfg.edge_choice)),
        Algorithm::OqcSpecialized => {
            oqc_specialized(g, cfg.alpha, plan, cfg.seed, || heuristic_start_reviewers(g))
        }
    };
    Ok(finish(algorithm, repr, cfg, g.n_reviewers(), started, d))
}

/// Builds the requested graph from `ds` and runs `algorithm` on it.
pub fn run_detection(
    ds: &ConferenceDataset,
    algorithm: Algorithm,
    repr: Representation,
    cfg: &DetectConfig,
) -> Result<DetectionResult> {
    if !algorithm.supports(repr) {
        return Err(unsupported(algorithm, repr));
    }
    match repr {
        Representation::Uni => detect_uni(&build_uni(ds), algorithm, cfg),
        Representation::Bi => detect_bi(&build_bi(ds), algorithm, cfg),
    }
}

//! Seeded experiment sweeps over a (ring size x density) grid: detection
//! accuracy, manipulation success and honest-group census tables.
//!
//! Every trial derives its seed from `(master seed, k, density, trial)`, so
//! results do not depend on the number of workers or on which detectors run.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assign::{assign_dataset, jaccard, success_metrics, DEFAULT_PAPER_LOAD, DEFAULT_REVIEWER_CAP};
use crate::census::{count_bi_groups_multi, count_uni_groups_multi, CensusCell};
use crate::dataset::ConferenceDataset;
use crate::detect::{detect_bi, detect_uni, Algorithm, DetectConfig, Representation};
use crate::error::{Error, Result};
use crate::graph::{build_bi, build_uni, BiGraph, UniGraph};
use crate::inject::{inject_bi, inject_bi_dataset, inject_uni, inject_uni_dataset, ring_only_bi, ring_only_uni, CollusionPlan};
use crate::rng::{derive_seed, name_key};

pub const DEFAULT_TRIALS: usize = 50;

/// Grid and settings shared by detection and success sweeps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub representation: Representation,
    pub ks: Vec<usize>,
    /// Edge densities (reviewer graph) or bid densities (bipartite). A
    /// density of 0 draws the ring without planting anything.
    pub densities: Vec<f64>,
    pub trials: usize,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    pub workers: usize,
    pub detect: DetectConfig,
    pub paper_load: usize,
    pub reviewer_cap: usize,
}

impl SweepConfig {
    /// A single-cell sweep running every detector that supports `repr`.
    pub fn new(repr: Representation) -> Self {
        SweepConfig {
            representation: repr,
            ks: vec![10],
            densities: vec![1.0],
            trials: DEFAULT_TRIALS,
            algorithms: Algorithm::supported_on(repr),
            seed: 0,
            workers: 1,
            detect: DetectConfig::default(),
            paper_load: DEFAULT_PAPER_LOAD,
            reviewer_cap: DEFAULT_REVIEWER_CAP,
        }
    }

    /// The full heatmap grid: k = 4, 6, ..., 30 with
    /// densities 0.5..1.0 (reviewer graph) or 0.2..1.0 (bipartite) in steps
    /// of 0.1.
    pub fn paper_grid(repr: Representation) -> Self {
        let lo = match repr {
            Representation::Uni => 5,
            Representation::Bi => 2,
        };
        SweepConfig {
            ks: (4..=30).step_by(2).collect(),
            densities: (lo..=10).map(|i| i as f64 / 10.0).collect(),
            ..Self::new(repr)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ks.is_empty() || self.densities.is_empty() {
            return Err(Error::config("sweep grid must have at least one k and one density"));
        }
        if let Some(k) = self.ks.iter().find(|&&k| k < 2) {
            return Err(Error::config(format!("ring size must be at least 2, got {k}")));
        }
        if let Some(d) = self.densities.iter().find(|d| !(0.0..=1.0).contains(*d)) {
            return Err(Error::config(format!("density {d} outside [0, 1]")));
        }
        if self.trials == 0 {
            return Err(Error::config("trials must be at least 1"));
        }
        if self.workers == 0 {
            return Err(Error::config("workers must be at least 1"));
        }
        if let Some(a) = self.algorithms.iter().find(|a| !a.supports(self.representation)) {
            return Err(Error::Unsupported {
                algorithm: a.name().into(),
                representation: self.representation.name().into(),
            });
        }
        Ok(())
    }

    fn cells(&self) -> Vec<(usize, f64, usize)> {
        let mut out = Vec::new();
        for &k in &self.ks {
            for &d in &self.densities {
                for t in 0..self.trials {
                    out.push((k, d, t));
                }
            }
        }
        out
    }
}

/// Seed of one trial.
pub fn trial_seed(master: u64, k: usize, density: f64, trial: usize) -> u64 {
    derive_seed(&[master, k as u64, density.to_bits(), trial as u64])
}

/// Graph the detectors see in one trial.
pub enum TrialGraph<'a> {
    Uni(&'a UniGraph),
    Bi(&'a BiGraph),
}

/// Everything a detector may look at in one trial. The plan is exposed so
/// that reference detectors can be written against the ground truth.
pub struct TrialContext<'a> {
    pub graph: TrialGraph<'a>,
    pub plan: &'a CollusionPlan,
    pub seed: u64,
}

/// Something that proposes a reviewer set for a trial.
pub trait Detector: Sync {
    fn name(&self) -> String;
    /// Detected reviewers.
    fn detect(&self, ctx: &TrialContext<'_>) -> Result<Vec<usize>>;
}

/// One of the built-in algorithms with fixed settings.
pub struct AlgorithmDetector {
    pub algorithm: Algorithm,
    pub config: DetectConfig,
}

impl Detector for AlgorithmDetector {
    fn name(&self) -> String {
        self.algorithm.name().to_string()
    }

    fn detect(&self, ctx: &TrialContext<'_>) -> Result<Vec<usize>> {
        let cfg = DetectConfig {
            seed: ctx.seed,
            ..self.config.clone()
        };
        let r = match ctx.graph {
            TrialGraph::Uni(g) => detect_uni(g, self.algorithm, &cfg)?,
            TrialGraph::Bi(g) => detect_bi(g, self.algorithm, &cfg)?,
        };
        Ok(r.subset)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorOutcome {
    pub algorithm: String,
    pub subset: Vec<usize>,
    pub jaccard: Option<f64>,
    /// Both the output and the ring were empty.
    pub vacuous: bool,
    pub elapsed_secs: f64,
    pub error: Option<String>,
}

/// One trial of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub k: usize,
    pub density: f64,
    pub trial: usize,
    pub seed: u64,
    pub colluders: Vec<usize>,
    pub achieved_density: Option<f64>,
    pub detectors: Vec<DetectorOutcome>,
    pub paper_frac: Option<f64>,
    pub colluder_frac: Option<f64>,
    pub elapsed_secs: f64,
    /// Injection, assignment or metric failure for the whole trial.
    pub error: Option<String>,
}

impl TrialRecord {
    fn new(k: usize, density: f64, trial: usize, seed: u64) -> Self {
        TrialRecord {
            k,
            density,
            trial,
            seed,
            colluders: Vec::new(),
            achieved_density: None,
            detectors: Vec::new(),
            paper_frac: None,
            colluder_frac: None,
            elapsed_secs: 0.0,
            error: None,
        }
    }
}

/// Mean and standard error of one metric in one cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub k: usize,
    pub density: f64,
    pub algorithm: String,
    pub metric: String,
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
}

#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub records: Vec<TrialRecord>,
    pub summary: Vec<SummaryRow>,
}

/// Sample mean and standard error (sample standard deviation over
/// `sqrt(n)`); the error is 0 for a single value and both are NaN for none.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))
}

/// Detection sweep with the configured algorithms.
pub fn sweep_detection(cfg: &SweepConfig, ds: &ConferenceDataset) -> Result<SweepOutput> {
    let detectors: Vec<AlgorithmDetector> = cfg
        .algorithms
        .iter()
        .map(|&algorithm| AlgorithmDetector {
            algorithm,
            config: cfg.detect.clone(),
        })
        .collect();
    let refs: Vec<&dyn Detector> = detectors.iter().map(|d| d as &dyn Detector).collect();
    sweep_detection_with(cfg, ds, &refs)
}

/// Detection sweep with caller-supplied detectors. Each trial plants a ring
/// on the graph and scores every detector by Jaccard similarity to it.
pub fn sweep_detection_with(cfg: &SweepConfig, ds: &ConferenceDataset, detectors: &[&dyn Detector]) -> Result<SweepOutput> {
    cfg.validate()?;
    let authors = ds.author_reviewers();
    let base = Base::new(cfg.representation, ds);
    let records = pool(cfg.workers)?.install(|| {
        cfg.cells()
            .into_par_iter()
            .map(|(k, density, trial)| {
                let seed = trial_seed(cfg.seed, k, density, trial);
                let started = Instant::now();
                let mut rec = TrialRecord::new(k, density, trial, seed);
                match base.plant(&authors, k, density, seed) {
                    Err(e) => rec.error = Some(e.to_string()),
                    Ok((planted, plan)) => {
                        rec.colluders = plan.colluders.clone();
                        rec.achieved_density = Some(plan.achieved_density);
                        for d in detectors {
                            let name = d.name();
                            let ctx = TrialContext {
                                graph: planted.view(),
                                plan: &plan,
                                seed: derive_seed(&[seed, name_key(&name)]),
                            };
                            let t = Instant::now();
                            let outcome = match d.detect(&ctx) {
                                Ok(subset) => {
                                    let j = jaccard(&subset, &plan.colluders);
                                    DetectorOutcome {
                                        algorithm: name,
                                        subset,
                                        jaccard: Some(j.value),
                                        vacuous: j.vacuous,
                                        elapsed_secs: t.elapsed().as_secs_f64(),
                                        error: None,
                                    }
                                }
                                Err(e) => DetectorOutcome {
                                    algorithm: name,
                                    subset: Vec::new(),
                                    jaccard: None,
                                    vacuous: false,
                                    elapsed_secs: t.elapsed().as_secs_f64(),
                                    error: Some(e.to_string()),
                                },
                            };
                            rec.detectors.push(outcome);
                        }
                    }
                }
                rec.elapsed_secs = started.elapsed().as_secs_f64();
                rec
            })
            .collect::<Vec<_>>()
    });
    let names: Vec<String> = detectors.iter().map(|d| d.name()).collect();
    let summary = summarize(cfg, &records, |rec| {
        names
            .iter()
            .map(|name| {
                let value = rec
                    .detectors
                    .iter()
                    .find(|o| &o.algorithm == name)
                    .and_then(|o| o.jaccard);
                (name.clone(), "jaccard", value)
            })
            .collect()
    });
    Ok(SweepOutput { records, summary })
}

/// Success sweep: plant a ring through bids, solve the assignment and
/// measure how many ring papers and members got a ring reviewer.
pub fn sweep_success(cfg: &SweepConfig, ds: &ConferenceDataset) -> Result<SweepOutput> {
    cfg.validate()?;
    if ds.text_sim().is_none() {
        return Err(Error::config("success sweeps need text similarities"));
    }
    let authors = ds.author_reviewers();
    let base = Base::new(cfg.representation, ds);
    let records = pool(cfg.workers)?.install(|| {
        cfg.cells()
            .into_par_iter()
            .map(|(k, density, trial)| {
                let seed = trial_seed(cfg.seed, k, density, trial);
                let started = Instant::now();
                let mut rec = TrialRecord::new(k, density, trial, seed);
                let run = || -> Result<(CollusionPlan, f64, f64)> {
                    let (edited, plan) = match (density == 0.0, cfg.representation) {
                        (true, _) => (ds.clone(), base.plant(&authors, k, 0.0, seed)?.1),
                        (false, Representation::Uni) => {
                            let (edited, _, plan) = inject_uni_dataset(ds, k, density, seed)?;
                            (edited, plan)
                        }
                        (false, Representation::Bi) => inject_bi_dataset(ds, k, density, seed)?,
                    };
                    let a = assign_dataset(&edited, cfg.paper_load, cfg.reviewer_cap)?;
                    let m = success_metrics(&a, &plan, &edited)?;
                    Ok((plan, m.paper_frac, m.colluder_frac))
                };
                match run() {
                    Ok((plan, pf, cf)) => {
                        rec.colluders = plan.colluders;
                        rec.achieved_density = Some(plan.achieved_density);
                        rec.paper_frac = Some(pf);
                        rec.colluder_frac = Some(cf);
                    }
                    Err(e) => rec.error = Some(e.to_string()),
                }
                rec.elapsed_secs = started.elapsed().as_secs_f64();
                rec
            })
            .collect::<Vec<_>>()
    });
    let summary = summarize(cfg, &records, |rec| {
        vec![
            ("assignment".to_string(), "paper_frac", rec.paper_frac),
            ("assignment".to_string(), "colluder_frac", rec.colluder_frac),
        ]
    });
    Ok(SweepOutput { records, summary })
}

enum Base {
    Uni(UniGraph),
    Bi(BiGraph),
}

enum Planted {
    Uni(UniGraph),
    Bi(BiGraph),
}

impl Planted {
    fn view(&self) -> TrialGraph<'_> {
        match self {
            Planted::Uni(g) => TrialGraph::Uni(g),
            Planted::Bi(g) => TrialGraph::Bi(g),
        }
    }
}

impl Base {
    fn new(repr: Representation, ds: &ConferenceDataset) -> Self {
        match repr {
            Representation::Uni => Base::Uni(build_uni(ds)),
            Representation::Bi => Base::Bi(build_bi(ds)),
        }
    }

    fn plant(&self, authors: &[usize], k: usize, density: f64, seed: u64) -> Result<(Planted, CollusionPlan)> {
        Ok(match (self, density == 0.0) {
            (Base::Uni(g), true) => (Planted::Uni(g.clone()), ring_only_uni(g, authors, k, seed)?),
            (Base::Bi(g), true) => (Planted::Bi(g.clone()), ring_only_bi(g, authors, k, seed)?),
            (Base::Uni(g), false) => {
                let (g, plan) = inject_uni(g, authors, k, density, seed)?;
                (Planted::Uni(g), plan)
            }
            (Base::Bi(g), false) => {
                let (g, plan) = inject_bi(g, authors, k, density, seed)?;
                (Planted::Bi(g), plan)
            }
        })
    }
}

type MetricValues = Vec<(String, &'static str, Option<f64>)>;

/// Aggregates per-trial values in grid order. Each `(algorithm, metric)`
/// also gets a `failure_rate` row counting trials without a value.
fn summarize(cfg: &SweepConfig, records: &[TrialRecord], values: impl Fn(&TrialRecord) -> MetricValues) -> Vec<SummaryRow> {
    let mut out = Vec::new();
    for chunk in records.chunks(cfg.trials) {
        let (k, density) = (chunk[0].k, chunk[0].density);
        let mut cols: BTreeMap<(usize, String, &'static str), Vec<Option<f64>>> = BTreeMap::new();
        for rec in chunk {
            for (i, (alg, metric, v)) in values(rec).into_iter().enumerate() {
                cols.entry((i, alg, metric)).or_default().push(v);
            }
        }
        for ((_, alg, metric), vals) in cols {
            let ok: Vec<f64> = vals.iter().flatten().copied().collect();
            let (mean, stderr) = mean_stderr(&ok);
            out.push(SummaryRow {
                k,
                density,
                algorithm: alg.clone(),
                metric: metric.to_string(),
                mean,
                stderr,
                n: ok.len(),
            });
            let failed: Vec<f64> = vals.iter().map(|v| if v.is_none() { 1.0 } else { 0.0 }).collect();
            let (rate, rate_se) = mean_stderr(&failed);
            out.push(SummaryRow {
                k,
                density,
                algorithm: alg,
                metric: format!("{metric}_failure_rate"),
                mean: rate,
                stderr: rate_se,
                n: failed.len(),
            });
        }
        log::info!("cell k={k} density={density} done");
    }
    out
}

fn fmt_f(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v}")
    }
}

/// Long-form summary: `k,density,algorithm,metric,mean,stderr,n`.
pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "density", "algorithm", "metric", "mean", "stderr", "n"])?;
    for r in rows {
        w.write_record([
            r.k.to_string(),
            fmt_f(r.density),
            r.algorithm.clone(),
            r.metric.clone(),
            fmt_f(r.mean),
            fmt_f(r.stderr),
            r.n.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One matrix per `(algorithm, metric)`: rows are k, columns densities.
/// Files are named `heatmap_<algorithm>_<metric>.csv`.
pub fn write_heatmaps(rows: &[SummaryRow], dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut groups: BTreeMap<(&str, &str), Vec<&SummaryRow>> = BTreeMap::new();
    for r in rows {
        groups.entry((&r.algorithm, &r.metric)).or_default().push(r);
    }
    for ((alg, metric), rs) in groups {
        let mut ks: Vec<usize> = rs.iter().map(|r| r.k).collect();
        ks.dedup();
        let mut ds: Vec<f64> = Vec::new();
        for r in &rs {
            if !ds.contains(&r.density) {
                ds.push(r.density);
            }
        }
        let mut w = csv::Writer::from_writer(BufWriter::new(File::create(dir.join(format!("heatmap_{alg}_{metric}.csv")))?));
        let mut header = vec!["k".to_string()];
        header.extend(ds.iter().map(|&d| fmt_f(d)));
        w.write_record(&header)?;
        for k in ks {
            let mut row = vec![k.to_string()];
            for &d in &ds {
                let v = rs.iter().find(|r| r.k == k && r.density == d).map_or(f64::NAN, |r| r.mean);
                row.push(fmt_f(v));
            }
            w.write_record(&row)?;
        }
        w.flush()?;
    }
    Ok(())
}

/// One JSON object per trial.
pub fn write_records_jsonl<W: Write>(records: &[TrialRecord], mut out: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Grid of honest-group counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusConfig {
    pub representation: Representation,
    pub ks: Vec<usize>,
    pub thresholds: Vec<f64>,
    /// Search budget per k; `None` searches to completion.
    pub budget: Option<Duration>,
    pub workers: usize,
}

impl CensusConfig {
    /// The full census grid: k = 2..10 on the reviewer graph and
    /// k = 2..6 on the bipartite graph, thresholds 0.5..1.0 in steps of 0.1.
    pub fn paper_grid(repr: Representation) -> Self {
        let max_k = match repr {
            Representation::Uni => 10,
            Representation::Bi => 6,
        };
        CensusConfig {
            representation: repr,
            ks: (2..=max_k).collect(),
            thresholds: (5..=10).map(|i| i as f64 / 10.0).collect(),
            budget: None,
            workers: 1,
        }
    }
}

/// Counts per `(k, threshold)`, ordered by k then threshold as given. Only
/// authors are counted, since a ring needs papers to trade.
pub fn census_grid(cfg: &CensusConfig, ds: &ConferenceDataset) -> Result<Vec<CensusCell>> {
    if cfg.ks.is_empty() || cfg.thresholds.is_empty() {
        return Err(Error::config("census grid must have at least one k and one threshold"));
    }
    if cfg.workers == 0 {
        return Err(Error::config("workers must be at least 1"));
    }
    let authors = ds.author_reviewers();
    let base = Base::new(cfg.representation, ds);
    let per_k: Vec<Result<Vec<CensusCell>>> = pool(cfg.workers)?.install(|| {
        cfg.ks
            .par_iter()
            .map(|&k| match &base {
                Base::Uni(g) => count_uni_groups_multi(g, &authors, k, &cfg.thresholds, cfg.budget),
                Base::Bi(g) => count_bi_groups_multi(g, &authors, k, &cfg.thresholds, cfg.budget),
            })
            .collect()
    });
    let mut out = Vec::new();
    for cells in per_k {
        out.extend(cells?);
    }
    Ok(out)
}

/// Census table: `k,threshold,count,exact`.
pub fn write_census_csv<W: Write>(cells: &[CensusCell], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "threshold", "count", "exact"])?;
    for c in cells {
        w.write_record([c.k.to_string(), fmt_f(c.threshold), c.count.to_string(), c.exact.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

//! Planting collusion rings of a given size and density.
//!
//! [`inject_uni`] adds random directed edges among `k` sampled authors of the
//! reviewer graph; [`realize_bids_uni`] turns such a target graph into bid
//! edits. [`inject_bi`] adds random bids from `k` sampled authors onto their
//! own papers.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index::sample;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::dataset::{BidLevel, ConferenceDataset, Pair};
use crate::detect::Representation;
use crate::error::{Error, Result};
use crate::graph::{build_bi, meets_threshold, BiGraph, UniGraph};
use crate::rng::{derive_seed, rng_from_seed, Rng};

/// Resampling attempts for a colluder set with undefined bid density.
pub const MAX_RESAMPLES: usize = 100;

/// Record of one injection, enough to replay it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollusionPlan {
    /// Colluding reviewers, ascending.
    pub colluders: Vec<usize>,
    pub representation: Representation,
    pub k: usize,
    /// Requested edge density (reviewer graph) or bid density (bipartite).
    pub target: f64,
    pub seed: u64,
    pub initial_density: f64,
    pub achieved_density: f64,
    /// Added edges in insertion order: reviewer pairs for the reviewer graph,
    /// `(reviewer, paper)` bids for the bipartite graph.
    pub added: Vec<Pair>,
}

fn check(k: usize, target: f64, authors: &[usize]) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(Error::config(format!("ring size must be at least 2, got {k}")));
    }
    if !(target > 0.0 && target <= 1.0) {
        return Err(Error::config(format!("target density {target} outside (0, 1]")));
    }
    let mut pool = authors.to_vec();
    pool.sort_unstable();
    pool.dedup();
    if pool.len() < k {
        return Err(Error::config(format!(
            "ring of size {k} requested but only {} authors are available",
            pool.len()
        )));
    }
    Ok(pool)
}

fn draw(rng: &mut Rng, pool: &[usize], k: usize) -> Vec<usize> {
    let mut m: Vec<usize> = sample(rng, pool.len(), k).into_iter().map(|i| pool[i]).collect();
    m.sort_unstable();
    m
}

/// Samples `k` authors and adds uniformly random absent ordered pairs among
/// them until their edge density reaches `gamma`.
fn draw_bi(graph: &BiGraph, rng: &mut Rng, pool: &[usize], k: usize) -> Result<Vec<usize>> {
    for _ in 0..MAX_RESAMPLES {
        let m = draw(rng, pool, k);
        let parts = graph.density_parts(&m);
        if parts.papers > 0 && parts.possible() > 0 {
            return Ok(m);
        }
    }
    Err(Error::Degenerate(format!(
        "no colluder set of size {k} with a defined bid density after {MAX_RESAMPLES} draws"
    )))
}

/// Draws the ring [`inject_uni`] would draw for `seed` and adds nothing.
pub fn ring_only_uni(graph: &UniGraph, authors: &[usize], k: usize, seed: u64) -> Result<CollusionPlan> {
    let pool = check(k, 1.0, authors)?;
    let colluders = draw(&mut rng_from_seed(seed), &pool, k);
    let density = graph.induced_edge_count(&colluders) as f64 / (k * (k - 1)) as f64;
    Ok(CollusionPlan {
        colluders,
        representation: Representation::Uni,
        k,
        target: 0.0,
        seed,
        initial_density: density,
        achieved_density: density,
        added: Vec::new(),
    })
}

/// Draws the ring [`inject_bi`] would draw for `seed` and adds nothing.
pub fn ring_only_bi(graph: &BiGraph, authors: &[usize], k: usize, seed: u64) -> Result<CollusionPlan> {
    let pool = check(k, 1.0, authors)?;
    let colluders = draw_bi(graph, &mut rng_from_seed(seed), &pool, k)?;
    let parts = graph.density_parts(&colluders);
    let density = parts.bids as f64 / parts.possible() as f64;
    Ok(CollusionPlan {
        colluders,
        representation: Representation::Bi,
        k,
        target: 0.0,
        seed,
        initial_density: density,
        achieved_density: density,
        added: Vec::new(),
    })
}

pub fn inject_uni(
    graph: &UniGraph,
    authors: &[usize],
    k: usize,
    gamma: f64,
    seed: u64,
) -> Result<(UniGraph, CollusionPlan)> {
    let pool = check(k, gamma, authors)?;
    let mut rng = rng_from_seed(seed);
    let colluders = draw(&mut rng, &pool, k);
    let mut g = graph.clone();
    let pairs = k * (k - 1);
    let mut edges = g.induced_edge_count(&colluders);
    let initial_density = edges as f64 / pairs as f64;
    let mut added = Vec::new();
    while !meets_threshold(edges, pairs, gamma) {
        let a = colluders[rng.gen_range(0..k)];
        let b = colluders[rng.gen_range(0..k)];
        if a != b && g.add_edge(a, b) {
            edges += 1;
            added.push((a, b));
        }
    }
    let plan = CollusionPlan {
        colluders,
        representation: Representation::Uni,
        k,
        target: gamma,
        seed,
        initial_density,
        achieved_density: edges as f64 / pairs as f64,
        added,
    };
    Ok((g, plan))
}

/// Edits the colluders' bids so that the rebuilt reviewer graph has no more
/// edges inside the ring than `target` and at least the target's edges from
/// colluders to honest reviewers.
///
/// For every colluder `r1`:
/// * for each honest reviewer `h` with a target edge `(r1, h)`, one of
///   `r1`'s bids on `h`'s papers is kept, chosen uniformly; the other bids
///   of `r1` on papers with an honest author are removed;
/// * for each colluder `r2` with a target edge `(r1, r2)`, `r1` bids Yes on
///   every paper of `r2` unless the pair is conflicted or the paper has a
///   colluding co-author `a` without a target edge `(r1, a)`.
///
/// Bids of honest reviewers are untouched.
pub fn realize_bids_uni(
    ds: &ConferenceDataset,
    target: &UniGraph,
    plan: &CollusionPlan,
    seed: u64,
) -> Result<ConferenceDataset> {
    if target.n_vertices() != ds.n_reviewers() {
        return Err(Error::invariant(format!(
            "target graph has {} vertices but the dataset has {} reviewers",
            target.n_vertices(),
            ds.n_reviewers()
        )));
    }
    let mut rng = rng_from_seed(seed);
    let in_ring: BTreeSet<usize> = plan.colluders.iter().copied().collect();
    let authors = ds.authors_by_paper();
    let papers = ds.papers_by_author();
    let mut own_bids: Vec<Vec<usize>> = vec![Vec::new(); ds.n_reviewers()];
    for &(r, p) in ds.bids().keys() {
        own_bids[r].push(p);
    }
    let mut bids: BTreeMap<Pair, BidLevel> = ds.bids().clone();

    for &r1 in &plan.colluders {
        let mut kept: BTreeSet<usize> = BTreeSet::new();
        for &h in target.out_neighbors(r1) {
            if in_ring.contains(&h) {
                continue;
            }
            let options: Vec<usize> = own_bids[r1]
                .iter()
                .copied()
                .filter(|&p| authors[p].binary_search(&h).is_ok())
                .collect();
            if options.is_empty() {
                continue;
            }
            kept.insert(options[rng.gen_range(0..options.len())]);
        }
        for &p in &own_bids[r1] {
            let honest_author = authors[p].iter().any(|a| !in_ring.contains(a));
            if honest_author && !kept.contains(&p) {
                bids.remove(&(r1, p));
            }
        }
        for &r2 in target.out_neighbors(r1) {
            if !in_ring.contains(&r2) {
                continue;
            }
            for &p in &papers[r2] {
                let allowed = !ds.is_conflict((r1, p))
                    && authors[p]
                        .iter()
                        .all(|&a| a == r1 || !in_ring.contains(&a) || target.has_edge(r1, a));
                if allowed {
                    bids.entry((r1, p)).or_insert(BidLevel::YES);
                }
            }
        }
    }
    ds.with_bids(bids)
}

/// Samples `k` authors with a defined bid density and adds uniformly random
/// bids on label-free pairs in `M x P[M]` until the density reaches `eta`.
pub fn inject_bi(
    graph: &BiGraph,
    authors: &[usize],
    k: usize,
    eta: f64,
    seed: u64,
) -> Result<(BiGraph, CollusionPlan)> {
    let pool = check(k, eta, authors)?;
    let mut rng = rng_from_seed(seed);
    let colluders = draw_bi(graph, &mut rng, &pool, k)?;
    let papers = graph.authored_papers(&colluders);
    let mut parts = graph.density_parts(&colluders);
    let initial_density = parts.bids as f64 / parts.possible() as f64;
    let mut g = graph.clone();
    let mut added = Vec::new();
    while !meets_threshold(parts.bids, parts.possible(), eta) {
        let r = colluders[rng.gen_range(0..colluders.len())];
        let p = papers[rng.gen_range(0..papers.len())];
        if g.add_bid(r, p) {
            parts.bids += 1;
            added.push((r, p));
        }
    }
    let plan = CollusionPlan {
        colluders,
        representation: Representation::Bi,
        k,
        target: eta,
        seed,
        initial_density,
        achieved_density: parts.bids as f64 / parts.possible() as f64,
        added,
    };
    Ok((g, plan))
}

/// Adds the plan's injected bids to the dataset at level Yes.
pub fn apply_bids(ds: &ConferenceDataset, plan: &CollusionPlan) -> Result<ConferenceDataset> {
    if plan.representation != Representation::Bi {
        return Err(Error::config("only bipartite plans carry bids"));
    }
    let mut bids = ds.bids().clone();
    for &pair in &plan.added {
        bids.insert(pair, BidLevel::YES);
    }
    ds.with_bids(bids)
}

/// Full bipartite injection on a dataset: graph-level draw, then the bids.
pub fn inject_bi_dataset(
    ds: &ConferenceDataset,
    k: usize,
    eta: f64,
    seed: u64,
) -> Result<(ConferenceDataset, CollusionPlan)> {
    let g = build_bi(ds);
    let (_, plan) = inject_bi(&g, &ds.author_reviewers(), k, eta, seed)?;
    Ok((apply_bids(ds, &plan)?, plan))
}

/// Full reviewer-graph injection on a dataset: target graph, then bid edits.
/// The bid edits use a seed derived from `seed`.
pub fn inject_uni_dataset(
    ds: &ConferenceDataset,
    k: usize,
    gamma: f64,
    seed: u64,
) -> Result<(ConferenceDataset, UniGraph, CollusionPlan)> {
    let g = crate::graph::build_uni(ds);
    let (target, plan) = inject_uni(&g, &ds.author_reviewers(), k, gamma, seed)?;
    let edited = realize_bids_uni(ds, &target, &plan, derive_seed(&[seed, 1]))?;
    Ok((edited, target, plan))
}

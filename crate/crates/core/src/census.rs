//! Counting honest dense groups, and greedy peeling frontiers.
//!
//! Counts are exact unless a wall-clock budget runs out, in which case the
//! cell reports the count found so far with `exact = false`, i.e. a lower
//! bound.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{meets_threshold, BiGraph, BidSubsetState, UniGraph};

/// Number of search nodes between two clock checks.
const CHECK_EVERY: u64 = 4096;

/// Number of size-`k` groups reaching a density threshold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusCell {
    pub k: usize,
    pub threshold: f64,
    pub count: u64,
    /// `false` when the search was cut short and `count` is a lower bound.
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeelPoint {
    pub size: usize,
    pub density: f64,
    /// The remaining set has no defined density (recorded as 0).
    pub degenerate: bool,
}

/// Densities of the successive sets visited by greedy peeling, largest first.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PeelFrontier {
    pub points: Vec<PeelPoint>,
    /// Vertices in removal order.
    pub removed: Vec<usize>,
}

struct Budget {
    start: Instant,
    limit: Option<Duration>,
    nodes: u64,
    expired: bool,
}

impl Budget {
    fn new(limit: Option<Duration>) -> Self {
        Budget {
            start: Instant::now(),
            limit,
            nodes: 0,
            expired: limit == Some(Duration::ZERO),
        }
    }

    /// Registers one search node; returns `true` once the budget is spent.
    fn tick(&mut self) -> bool {
        if self.expired {
            return true;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(CHECK_EVERY) {
            if let Some(limit) = self.limit {
                self.expired = self.start.elapsed() >= limit;
            }
        }
        self.expired
    }
}

fn check_grid(k: usize, thresholds: &[f64]) -> Result<()> {
    if k < 2 {
        return Err(Error::config(format!("group size must be at least 2, got {k}")));
    }
    if thresholds.is_empty() {
        return Err(Error::config("no density thresholds given"));
    }
    if let Some(t) = thresholds.iter().find(|t| !(**t > 0.0 && **t <= 1.0)) {
        return Err(Error::config(format!("density threshold {t} outside (0, 1]")));
    }
    Ok(())
}

fn cells(k: usize, thresholds: &[f64], counts: Vec<u64>, exact: bool) -> Vec<CensusCell> {
    thresholds
        .iter()
        .zip(counts)
        .map(|(&threshold, count)| CensusCell {
            k,
            threshold,
            count,
            exact,
        })
        .collect()
}

fn dedup_sorted(set: &[usize]) -> Vec<usize> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Counts size-`k` subsets of `authors` whose edge density is at least
/// `gamma`.
pub fn count_uni_groups(
    graph: &UniGraph,
    authors: &[usize],
    k: usize,
    gamma: f64,
    budget: Option<Duration>,
) -> Result<CensusCell> {
    Ok(count_uni_groups_multi(graph, authors, k, &[gamma], budget)?[0])
}

/// Counts for several thresholds in one search, pruning against the
/// smallest threshold.
pub fn count_uni_groups_multi(
    graph: &UniGraph,
    authors: &[usize],
    k: usize,
    thresholds: &[f64],
    budget: Option<Duration>,
) -> Result<Vec<CensusCell>> {
    check_grid(k, thresholds)?;
    let verts = dedup_sorted(authors);
    let m = verts.len();
    let mut counts = vec![0u64; thresholds.len()];
    if m < k {
        return Ok(cells(k, thresholds, counts, true));
    }
    // pair weights among authors: number of directed edges, 0..=2
    let mut local = vec![usize::MAX; graph.n_vertices()];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    let mut nbrs: Vec<Vec<(usize, u32)>> = vec![Vec::new(); m];
    for (i, &v) in verts.iter().enumerate() {
        let mut row: Vec<(usize, u32)> = graph
            .out_neighbors(v)
            .iter()
            .chain(graph.in_neighbors(v))
            .filter_map(|&u| (local[u] != usize::MAX).then_some((local[u], 1)))
            .collect();
        row.sort_unstable();
        row.dedup_by(|a, b| {
            if a.0 == b.0 {
                b.1 += a.1;
                true
            } else {
                false
            }
        });
        nbrs[i] = row;
    }
    let t_min = thresholds.iter().copied().fold(f64::INFINITY, f64::min);
    let pairs = k * (k - 1);
    let mut search = UniSearch {
        nbrs: &nbrs,
        k,
        pairs,
        t_min,
        thresholds,
        conn: vec![0; m],
        scratch: Vec::with_capacity(m),
        counts: &mut counts,
        budget: Budget::new(budget),
    };
    search.dfs(0, 0, 0);
    let exact = !search.budget.expired;
    Ok(cells(k, thresholds, counts, exact))
}

struct UniSearch<'a> {
    nbrs: &'a [Vec<(usize, u32)>],
    k: usize,
    pairs: usize,
    t_min: f64,
    thresholds: &'a [f64],
    /// Edges between each vertex and the chosen set.
    conn: Vec<u32>,
    scratch: Vec<u32>,
    counts: &'a mut [u64],
    budget: Budget,
}

impl UniSearch<'_> {
    /// `chosen` vertices picked so far with `edges` among them; candidates are
    /// the vertices from `next` on.
    fn dfs(&mut self, next: usize, chosen: usize, edges: usize) {
        if self.budget.tick() {
            return;
        }
        if chosen == self.k {
            for (c, &t) in self.counts.iter_mut().zip(self.thresholds) {
                if meets_threshold(edges, self.pairs, t) {
                    *c += 1;
                }
            }
            return;
        }
        let m = self.nbrs.len();
        let left = self.k - chosen;
        if m - next < left {
            return;
        }
        // best case: the `left` most connected candidates, fully linked
        self.scratch.clear();
        self.scratch.extend_from_slice(&self.conn[next..]);
        let top: usize = if left < self.scratch.len() {
            let idx = self.scratch.len() - left;
            self.scratch.select_nth_unstable(idx);
            self.scratch[idx..].iter().map(|&c| c as usize).sum()
        } else {
            self.scratch.iter().map(|&c| c as usize).sum()
        };
        let bound = edges + top + left * (left - 1);
        if !meets_threshold(bound, self.pairs, self.t_min) {
            return;
        }
        for v in next..=(m - left) {
            let gained = self.conn[v] as usize;
            for &(u, w) in &self.nbrs[v] {
                self.conn[u] += w;
            }
            self.dfs(v + 1, chosen + 1, edges + gained);
            for &(u, w) in &self.nbrs[v] {
                self.conn[u] -= w;
            }
            if self.budget.expired {
                return;
            }
        }
    }
}

/// Counts size-`k` subsets of `authors` whose bid density is at least `eta`.
/// Degenerate subsets are skipped.
pub fn count_bi_groups(
    graph: &BiGraph,
    authors: &[usize],
    k: usize,
    eta: f64,
    budget: Option<Duration>,
) -> Result<CensusCell> {
    Ok(count_bi_groups_multi(graph, authors, k, &[eta], budget)?[0])
}

/// Exhaustive enumeration counting several thresholds at once.
pub fn count_bi_groups_multi(
    graph: &BiGraph,
    authors: &[usize],
    k: usize,
    thresholds: &[f64],
    budget: Option<Duration>,
) -> Result<Vec<CensusCell>> {
    check_grid(k, thresholds)?;
    let verts = dedup_sorted(authors);
    let mut counts = vec![0u64; thresholds.len()];
    let mut search = BiSearch {
        verts: &verts,
        k,
        thresholds,
        state: BidSubsetState::new(graph),
        counts: &mut counts,
        budget: Budget::new(budget),
    };
    if verts.len() >= k {
        search.dfs(0, 0);
    }
    let exact = !search.budget.expired;
    Ok(cells(k, thresholds, counts, exact))
}

struct BiSearch<'a, 'g> {
    verts: &'a [usize],
    k: usize,
    thresholds: &'a [f64],
    state: BidSubsetState<'g>,
    counts: &'a mut [u64],
    budget: Budget,
}

impl BiSearch<'_, '_> {
    fn dfs(&mut self, next: usize, chosen: usize) {
        if self.budget.tick() {
            return;
        }
        if chosen == self.k {
            let parts = self.state.parts();
            if parts.papers > 0 && parts.possible() > 0 {
                for (c, &t) in self.counts.iter_mut().zip(self.thresholds) {
                    if meets_threshold(parts.bids, parts.possible(), t) {
                        *c += 1;
                    }
                }
            }
            return;
        }
        let left = self.k - chosen;
        for i in next..=(self.verts.len() - left) {
            let r = self.verts[i];
            self.state.add(r);
            self.dfs(i + 1, chosen + 1);
            self.state.remove(r);
            if self.budget.expired {
                return;
            }
        }
    }
}

/// Repeatedly removes the vertex of smallest total degree inside the
/// current set (ties to the lowest index), recording the edge density of
/// every set from `authors` down to size 2.
pub fn peel_uni(graph: &UniGraph, authors: &[usize]) -> Result<PeelFrontier> {
    let verts = dedup_sorted(authors);
    if verts.len() < 2 {
        return Err(Error::SubsetTooSmall {
            size: verts.len(),
            min: 2,
        });
    }
    let n = graph.n_vertices();
    let mut inside = vec![false; n];
    for &v in &verts {
        inside[v] = true;
    }
    let mut degree = vec![0usize; n];
    let mut edges = 0usize;
    for &v in &verts {
        for &u in graph.out_neighbors(v) {
            if inside[u] {
                degree[v] += 1;
                degree[u] += 1;
                edges += 1;
            }
        }
    }
    let mut size = verts.len();
    let mut frontier = PeelFrontier::default();
    let point = |size: usize, edges: usize| PeelPoint {
        size,
        density: edges as f64 / (size * (size - 1)) as f64,
        degenerate: false,
    };
    frontier.points.push(point(size, edges));
    while size > 2 {
        let v = verts
            .iter()
            .copied()
            .filter(|&v| inside[v])
            .min_by_key(|&v| (degree[v], v))
            .expect("non-empty set");
        inside[v] = false;
        for &u in graph.out_neighbors(v).iter().chain(graph.in_neighbors(v)) {
            if inside[u] {
                degree[u] -= 1;
                edges -= 1;
            }
        }
        size -= 1;
        frontier.removed.push(v);
        frontier.points.push(point(size, edges));
    }
    Ok(frontier)
}

/// Repeatedly removes the reviewer whose removal leaves the highest bid
/// density (degenerate remainders rank below every defined density; ties to
/// the lowest index), recording each set down to size 2.
pub fn peel_bi(graph: &BiGraph, authors: &[usize]) -> Result<PeelFrontier> {
    let verts = dedup_sorted(authors);
    if verts.len() < 2 {
        return Err(Error::SubsetTooSmall {
            size: verts.len(),
            min: 2,
        });
    }
    let mut state = BidSubsetState::with_members(graph, &verts);
    let score = |parts: crate::graph::DensityParts| parts.density().unwrap_or(-1.0);
    let record = |parts: crate::graph::DensityParts| match parts.density() {
        Ok(d) => PeelPoint {
            size: parts.reviewers,
            density: d,
            degenerate: false,
        },
        Err(_) => PeelPoint {
            size: parts.reviewers,
            density: 0.0,
            degenerate: true,
        },
    };
    let mut frontier = PeelFrontier::default();
    frontier.points.push(record(state.parts()));
    let mut alive = verts.clone();
    while alive.len() > 2 {
        let mut best: Option<(f64, usize)> = None;
        for (i, &r) in alive.iter().enumerate() {
            let s = score(state.parts_after_remove(r));
            if best.is_none_or(|(b, _)| s > b) {
                best = Some((s, i));
            }
        }
        let (_, i) = best.expect("non-empty set");
        let r = alive.remove(i);
        state.remove(r);
        frontier.removed.push(r);
        frontier.points.push(record(state.parts()));
    }
    Ok(frontier)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{generate_synthetic_dataset, BidLevel, ConferenceDataset, SyntheticConfig};
    use crate::graph::{build_bi, build_uni};
    use crate::rng::rng_from_seed;
    use rand::Rng as _;

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for v in start..n {
                cur.push(v);
                rec(v + 1, n, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, n, k, &mut Vec::new(), &mut out);
        out
    }

    fn random_uni(n: usize, p: f64, seed: u64) -> UniGraph {
        let mut rng = rng_from_seed(seed);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        UniGraph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn k2_counts_linked_pairs() {
        let g = random_uni(12, 0.1, 1);
        let all: Vec<usize> = (0..12).collect();
        let linked = combinations(12, 2)
            .iter()
            .filter(|s| g.has_edge(s[0], s[1]) || g.has_edge(s[1], s[0]))
            .count() as u64;
        let cell = count_uni_groups(&g, &all, 2, 0.5, None).unwrap();
        assert_eq!(cell.count, linked);
        assert!(cell.exact);
    }

    #[test]
    fn edgeless_counts_zero() {
        let g = UniGraph::new(8);
        let cell = count_uni_groups(&g, &(0..8).collect::<Vec<_>>(), 3, 0.1, None).unwrap();
        assert_eq!((cell.count, cell.exact), (0, true));
    }

    #[test]
    fn uni_matches_exhaustive() {
        for seed in 0..5 {
            let g = random_uni(20, 0.25, seed);
            let all: Vec<usize> = (0..20).collect();
            let thresholds = [0.3, 0.5, 0.75];
            let got = count_uni_groups_multi(&g, &all, 4, &thresholds, None).unwrap();
            for (cell, &t) in got.iter().zip(&thresholds) {
                let want = combinations(20, 4)
                    .iter()
                    .filter(|s| meets_threshold(g.induced_edge_count(s), 12, t))
                    .count() as u64;
                assert_eq!(cell.count, want, "seed {seed} threshold {t}");
            }
        }
    }

    #[test]
    fn zero_budget_is_an_inexact_zero() {
        let g = random_uni(10, 0.5, 3);
        let cell = count_uni_groups(&g, &(0..10).collect::<Vec<_>>(), 3, 0.5, Some(Duration::ZERO)).unwrap();
        assert_eq!((cell.count, cell.exact), (0, false));
    }

    #[test]
    fn invalid_grid_rejected() {
        let g = UniGraph::new(4);
        assert!(count_uni_groups(&g, &[0, 1, 2], 1, 0.5, None).is_err());
        assert!(count_uni_groups(&g, &[0, 1, 2], 2, 0.0, None).is_err());
    }

    fn pair_graph() -> BiGraph {
        let mut b = ConferenceDataset::builder();
        b.author("r1", "p1")
            .author("r2", "p2")
            .bid("r1", "p2", BidLevel::YES)
            .bid("r2", "p1", BidLevel::YES)
            .author("r3", "p3");
        build_bi(&b.build().unwrap())
    }

    #[test]
    fn bi_reciprocal_pair_counted() {
        let g = pair_graph();
        let cell = count_bi_groups(&g, &[0, 1], 2, 1.0, None).unwrap();
        assert_eq!(cell.count, 1);
    }

    #[test]
    fn bi_matches_exhaustive() {
        let ds = generate_synthetic_dataset(&SyntheticConfig {
            n_reviewers: 12,
            n_papers: 10,
            bid_prob: 0.3,
            authors_per_paper: 2,
            seed: 6,
        })
        .unwrap();
        let g = build_bi(&ds);
        let authors = g.author_set();
        let got = count_bi_groups(&g, &authors, 3, 0.4, None).unwrap();
        let want = combinations(authors.len(), 3)
            .iter()
            .map(|c| c.iter().map(|&i| authors[i]).collect::<Vec<_>>())
            .filter(|s| {
                let parts = g.density_parts(s);
                parts.papers > 0 && parts.possible() > 0 && meets_threshold(parts.bids, parts.possible(), 0.4)
            })
            .count() as u64;
        assert_eq!(got.count, want);
        assert!(got.exact);
    }

    #[test]
    fn peel_uni_clique_stays_full() {
        let mut edges = Vec::new();
        for u in 0..5 {
            for v in 0..5 {
                if u != v {
                    edges.push((u, v));
                }
            }
        }
        let g = UniGraph::from_edges(5, edges).unwrap();
        let f = peel_uni(&g, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(f.points.len(), 4);
        assert!(f.points.iter().all(|p| p.density == 1.0));
    }

    #[test]
    fn peel_uni_star() {
        // leaves 1..=4 all bid onto center 0
        let g = UniGraph::from_edges(5, [(1, 0), (2, 0), (3, 0), (4, 0)]).unwrap();
        let f = peel_uni(&g, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(f.removed, vec![1, 2, 3]);
        assert_eq!(f.points.last().unwrap().density, 0.5);
        assert!((f.points[0].density - 4.0 / 20.0).abs() < 1e-15);
    }

    #[test]
    fn peel_uni_recomputes() {
        let g = random_uni(30, 0.1, 9);
        let all: Vec<usize> = (0..30).collect();
        let f = peel_uni(&g, &all).unwrap();
        let mut alive = all.clone();
        for (i, point) in f.points.iter().enumerate() {
            if i > 0 {
                alive.retain(|&v| v != f.removed[i - 1]);
            }
            assert_eq!(point.size, alive.len());
            assert_eq!(point.density, g.edge_density(&alive).unwrap());
        }
    }

    #[test]
    fn peel_bi_drops_isolate_first() {
        let g = pair_graph();
        let f = peel_bi(&g, &[0, 1, 2]).unwrap();
        assert_eq!(f.removed, vec![2]);
        assert_eq!(f.points.last().unwrap().density, 1.0);
    }

    #[test]
    fn peel_bi_matches_bruteforce_argmax() {
        let ds = generate_synthetic_dataset(&SyntheticConfig {
            n_reviewers: 10,
            n_papers: 12,
            bid_prob: 0.3,
            authors_per_paper: 1,
            seed: 2,
        })
        .unwrap();
        let g = build_bi(&ds);
        let authors = g.author_set();
        let f = peel_bi(&g, &authors).unwrap();
        let mut alive = authors.clone();
        for &r in &f.removed {
            let mut best = (f64::NEG_INFINITY, usize::MAX);
            for &c in &alive {
                let rest: Vec<usize> = alive.iter().copied().filter(|&x| x != c).collect();
                let d = g.bid_density(&rest).unwrap_or(-1.0);
                if d > best.0 {
                    best = (d, c);
                }
            }
            assert_eq!(r, best.1);
            alive.retain(|&x| x != r);
        }
    }

    #[test]
    fn build_uni_census_on_dataset() {
        let ds = generate_synthetic_dataset(&SyntheticConfig {
            n_reviewers: 25,
            n_papers: 20,
            bid_prob: 0.0,
            authors_per_paper: 2,
            seed: 1,
        })
        .unwrap();
        let g = build_uni(&ds);
        let authors = ds.author_reviewers();
        let cell = count_uni_groups(&g, &authors, 3, 0.2, None).unwrap();
        assert_eq!(cell.count, 0);
    }
}

//! Heuristic starting sets for local search.

use crate::graph::{BiGraph, UniGraph};

fn sorted_intersection(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Index of the largest score, ties to the lowest index.
fn argmax(scores: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (v, &s) in scores.iter().enumerate() {
        if best.is_none_or(|b| s > scores[b]) {
            best = Some(v);
        }
    }
    best
}

/// Per-vertex triangle count over degree on the reciprocal projection.
pub fn triangle_scores(g: &UniGraph) -> Vec<f64> {
    let r = g.reciprocal();
    let n = r.n_vertices();
    let nbrs: Vec<Vec<usize>> = (0..n).map(|v| r.neighbors(v).iter().map(|&(u, _)| u).collect()).collect();
    let mut tri = vec![0usize; n];
    for (u, v, _) in r.edges() {
        let common = sorted_intersection(&nbrs[u], &nbrs[v]);
        tri[u] += common;
        tri[v] += common;
    }
    // each triangle at v is seen from both of its edges through v
    (0..n)
        .map(|v| {
            if nbrs[v].is_empty() {
                0.0
            } else {
                (tri[v] / 2) as f64 / nbrs[v].len() as f64
            }
        })
        .collect()
}

/// Highest-scoring vertex by [`triangle_scores`] together with its
/// reciprocal neighbors, ascending.
pub fn heuristic_start_uni(g: &UniGraph) -> Vec<usize> {
    let scores = triangle_scores(g);
    let Some(v) = argmax(&scores) else {
        return Vec::new();
    };
    let r = g.reciprocal();
    let mut out: Vec<usize> = std::iter::once(v).chain(r.neighbors(v).iter().map(|&(u, _)| u)).collect();
    out.sort_unstable();
    out
}

/// Per-vertex count of bid-author-bid-author 4-cycles over bid degree plus
/// authorship degree. Vertex `r` is reviewer `r`, `n_reviewers + p` is
/// paper `p`.
pub fn cycle_scores(g: &BiGraph) -> Vec<f64> {
    let (nr, np) = (g.n_reviewers(), g.n_papers());
    let mut cycles = vec![0usize; nr + np];
    // a cycle r1 -author- p1 -bid- r2 -author- p2 -bid- r1 is enumerated once
    // from each reviewer as the author of p1
    for r1 in 0..nr {
        for &p1 in g.papers_of(r1) {
            for &r2 in g.bidders_of(p1) {
                let c = sorted_intersection(g.papers_of(r2), g.bids_of(r1));
                cycles[r1] += c;
                cycles[nr + p1] += c;
            }
        }
    }
    (0..nr + np)
        .map(|v| {
            let degree = if v < nr {
                g.bids_of(v).len() + g.papers_of(v).len()
            } else {
                g.bidders_of(v - nr).len() + g.authors_of(v - nr).len()
            };
            if degree == 0 {
                0.0
            } else {
                cycles[v] as f64 / degree as f64
            }
        })
        .collect()
}

/// Highest-scoring vertex by [`cycle_scores`] with its bid and authorship
/// neighbors, in combined reviewer/paper indexing.
pub fn heuristic_start_bi(g: &BiGraph) -> Vec<usize> {
    let nr = g.n_reviewers();
    let scores = cycle_scores(g);
    let Some(v) = argmax(&scores) else {
        return Vec::new();
    };
    let mut out = vec![v];
    if v < nr {
        out.extend(g.bids_of(v).iter().chain(g.papers_of(v)).map(|&p| nr + p));
    } else {
        out.extend(g.bidders_of(v - nr).iter().chain(g.authors_of(v - nr)).copied());
    }
    out.sort_unstable();
    out
}

/// Reviewer version of [`heuristic_start_bi`]: the reviewers in the set plus
/// the authors of the papers in it.
pub fn heuristic_start_reviewers(g: &BiGraph) -> Vec<usize> {
    let nr = g.n_reviewers();
    let mut out: Vec<usize> = Vec::new();
    for v in heuristic_start_bi(g) {
        if v < nr {
            out.push(v);
        } else {
            out.extend_from_slice(g.authors_of(v - nr));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

//! Graph views of the bidding data.
//!
//! [`UniGraph`] is the directed reviewer graph with an edge `(a, b)` whenever
//! `a` bid on some paper authored by `b`. [`BiGraph`] keeps reviewers and
//! papers with labeled bid, authorship and conflict edges. Detectors run on
//! [`WeightedGraph`], an undirected graph with integer edge multiplicities
//! derived from either view.

mod bi;
mod uni;
mod weighted;

pub use bi::{
    authored_papers, bid_density, build_bi, BiEdgeChoice, BiGraph, BidSubsetState, DensityParts, EdgeLabel,
};
pub use uni::{build_uni, edge_density, induced_edge_count, UniGraph};
pub use weighted::WeightedGraph;

/// Absolute slack used when comparing a ratio against a threshold, so that a
/// decimal threshold such as 0.9 is met by exactly 81 of 90 pairs.
pub const DENSITY_EPS: f64 = 1e-9;

/// `numerator / denominator >= threshold`, up to [`DENSITY_EPS`].
pub fn meets_threshold(numerator: usize, denominator: usize, threshold: f64) -> bool {
    numerator as f64 + DENSITY_EPS * (denominator.max(1) as f64) >= threshold * denominator as f64
}

/// Boolean membership mask over `n` vertices, plus the number of distinct
/// members. Out-of-range indices are ignored.
pub(crate) fn subset_mask(n: usize, subset: &[usize]) -> (Vec<bool>, usize) {
    let mut mask = vec![false; n];
    let mut count = 0;
    for &v in subset {
        if v < n && !mask[v] {
            mask[v] = true;
            count += 1;
        }
    }
    (mask, count)
}

//! Fraudar: greedy peeling on column-weighted edge mass.
//!
//! Each reviewer–paper edge weighs `1 / ln(5 + deg(p))` with `deg(p)` the
//! paper's degree in the whole graph. The score of a vertex set is the total
//! weight of its internal edges divided by its size; reviewers and papers
//! both count towards the size.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{Detection, Initialization};
use crate::graph::{subset_mask, BiEdgeChoice, BiGraph, WeightedGraph};

/// Column-weighted view of the bipartite graph. Vertex `r` is reviewer `r`,
/// vertex `n_reviewers + p` is paper `p`.
#[derive(Clone, Debug)]
pub struct FraudarGraph {
    n_reviewers: usize,
    adj: Vec<Vec<(usize, f64)>>,
}

impl FraudarGraph {
    pub fn new(g: &BiGraph, choice: BiEdgeChoice) -> Self {
        Self::from_unlabeled(&g.unlabeled(choice), g.n_reviewers())
    }

    pub fn from_unlabeled(w: &WeightedGraph, n_reviewers: usize) -> Self {
        let n = w.n_vertices();
        let mut adj = vec![Vec::new(); n];
        for (r, p, mult) in w.edges() {
            debug_assert!(r < n_reviewers && p >= n_reviewers);
            let weight = mult as f64 / (5.0 + w.degree(p) as f64).ln();
            adj[r].push((p, weight));
            adj[p].push((r, weight));
        }
        FraudarGraph { n_reviewers, adj }
    }

    pub fn n_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn n_reviewers(&self) -> usize {
        self.n_reviewers
    }

    /// `g(S) / |S|`, zero for the empty set.
    pub fn objective(&self, subset: &[usize]) -> f64 {
        let (mask, size) = subset_mask(self.n_vertices(), subset);
        if size == 0 {
            return 0.0;
        }
        let mut mass = 0.0;
        for r in 0..self.n_reviewers.min(self.n_vertices()) {
            if mask[r] {
                mass += self.adj[r].iter().filter(|(p, _)| mask[*p]).map(|(_, w)| w).sum::<f64>();
            }
        }
        mass / size as f64
    }
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // reversed, so the max-heap pops the smallest weight, then lowest index
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

/// Peels the vertex whose removal loses the least edge weight and returns the
/// visited set with the highest `g(S) / |S|`.
pub fn fraudar(g: &FraudarGraph) -> Detection {
    let n = g.n_vertices();
    let mut degree: Vec<f64> = g.adj.iter().map(|l| l.iter().map(|(_, w)| w).sum()).collect();
    if degree.iter().all(|&d| d == 0.0) {
        return Detection::empty();
    }
    let mut alive = vec![true; n];
    let mut heap: BinaryHeap<Entry> = (0..n).map(|v| Entry(degree[v], v)).collect();
    let mut mass: f64 = degree[..g.n_reviewers.min(n)].iter().sum();
    let mut size = n;
    let mut best = (mass / size as f64, 0usize);
    let mut order = Vec::with_capacity(n);
    while size > 1 {
        let Entry(d, v) = heap.pop().expect("heap holds every live vertex");
        if !alive[v] || d.to_bits() != degree[v].to_bits() {
            continue;
        }
        alive[v] = false;
        order.push(v);
        mass -= d;
        size -= 1;
        for &(u, w) in &g.adj[v] {
            if alive[u] {
                degree[u] -= w;
                heap.push(Entry(degree[u], u));
            }
        }
        let f = mass / size as f64;
        if f > best.0 {
            best = (f, order.len());
        }
    }
    let mut keep = vec![true; n];
    for &v in &order[..best.1] {
        keep[v] = false;
    }
    let vertices: Vec<usize> = (0..n).filter(|&v| keep[v]).collect();
    Detection {
        objective: g.objective(&vertices),
        vertices,
        initialization: Initialization::None,
        empty: false,
    }
}

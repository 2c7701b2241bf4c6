//! Exact densest subgraph: maximize `W(S) / |S|`.
//!
//! Dinkelbach iteration over the parametric min-cut construction. For a
//! candidate ratio `p / q`, the cut network has arcs `s -> v` with capacity
//! `q * deg(v)`, `v -> t` with capacity `2p` and `u <-> v` with capacity
//! `q * w(u, v)`. A cut with source side `T` costs
//! `2qW - 2(q W(T) - p |T|)`, so the minimum cut exposes a set of strictly
//! higher density whenever one exists. All capacities are integers.

use std::collections::VecDeque;

use super::{Detection, Initialization};
use crate::graph::WeightedGraph;

/// `W(S) / |S|`; zero for the empty set.
pub fn average_degree_objective(g: &WeightedGraph, subset: &[usize]) -> f64 {
    let (_, size) = crate::graph::subset_mask(g.n_vertices(), subset);
    if size == 0 {
        return 0.0;
    }
    g.induced_weight(subset) as f64 / size as f64
}

pub fn dsd_exact(g: &WeightedGraph) -> Detection {
    let active: Vec<usize> = (0..g.n_vertices()).filter(|&v| g.degree(v) > 0).collect();
    if active.is_empty() {
        return Detection::empty();
    }
    let mut best = active.clone();
    let mut p = g.induced_weight(&best) as i64;
    let mut q = best.len() as i64;
    loop {
        let found = max_surplus_set(g, &active, p, q);
        let w = g.induced_weight(&found) as i64;
        if found.is_empty() || q * w - p * found.len() as i64 <= 0 {
            break;
        }
        p = w;
        q = found.len() as i64;
        best = found;
    }
    Detection {
        objective: average_degree_objective(g, &best),
        vertices: best,
        initialization: Initialization::None,
        empty: false,
    }
}

/// Source side of a minimum cut for ratio `p / q` over the `active` vertices.
fn max_surplus_set(g: &WeightedGraph, active: &[usize], p: i64, q: i64) -> Vec<usize> {
    let n = active.len();
    let mut local = vec![usize::MAX; g.n_vertices()];
    for (i, &v) in active.iter().enumerate() {
        local[v] = i;
    }
    let (s, t) = (n, n + 1);
    let mut net = Dinic::new(n + 2);
    for (i, &v) in active.iter().enumerate() {
        net.add_arc(s, i, q * g.degree(v) as i64, 0);
        net.add_arc(i, t, 2 * p, 0);
    }
    for (u, v, w) in g.edges() {
        let c = q * w as i64;
        net.add_arc(local[u], local[v], c, c);
    }
    net.max_flow(s, t);
    let side = net.source_side(s);
    (0..n).filter(|&i| side[i]).map(|i| active[i]).collect()
}

struct Arc {
    to: usize,
    cap: i64,
}

/// Dinic's maximum flow on integer capacities.
struct Dinic {
    arcs: Vec<Arc>,
    head: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            arcs: Vec::new(),
            head: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    /// Arc `u -> v` with capacity `cap` and reverse capacity `rev_cap`.
    fn add_arc(&mut self, u: usize, v: usize, cap: i64, rev_cap: i64) {
        self.head[u].push(self.arcs.len());
        self.arcs.push(Arc { to: v, cap });
        self.head[v].push(self.arcs.len());
        self.arcs.push(Arc { to: u, cap: rev_cap });
    }

    fn bfs(&mut self, s: usize) {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.head[u] {
                let Arc { to, cap } = self.arcs[e];
                if cap > 0 && self.level[to] < 0 {
                    self.level[to] = self.level[u] + 1;
                    queue.push_back(to);
                }
            }
        }
    }

    fn dfs(&mut self, u: usize, t: usize, limit: i64) -> i64 {
        if u == t {
            return limit;
        }
        while self.iter[u] < self.head[u].len() {
            let e = self.head[u][self.iter[u]];
            let Arc { to, cap } = self.arcs[e];
            if cap > 0 && self.level[to] == self.level[u] + 1 {
                let pushed = self.dfs(to, t, limit.min(cap));
                if pushed > 0 {
                    self.arcs[e].cap -= pushed;
                    self.arcs[e ^ 1].cap += pushed;
                    return pushed;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return flow;
            }
            self.iter.fill(0);
            loop {
                let pushed = self.dfs(s, t, i64::MAX);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
    }

    /// Vertices reachable from `s` in the residual network.
    fn source_side(&mut self, s: usize) -> Vec<bool> {
        self.bfs(s);
        self.level.iter().map(|&l| l >= 0).collect()
    }
}

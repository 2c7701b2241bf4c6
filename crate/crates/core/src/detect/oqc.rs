//! Optimal quasi-cliques: maximize the edge surplus
//! `W(S) - penalty * |S|(|S|-1)/2`.
//!
//! On the directed reviewer graph every directed edge weighs 1 and the
//! penalty is `2 * alpha`; on the bipartite graph the penalty is `alpha`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::local::{multi_start, InitPlan, MoveObjective};
use super::{Detection, Initialization};
use crate::graph::{subset_mask, WeightedGraph};

fn pairs(size: usize) -> f64 {
    (size * size.saturating_sub(1)) as f64 / 2.0
}

pub fn surplus_objective(g: &WeightedGraph, subset: &[usize], penalty: f64) -> f64 {
    let (_, size) = subset_mask(g.n_vertices(), subset);
    g.induced_weight(subset) as f64 - penalty * pairs(size)
}

/// Peels the vertex of smallest degree inside the current set (ties to the
/// lowest index) and returns the visited set of largest surplus.
pub fn oqc_greedy(g: &WeightedGraph, penalty: f64) -> Detection {
    let n = g.n_vertices();
    if g.total_weight() == 0 {
        return Detection::empty();
    }
    let mut degree: Vec<u64> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut heap: BinaryHeap<Reverse<(u64, usize)>> = (0..n).map(|v| Reverse((degree[v], v))).collect();
    let mut weight = g.total_weight();
    let mut size = n;
    let mut best = (weight as f64 - penalty * pairs(size), 0usize);
    let mut order = Vec::with_capacity(n);
    while size > 1 {
        let Reverse((d, v)) = heap.pop().expect("heap holds every live vertex");
        if !alive[v] || d != degree[v] {
            continue;
        }
        alive[v] = false;
        order.push(v);
        weight -= d;
        size -= 1;
        for &(u, w) in g.neighbors(v) {
            if alive[u] {
                degree[u] -= w as u64;
                heap.push(Reverse((degree[u], u)));
            }
        }
        let f = weight as f64 - penalty * pairs(size);
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
        objective: surplus_objective(g, &vertices, penalty),
        vertices,
        initialization: Initialization::None,
        empty: false,
    }
}

pub(crate) struct SurplusState<'g> {
    g: &'g WeightedGraph,
    penalty: f64,
    member: Vec<bool>,
    /// Weight from each vertex into the current set.
    conn: Vec<u64>,
    size: usize,
    weight: u64,
}

impl<'g> SurplusState<'g> {
    pub(crate) fn new(g: &'g WeightedGraph, penalty: f64, start: &[usize]) -> Self {
        let mut st = SurplusState {
            g,
            penalty,
            member: vec![false; g.n_vertices()],
            conn: vec![0; g.n_vertices()],
            size: 0,
            weight: 0,
        };
        for &v in start {
            if !st.member[v] {
                st.toggle(v);
            }
        }
        st
    }
}

impl MoveObjective for SurplusState<'_> {
    fn universe(&self) -> usize {
        self.member.len()
    }

    fn size(&self) -> usize {
        self.size
    }

    fn contains(&self, v: usize) -> bool {
        self.member[v]
    }

    fn value(&self) -> f64 {
        self.weight as f64 - self.penalty * pairs(self.size)
    }

    fn value_after_toggle(&self, v: usize) -> f64 {
        if self.member[v] {
            (self.weight - self.conn[v]) as f64 - self.penalty * pairs(self.size - 1)
        } else {
            (self.weight + self.conn[v]) as f64 - self.penalty * pairs(self.size + 1)
        }
    }

    fn toggle(&mut self, v: usize) {
        if self.member[v] {
            self.member[v] = false;
            self.size -= 1;
            self.weight -= self.conn[v];
            for &(u, w) in self.g.neighbors(v) {
                self.conn[u] -= w as u64;
            }
        } else {
            self.member[v] = true;
            self.size += 1;
            self.weight += self.conn[v];
            for &(u, w) in self.g.neighbors(v) {
                self.conn[u] += w as u64;
            }
        }
    }
}

/// Multi-start local search on the edge surplus. `heuristic` supplies the
/// heuristic starting set when the plan asks for one.
pub fn oqc_local(
    g: &WeightedGraph,
    penalty: f64,
    plan: InitPlan,
    seed: u64,
    heuristic: impl FnOnce() -> Vec<usize>,
) -> Detection {
    if g.total_weight() == 0 {
        return Detection::empty();
    }
    let starts = plan.starts(g.n_vertices(), seed, heuristic);
    match multi_start(starts, |s| SurplusState::new(g, penalty, s)) {
        Some(best) if !best.members.is_empty() => Detection {
            objective: surplus_objective(g, &best.members, penalty),
            vertices: best.members,
            initialization: best.init,
            empty: false,
        },
        _ => Detection::empty(),
    }
}

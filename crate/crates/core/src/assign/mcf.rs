//! Minimum-cost flow with integer costs (primal-dual).
//!
//! Each phase runs Dijkstra on reduced costs, updates the potentials, then
//! saturates a blocking flow on the arcs whose reduced cost is zero. Negative
//! arc costs are allowed as long as the initial network has no negative
//! cycle; initial potentials come from Bellman-Ford.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

const INF: i64 = i64::MAX / 4;

pub(crate) struct MinCostFlow {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
}

impl MinCostFlow {
    pub(crate) fn new(n: usize) -> Self {
        MinCostFlow {
            head: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
            cost: Vec::new(),
        }
    }

    /// Adds arc `u -> v`; returns its id.
    pub(crate) fn add_arc(&mut self, u: usize, v: usize, cap: i64, cost: i64) -> usize {
        let id = self.to.len();
        self.head[u].push(id);
        self.to.push(v);
        self.cap.push(cap);
        self.cost.push(cost);
        self.head[v].push(id + 1);
        self.to.push(u);
        self.cap.push(0);
        self.cost.push(-cost);
        id
    }

    /// Flow currently on arc `id`.
    pub(crate) fn flow(&self, id: usize) -> i64 {
        self.cap[id + 1]
    }

    fn initial_potentials(&self, s: usize) -> Vec<i64> {
        let n = self.head.len();
        let mut pot = vec![INF; n];
        pot[s] = 0;
        for _ in 0..n {
            let mut changed = false;
            for u in 0..n {
                if pot[u] == INF {
                    continue;
                }
                for &e in &self.head[u] {
                    if self.cap[e] > 0 && pot[u] + self.cost[e] < pot[self.to[e]] {
                        pot[self.to[e]] = pot[u] + self.cost[e];
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        // unreachable vertices never enter a residual path from s
        pot.iter().map(|&p| if p == INF { 0 } else { p }).collect()
    }

    /// Sends up to `limit` units from `s` to `t` at minimum cost. Returns the
    /// amount sent.
    pub(crate) fn run(&mut self, s: usize, t: usize, limit: i64) -> i64 {
        let n = self.head.len();
        let mut pot = self.initial_potentials(s);
        let mut sent = 0;
        let mut dist = vec![INF; n];
        let mut level = vec![0i32; n];
        let mut iter = vec![0usize; n];
        while sent < limit {
            // Dijkstra on reduced costs, stopping once t is settled
            dist.fill(INF);
            dist[s] = 0;
            let mut heap = BinaryHeap::from([Reverse((0i64, s))]);
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > dist[u] {
                    continue;
                }
                if u == t {
                    break;
                }
                for &e in &self.head[u] {
                    if self.cap[e] == 0 {
                        continue;
                    }
                    let v = self.to[e];
                    let nd = d + self.cost[e] + pot[u] - pot[v];
                    if nd < dist[v] {
                        dist[v] = nd;
                        heap.push(Reverse((nd, v)));
                    }
                }
            }
            if dist[t] == INF {
                break;
            }
            let dt = dist[t];
            for v in 0..n {
                pot[v] += dist[v].min(dt);
            }
            // blocking flow over zero reduced-cost residual arcs
            loop {
                level.fill(-1);
                level[s] = 0;
                let mut queue = VecDeque::from([s]);
                while let Some(u) = queue.pop_front() {
                    for &e in &self.head[u] {
                        let v = self.to[e];
                        if self.cap[e] > 0 && level[v] < 0 && self.cost[e] + pot[u] - pot[v] == 0 {
                            level[v] = level[u] + 1;
                            queue.push_back(v);
                        }
                    }
                }
                if level[t] < 0 {
                    break;
                }
                iter.fill(0);
                let mut pushed_any = false;
                while sent < limit {
                    let f = self.dfs(s, t, limit - sent, &pot, &level, &mut iter);
                    if f == 0 {
                        break;
                    }
                    sent += f;
                    pushed_any = true;
                }
                if !pushed_any || sent >= limit {
                    break;
                }
            }
        }
        sent
    }

    fn dfs(&mut self, u: usize, t: usize, limit: i64, pot: &[i64], level: &[i32], iter: &mut [usize]) -> i64 {
        if u == t {
            return limit;
        }
        while iter[u] < self.head[u].len() {
            let e = self.head[u][iter[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && level[v] == level[u] + 1 && self.cost[e] + pot[u] - pot[v] == 0 {
                let f = self.dfs(v, t, limit.min(self.cap[e]), pot, level, iter);
                if f > 0 {
                    self.cap[e] -= f;
                    self.cap[e ^ 1] += f;
                    return f;
                }
            }
            iter[u] += 1;
        }
        0
    }

    /// Total cost of the current flow.
    #[cfg(test)]
    pub(crate) fn total_cost(&self) -> i64 {
        (0..self.to.len())
            .step_by(2)
            .map(|e| self.flow(e) * self.cost[e])
            .sum()
    }
}

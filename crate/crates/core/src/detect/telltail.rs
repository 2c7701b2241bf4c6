//! TellTail scoring: the adjusted mass of a subset, standardized by a
//! size-dependent scale and mapped through a generalized Pareto tail.
//!
//! Adjusted mass uses the degree-preserving null model of the original
//! method, `W(S) - D(S)^2 / (4W)` with `D(S)` the degree sum of `S` and `W`
//! the total edge weight.

use serde::{Deserialize, Serialize};

use super::local::{multi_start, InitPlan, MoveObjective};
use super::Detection;
use crate::error::{Error, Result};
use crate::graph::{subset_mask, WeightedGraph};

/// Generalized Pareto tail used to score standardized adjusted mass.
///
/// A subset of size `k` is standardized as `z = (mass - location) /
/// (scale * k^size_exponent)` and scored `F(z) = 1 - (1 + shape z)^(-1/shape)`
/// for `z >= 0` (0 below). With `size_exponent = 1` the standardized value of
/// a disjoint union is a weighted average of its parts, so merging unrelated
/// components never raises the score.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GPTail {
    pub shape: f64,
    pub scale: f64,
    pub location: f64,
    pub size_exponent: f64,
}

impl Default for GPTail {
    fn default() -> Self {
        GPTail {
            shape: 0.1,
            scale: 1.0,
            location: 0.0,
            size_exponent: 1.0,
        }
    }
}

impl GPTail {
    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::config(format!("tail scale must be positive, got {}", self.scale)));
        }
        if !self.shape.is_finite() || !self.location.is_finite() || !self.size_exponent.is_finite() {
            return Err(Error::config("tail parameters must be finite"));
        }
        Ok(())
    }

    pub fn standardize(&self, mass: f64, size: usize) -> f64 {
        if size == 0 {
            return 0.0;
        }
        (mass - self.location) / (self.scale * (size as f64).powf(self.size_exponent))
    }

    /// Generalized Pareto CDF of a standardized value.
    pub fn cdf(&self, z: f64) -> f64 {
        if z <= 0.0 {
            return 0.0;
        }
        if self.shape.abs() < 1e-12 {
            return 1.0 - (-z).exp();
        }
        let base = 1.0 + self.shape * z;
        if base <= 0.0 {
            return 1.0;
        }
        1.0 - base.powf(-1.0 / self.shape)
    }
}

/// Subset edge weight minus its null-model expectation; 0 for the empty set.
pub fn adjusted_mass(g: &WeightedGraph, subset: &[usize]) -> f64 {
    let (mask, size) = subset_mask(g.n_vertices(), subset);
    if size == 0 || g.total_weight() == 0 {
        return 0.0;
    }
    let degree_sum: u64 = (0..g.n_vertices()).filter(|&v| mask[v]).map(|v| g.degree(v)).sum();
    mass_from(g.induced_weight(subset), degree_sum, g.total_weight())
}

fn mass_from(weight: u64, degree_sum: u64, total: u64) -> f64 {
    let d = degree_sum as f64;
    weight as f64 - d * d / (4.0 * total as f64)
}

/// Standardized adjusted mass, the quantity local search maximizes.
pub fn telltail_z(g: &WeightedGraph, subset: &[usize], tail: &GPTail) -> f64 {
    let (_, size) = subset_mask(g.n_vertices(), subset);
    tail.standardize(adjusted_mass(g, subset), size)
}

/// Reported TellTail objective `F(z)`.
pub fn telltail_objective(g: &WeightedGraph, subset: &[usize], tail: &GPTail) -> f64 {
    tail.cdf(telltail_z(g, subset, tail))
}

struct TailState<'g> {
    g: &'g WeightedGraph,
    tail: GPTail,
    degree: Vec<u64>,
    member: Vec<bool>,
    conn: Vec<u64>,
    size: usize,
    weight: u64,
    degree_sum: u64,
}

impl<'g> TailState<'g> {
    fn new(g: &'g WeightedGraph, tail: GPTail, start: &[usize]) -> Self {
        let mut st = TailState {
            g,
            tail,
            degree: (0..g.n_vertices()).map(|v| g.degree(v)).collect(),
            member: vec![false; g.n_vertices()],
            conn: vec![0; g.n_vertices()],
            size: 0,
            weight: 0,
            degree_sum: 0,
        };
        for &v in start {
            if !st.member[v] {
                st.toggle(v);
            }
        }
        st
    }

    fn z(&self, weight: u64, degree_sum: u64, size: usize) -> f64 {
        if size == 0 {
            return 0.0;
        }
        self.tail
            .standardize(mass_from(weight, degree_sum, self.g.total_weight()), size)
    }
}

impl MoveObjective for TailState<'_> {
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
        self.z(self.weight, self.degree_sum, self.size)
    }

    fn value_after_toggle(&self, v: usize) -> f64 {
        if self.member[v] {
            self.z(self.weight - self.conn[v], self.degree_sum - self.degree[v], self.size - 1)
        } else {
            self.z(self.weight + self.conn[v], self.degree_sum + self.degree[v], self.size + 1)
        }
    }

    fn toggle(&mut self, v: usize) {
        let adding = !self.member[v];
        self.member[v] = adding;
        if adding {
            self.size += 1;
            self.weight += self.conn[v];
            self.degree_sum += self.degree[v];
        } else {
            self.size -= 1;
            self.weight -= self.conn[v];
            self.degree_sum -= self.degree[v];
        }
        for &(u, w) in self.g.neighbors(v) {
            if adding {
                self.conn[u] += w as u64;
            } else {
                self.conn[u] -= w as u64;
            }
        }
    }
}

/// Multi-start local search maximizing the standardized adjusted mass.
pub fn telltail(
    g: &WeightedGraph,
    tail: &GPTail,
    plan: InitPlan,
    seed: u64,
    heuristic: impl FnOnce() -> Vec<usize>,
) -> Result<Detection> {
    tail.validate()?;
    if g.total_weight() == 0 {
        return Ok(Detection::empty());
    }
    let starts = plan.starts(g.n_vertices(), seed, heuristic);
    Ok(match multi_start(starts, |s| TailState::new(g, *tail, s)) {
        Some(best) if !best.members.is_empty() => Detection {
            objective: telltail_objective(g, &best.members, tail),
            vertices: best.members,
            initialization: best.init,
            empty: false,
        },
        _ => Detection::empty(),
    })
}

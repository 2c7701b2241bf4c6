//! Bid-aware quasi-clique over reviewer sets:
//! `f(S) = bids(S -> P[S]) - alpha * (|S||P[S]| - authored - conflicted)`.

use super::local::{multi_start, InitPlan, MoveObjective};
use super::Detection;
use crate::graph::{BiGraph, BidSubsetState, DensityParts};

fn value_of(parts: DensityParts, alpha: f64) -> f64 {
    parts.bids as f64 - alpha * parts.possible() as f64
}

pub fn specialized_objective(g: &BiGraph, subset: &[usize], alpha: f64) -> f64 {
    value_of(g.density_parts(subset), alpha)
}

struct SpecState<'g> {
    state: BidSubsetState<'g>,
    alpha: f64,
}

impl MoveObjective for SpecState<'_> {
    fn universe(&self) -> usize {
        self.state.graph().n_reviewers()
    }

    fn size(&self) -> usize {
        self.state.parts().reviewers
    }

    fn contains(&self, v: usize) -> bool {
        self.state.contains(v)
    }

    fn value(&self) -> f64 {
        value_of(self.state.parts(), self.alpha)
    }

    fn value_after_toggle(&self, v: usize) -> f64 {
        let parts = if self.state.contains(v) {
            self.state.parts_after_remove(v)
        } else {
            self.state.parts_after_add(v)
        };
        value_of(parts, self.alpha)
    }

    fn toggle(&mut self, v: usize) {
        if self.state.contains(v) {
            self.state.remove(v);
        } else {
            self.state.add(v);
        }
    }
}

/// Multi-start local search over reviewer subsets. `heuristic` yields the
/// reviewer set used as the heuristic start.
pub fn oqc_specialized(
    g: &BiGraph,
    alpha: f64,
    plan: InitPlan,
    seed: u64,
    heuristic: impl FnOnce() -> Vec<usize>,
) -> Detection {
    if g.n_bids() == 0 {
        return Detection::empty();
    }
    let starts = plan.starts(g.n_reviewers(), seed, heuristic);
    let best = multi_start(starts, |s| SpecState {
        state: BidSubsetState::with_members(g, s),
        alpha,
    });
    match best {
        Some(best) if !best.members.is_empty() => Detection {
            objective: specialized_objective(g, &best.members, alpha),
            vertices: best.members,
            initialization: best.init,
            empty: false,
        },
        _ => Detection::empty(),
    }
}

//! Single-vertex add/remove hill climbing and the multi-start driver.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::Initialization;
use crate::rng::{derive_seed, rng_from_seed};

/// Minimum gain for a move to count as an improvement.
pub const EPS: f64 = 1e-9;

/// Which starting sets a local search uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitPlan {
    pub heuristic: bool,
    pub random_starts: usize,
}

impl InitPlan {
    pub const HEURISTIC_ONLY: InitPlan = InitPlan {
        heuristic: true,
        random_starts: 0,
    };

    /// One heuristic start plus ten random ones.
    pub const STANDARD: InitPlan = InitPlan {
        heuristic: true,
        random_starts: 10,
    };

    /// Starting sets in order: the heuristic one first, then random subsets
    /// that include each of the `n` vertices with probability 1/2.
    pub fn starts(&self, n: usize, seed: u64, heuristic: impl FnOnce() -> Vec<usize>) -> Vec<(Initialization, Vec<usize>)> {
        let mut out = Vec::with_capacity(self.random_starts + 1);
        if self.heuristic {
            out.push((Initialization::Heuristic, heuristic()));
        }
        for i in 0..self.random_starts {
            let mut rng = rng_from_seed(derive_seed(&[seed, i as u64]));
            let set = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            out.push((Initialization::Random(i), set));
        }
        out
    }
}

/// Incrementally evaluated set function over vertices `0..n`.
pub(crate) trait MoveObjective {
    fn universe(&self) -> usize;
    fn size(&self) -> usize;
    fn contains(&self, v: usize) -> bool;
    fn value(&self) -> f64;
    /// Value after adding `v` (if absent) or removing it (if present).
    fn value_after_toggle(&self, v: usize) -> f64;
    fn toggle(&mut self, v: usize);

    fn members(&self) -> Vec<usize> {
        (0..self.universe()).filter(|&v| self.contains(v)).collect()
    }
}

/// Best-improvement hill climbing. A move must gain more than [`EPS`]; ties
/// between moves go to the lowest vertex index. The set never becomes empty
/// through a removal.
pub(crate) fn hill_climb<O: MoveObjective>(obj: &mut O) {
    loop {
        let mut best_value = obj.value() + EPS;
        let mut best_move = None;
        let size = obj.size();
        for v in 0..obj.universe() {
            if size == 1 && obj.contains(v) {
                continue;
            }
            let val = obj.value_after_toggle(v);
            if val > best_value {
                best_value = val;
                best_move = Some(v);
            }
        }
        match best_move {
            Some(v) => obj.toggle(v),
            None => break,
        }
    }
}

/// Outcome of a multi-start search, in the objective's own units.
pub(crate) struct Climbed {
    pub members: Vec<usize>,
    pub value: f64,
    pub init: Initialization,
}

/// Runs [`hill_climb`] from every start and keeps the best result (ties to
/// the earliest start).
pub(crate) fn multi_start<O: MoveObjective>(
    starts: Vec<(Initialization, Vec<usize>)>,
    mut make: impl FnMut(&[usize]) -> O,
) -> Option<Climbed> {
    let mut best: Option<Climbed> = None;
    for (init, start) in starts {
        let mut obj = make(&start);
        hill_climb(&mut obj);
        let value = obj.value();
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(Climbed {
                members: obj.members(),
                value,
                init,
            });
        }
    }
    best
}

/// `true` when no single add or remove (that keeps the set non-empty)
/// raises `f` by more than [`EPS`]. `f` is evaluated from scratch on every
/// neighbor set, independently of any incremental bookkeeping.
pub fn is_local_optimum(n: usize, subset: &[usize], f: impl Fn(&[usize]) -> f64) -> bool {
    let mut current: Vec<usize> = subset.to_vec();
    current.sort_unstable();
    current.dedup();
    let base = f(&current);
    for v in 0..n {
        let next: Vec<usize> = match current.binary_search(&v) {
            Ok(i) => {
                if current.len() == 1 {
                    continue;
                }
                let mut s = current.clone();
                s.remove(i);
                s
            }
            Err(i) => {
                let mut s = current.clone();
                s.insert(i, v);
                s
            }
        };
        if f(&next) > base + EPS {
            return false;
        }
    }
    true
}

//! Similarity scores, maximum-similarity paper assignment and the metrics
//! computed on top of it.
//!
//! The assignment is a min-cost flow: source to each paper (capacity
//! `paper_load`), paper to each non-conflicted reviewer (capacity 1, cost
//! `-S`), reviewer to sink (capacity `reviewer_cap`). Similarities are scaled
//! to integers relative to the largest entry, so a uniform rescaling of the
//! matrix leaves the solver's choices unchanged.

mod mcf;

use std::collections::BTreeSet;
use std::io::Write;

use serde::Serialize;

use crate::dataset::{ConferenceDataset, Pair};
use crate::error::{Error, Result};
use crate::inject::CollusionPlan;
use crate::matrix::Matrix;
use mcf::MinCostFlow;

pub const DEFAULT_PAPER_LOAD: usize = 3;
pub const DEFAULT_REVIEWER_CAP: usize = 6;

const COST_SCALE: f64 = (1u64 << 40) as f64;

/// Reviewer-by-paper similarity scores, nonnegative and finite.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityMatrix(Matrix);

impl SimilarityMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if let Some(v) = m.values().iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::config(format!("similarity {v} is not a finite nonnegative value")));
        }
        Ok(SimilarityMatrix(m))
    }

    pub fn n_reviewers(&self) -> usize {
        self.0.rows()
    }

    pub fn n_papers(&self) -> usize {
        self.0.cols()
    }

    pub fn get(&self, r: usize, p: usize) -> f64 {
        self.0.get(r, p)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }
}

/// `S = T/2` without a bid and `S = T` with one (any positive level).
pub fn similarity(ds: &ConferenceDataset) -> Result<SimilarityMatrix> {
    let t = ds
        .text_sim()
        .ok_or_else(|| Error::config("dataset has no text similarities"))?;
    let mut s = Matrix::zeros(t.rows(), t.cols());
    for r in 0..t.rows() {
        for p in 0..t.cols() {
            let v = t.get(r, p);
            s.set(r, p, if ds.is_bid((r, p)) { v } else { v / 2.0 });
        }
    }
    SimilarityMatrix::new(s)
}

/// Reviewers assigned to each paper.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assignment {
    pub paper_load: usize,
    pub reviewer_cap: usize,
    /// Assigned reviewers per paper, ascending.
    pub reviewers: Vec<Vec<usize>>,
}

impl Assignment {
    pub fn n_papers(&self) -> usize {
        self.reviewers.len()
    }

    pub fn reviewers_of(&self, p: usize) -> &[usize] {
        &self.reviewers[p]
    }

    pub fn contains(&self, (r, p): Pair) -> bool {
        self.reviewers[p].binary_search(&r).is_ok()
    }

    /// Assigned `(reviewer, paper)` pairs in paper-major order.
    pub fn pairs(&self) -> impl Iterator<Item = Pair> + '_ {
        self.reviewers
            .iter()
            .enumerate()
            .flat_map(|(p, rs)| rs.iter().map(move |&r| (r, p)))
    }

    /// Total similarity, summed in paper-major order.
    pub fn objective(&self, sim: &SimilarityMatrix) -> f64 {
        self.pairs().map(|(r, p)| sim.get(r, p)).sum()
    }

    /// Checks loads, caps and conflicts.
    pub fn validate(&self, n_reviewers: usize, conflicts: &BTreeSet<Pair>) -> Result<()> {
        let mut load = vec![0usize; n_reviewers];
        for (p, rs) in self.reviewers.iter().enumerate() {
            if rs.len() != self.paper_load {
                return Err(Error::invariant(format!(
                    "paper {p} has {} reviewers, expected {}",
                    rs.len(),
                    self.paper_load
                )));
            }
            for &r in rs {
                if r >= n_reviewers {
                    return Err(Error::invariant(format!("reviewer {r} out of range")));
                }
                if conflicts.contains(&(r, p)) {
                    return Err(Error::invariant(format!("conflicted pair ({r}, {p}) assigned")));
                }
                load[r] += 1;
            }
        }
        if let Some(r) = load.iter().position(|&l| l > self.reviewer_cap) {
            return Err(Error::invariant(format!(
                "reviewer {r} has {} papers, cap is {}",
                load[r], self.reviewer_cap
            )));
        }
        Ok(())
    }

    /// Writes `paper,reviewer` rows using dataset names.
    pub fn write_csv<W: Write>(&self, ds: &ConferenceDataset, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["paper", "reviewer"])?;
        for (r, p) in self.pairs() {
            w.write_record([ds.paper_name(p), ds.reviewer_name(r)])?;
        }
        w.flush()?;
        Ok(())
    }
}

struct Deficit {
    paper: usize,
    assigned: usize,
}

fn solve_indexed(
    sim: &SimilarityMatrix,
    conflicts: &BTreeSet<Pair>,
    paper_load: usize,
    reviewer_cap: usize,
) -> Result<std::result::Result<Assignment, Deficit>> {
    if paper_load == 0 || reviewer_cap == 0 {
        return Err(Error::config("paper load and reviewer cap must be positive"));
    }
    let (nr, np) = (sim.n_reviewers(), sim.n_papers());
    let max = sim.matrix().values().iter().copied().fold(0.0, f64::max);
    let scale = if max > 0.0 { COST_SCALE / max } else { 0.0 };
    let (s, t) = (0, 1);
    let paper_node = |p: usize| 2 + p;
    let reviewer_node = |r: usize| 2 + np + r;
    let mut flow = MinCostFlow::new(2 + np + nr);
    for p in 0..np {
        flow.add_arc(s, paper_node(p), paper_load as i64, 0);
    }
    let mut arcs = Vec::new();
    for p in 0..np {
        for r in 0..nr {
            if !conflicts.contains(&(r, p)) {
                let cost = -(sim.get(r, p) * scale).round() as i64;
                arcs.push((flow.add_arc(paper_node(p), reviewer_node(r), 1, cost), r, p));
            }
        }
    }
    for r in 0..nr {
        flow.add_arc(reviewer_node(r), t, reviewer_cap as i64, 0);
    }
    flow.run(s, t, (paper_load * np) as i64);
    let mut reviewers = vec![Vec::new(); np];
    for &(arc, r, p) in &arcs {
        if flow.flow(arc) > 0 {
            reviewers[p].push(r);
        }
    }
    if let Some(paper) = (0..np).find(|&p| reviewers[p].len() < paper_load) {
        return Ok(Err(Deficit {
            paper,
            assigned: reviewers[paper].len(),
        }));
    }
    Ok(Ok(Assignment {
        paper_load,
        reviewer_cap,
        reviewers,
    }))
}

/// Maximum-similarity assignment. An infeasible instance reports the first
/// paper left short of `paper_load`, identified by its index.
pub fn solve_assignment(
    sim: &SimilarityMatrix,
    conflicts: &BTreeSet<Pair>,
    paper_load: usize,
    reviewer_cap: usize,
) -> Result<Assignment> {
    solve_indexed(sim, conflicts, paper_load, reviewer_cap)?.map_err(|d| Error::Infeasible {
        paper: d.paper.to_string(),
        assigned: d.assigned,
        required: paper_load,
    })
}

/// Similarity from the dataset, then the optimal assignment under its
/// conflicts. Infeasibility names the deficient paper.
pub fn assign_dataset(ds: &ConferenceDataset, paper_load: usize, reviewer_cap: usize) -> Result<Assignment> {
    let sim = similarity(ds)?;
    solve_indexed(&sim, ds.conflicts(), paper_load, reviewer_cap)?.map_err(|d| Error::Infeasible {
        paper: ds.paper_name(d.paper).to_string(),
        assigned: d.assigned,
        required: paper_load,
    })
}

/// Jaccard similarity; `vacuous` marks the both-empty case scored 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Jaccard {
    pub value: f64,
    pub vacuous: bool,
}

pub fn jaccard(found: &[usize], truth: &[usize]) -> Jaccard {
    let a: BTreeSet<usize> = found.iter().copied().collect();
    let b: BTreeSet<usize> = truth.iter().copied().collect();
    let union = a.union(&b).count();
    if union == 0 {
        return Jaccard {
            value: 1.0,
            vacuous: true,
        };
    }
    Jaccard {
        value: a.intersection(&b).count() as f64 / union as f64,
        vacuous: false,
    }
}

/// Manipulation success of a ring under an assignment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SuccessMetrics {
    /// Fraction of ring-authored papers with at least one ring reviewer.
    pub paper_frac: f64,
    /// Fraction of ring members with a paper reviewed by another member.
    pub colluder_frac: f64,
}

pub fn success_metrics(
    assignment: &Assignment,
    plan: &CollusionPlan,
    ds: &ConferenceDataset,
) -> Result<SuccessMetrics> {
    ring_success(assignment, &plan.colluders, ds)
}

/// [`success_metrics`] for an explicit ring.
pub fn ring_success(assignment: &Assignment, ring: &[usize], ds: &ConferenceDataset) -> Result<SuccessMetrics> {
    let ring: BTreeSet<usize> = ring.iter().copied().collect();
    let authors = ds.authors_by_paper();
    let ring_papers: Vec<usize> = (0..ds.n_papers())
        .filter(|&p| authors[p].iter().any(|a| ring.contains(a)))
        .collect();
    if ring_papers.is_empty() {
        return Err(Error::Degenerate("the ring authored no papers".into()));
    }
    let mut hit_papers = 0;
    let mut satisfied = BTreeSet::new();
    for &p in &ring_papers {
        let assigned = assignment.reviewers_of(p);
        if assigned.iter().any(|r| ring.contains(r)) {
            hit_papers += 1;
        }
        for &a in authors[p].iter().filter(|a| ring.contains(a)) {
            if assigned.iter().any(|&r| r != a && ring.contains(&r)) {
                satisfied.insert(a);
            }
        }
    }
    Ok(SuccessMetrics {
        paper_frac: hit_papers as f64 / ring_papers.len() as f64,
        colluder_frac: satisfied.len() as f64 / ring.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::BidLevel;
    use crate::rng::rng_from_seed;
    use rand::seq::SliceRandom;
    use rand::Rng as _;

    fn sim(rows: &[Vec<f64>]) -> SimilarityMatrix {
        SimilarityMatrix::new(Matrix::from_rows(rows)).unwrap()
    }

    /// Best objective over every feasible assignment, by recursion over the
    /// papers and their reviewer subsets.
    fn exhaustive(s: &SimilarityMatrix, conflicts: &BTreeSet<Pair>, load: usize, cap: usize) -> Option<f64> {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..n {
                for rest in subsets(n, k - 1) {
                    if rest.first().is_none_or(|&x| x > first) {
                        let mut v = vec![first];
                        v.extend(rest);
                        out.push(v);
                    }
                }
            }
            out
        }
        fn go(
            p: usize,
            s: &SimilarityMatrix,
            conflicts: &BTreeSet<Pair>,
            cands: &[Vec<usize>],
            used: &mut Vec<usize>,
            cap: usize,
        ) -> Option<f64> {
            if p == s.n_papers() {
                return Some(0.0);
            }
            let mut best: Option<f64> = None;
            for set in cands {
                if set.iter().any(|&r| conflicts.contains(&(r, p)) || used[r] == cap) {
                    continue;
                }
                set.iter().for_each(|&r| used[r] += 1);
                if let Some(rest) = go(p + 1, s, conflicts, cands, used, cap) {
                    let v = set.iter().map(|&r| s.get(r, p)).sum::<f64>() + rest;
                    best = Some(best.map_or(v, |b: f64| b.max(v)));
                }
                set.iter().for_each(|&r| used[r] -= 1);
            }
            best
        }
        let cands = subsets(s.n_reviewers(), load);
        go(0, s, conflicts, &cands, &mut vec![0; s.n_reviewers()], cap)
    }

    fn random_instance(seed: u64, nr: usize, np: usize, conflict_prob: f64) -> (SimilarityMatrix, BTreeSet<Pair>) {
        let mut rng = rng_from_seed(seed);
        let rows: Vec<Vec<f64>> = (0..nr).map(|_| (0..np).map(|_| rng.gen::<f64>()).collect()).collect();
        let conflicts = (0..nr)
            .flat_map(|r| (0..np).map(move |p| (r, p)))
            .filter(|_| rng.gen_bool(conflict_prob))
            .collect();
        (sim(&rows), conflicts)
    }

    #[test]
    fn similarity_formula() {
        let mut b = ConferenceDataset::builder();
        b.bid("a", "x", BidLevel::YES).text_sim("a", "x", 1.0);
        b.text_sim("a", "y", 0.5);
        b.bid("b", "x", BidLevel::MAYBE).text_sim("b", "x", 0.0);
        b.text_sim("b", "y", 0.0);
        let s = similarity(&b.build().unwrap()).unwrap();
        assert_eq!(s.get(0, 0), 1.0);
        assert_eq!(s.get(0, 1), 0.25);
        assert_eq!(s.get(1, 0), 0.0);
        assert_eq!(s.get(1, 1), 0.0);
    }

    #[test]
    fn missing_text_sim_is_config_error() {
        let mut b = ConferenceDataset::builder();
        b.bid("a", "x", BidLevel::YES);
        assert!(matches!(similarity(&b.build().unwrap()), Err(Error::Config(_))));
    }

    #[test]
    fn forced_single_paper() {
        let s = sim(&[vec![0.0], vec![0.3], vec![0.9]]);
        let a = solve_assignment(&s, &BTreeSet::new(), 3, 6).unwrap();
        assert_eq!(a.reviewers, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn two_paper_example() {
        let s = sim(&[vec![0.9, 0.1], vec![0.8, 0.2], vec![0.1, 0.7]]);
        let a = solve_assignment(&s, &BTreeSet::new(), 1, 1).unwrap();
        assert_eq!(a.reviewers, vec![vec![0], vec![2]]);
        assert!((a.objective(&s) - 1.6).abs() < 1e-12);
    }

    #[test]
    fn matches_exhaustive_optimum() {
        for seed in 0..30 {
            let mut rng = rng_from_seed(seed + 500);
            let np = rng.gen_range(1..=5);
            let nr = rng.gen_range(3..=5);
            let load = rng.gen_range(1..=2);
            let cap = rng.gen_range(1..=3);
            let (s, conflicts) = random_instance(seed, nr, np, 0.15);
            match (exhaustive(&s, &conflicts, load, cap), solve_assignment(&s, &conflicts, load, cap)) {
                (Some(best), Ok(a)) => {
                    a.validate(nr, &conflicts).unwrap();
                    assert!((a.objective(&s) - best).abs() < 1e-9, "seed {seed}");
                }
                (None, Err(Error::Infeasible { required, assigned, .. })) => {
                    assert_eq!(required, load);
                    assert!(assigned < load);
                }
                (e, a) => panic!("seed {seed}: oracle {e:?} vs solver {a:?}"),
            }
        }
    }

    #[test]
    fn infeasible_reports_deficient_paper() {
        // paper 1 is conflicted with both reviewers
        let s = sim(&[vec![0.5, 0.5], vec![0.5, 0.5]]);
        let conflicts = BTreeSet::from([(0, 1), (1, 1)]);
        match solve_assignment(&s, &conflicts, 1, 2) {
            Err(Error::Infeasible {
                paper,
                assigned,
                required,
            }) => assert_eq!((paper.as_str(), assigned, required), ("1", 0, 1)),
            other => panic!("{other:?}"),
        }
        // capacity shortfall
        let s = sim(&[vec![0.5, 0.5, 0.5]]);
        assert!(matches!(
            solve_assignment(&s, &BTreeSet::new(), 1, 2),
            Err(Error::Infeasible { .. })
        ));
    }

    fn random_feasible(nr: usize, np: usize, load: usize, cap: usize, conflicts: &BTreeSet<Pair>, seed: u64) -> Option<Assignment> {
        let mut rng = rng_from_seed(seed);
        let mut used = vec![0; nr];
        let mut reviewers = Vec::new();
        for p in 0..np {
            let mut pool: Vec<usize> = (0..nr).filter(|&r| used[r] < cap && !conflicts.contains(&(r, p))).collect();
            if pool.len() < load {
                return None;
            }
            pool.shuffle(&mut rng);
            let mut chosen = pool[..load].to_vec();
            chosen.sort_unstable();
            chosen.iter().for_each(|&r| used[r] += 1);
            reviewers.push(chosen);
        }
        Some(Assignment {
            paper_load: load,
            reviewer_cap: cap,
            reviewers,
        })
    }

    #[test]
    fn dominates_random_feasible_assignments() {
        let (nr, np, load, cap) = (12, 10, 3, 4);
        let (s, conflicts) = random_instance(77, nr, np, 0.1);
        let best = solve_assignment(&s, &conflicts, load, cap).unwrap();
        best.validate(nr, &conflicts).unwrap();
        let opt = best.objective(&s);
        let mut seen = 0;
        for seed in 0..3000 {
            if let Some(a) = random_feasible(nr, np, load, cap, &conflicts, seed) {
                a.validate(nr, &conflicts).unwrap();
                assert!(a.objective(&s) <= opt + 1e-9);
                seen += 1;
                if seen == 1000 {
                    break;
                }
            }
        }
        assert_eq!(seen, 1000);
    }

    #[test]
    fn doubling_scores_keeps_assignment_optimal() {
        for seed in 0..10 {
            let (s, conflicts) = random_instance(seed + 40, 5, 4, 0.1);
            let Ok(a) = solve_assignment(&s, &conflicts, 2, 2) else { continue };
            let doubled = SimilarityMatrix::new(s.matrix().map(|v| 2.0 * v)).unwrap();
            let b = solve_assignment(&doubled, &conflicts, 2, 2).unwrap();
            let opt = exhaustive(&doubled, &conflicts, 2, 2).unwrap();
            assert!((b.objective(&doubled) - 2.0 * a.objective(&s)).abs() < 1e-9);
            assert!((a.objective(&doubled) - opt).abs() < 1e-9);
        }
    }

    #[test]
    fn jaccard_cases() {
        assert_eq!(jaccard(&[1, 2], &[2, 1]).value, 1.0);
        assert_eq!(jaccard(&[1, 2], &[3]).value, 0.0);
        let truth: Vec<usize> = (0..10).collect();
        let found: Vec<usize> = (0..5).chain(20..25).collect();
        assert!((jaccard(&found, &truth).value - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(jaccard(&[], &[]), Jaccard { value: 1.0, vacuous: true });
        assert_eq!(jaccard(&[4], &[]).value, 0.0);
        assert_eq!(jaccard(&[1, 5, 7], &[5, 9]), jaccard(&[5, 9], &[1, 5, 7]));
    }

    fn ring_dataset() -> ConferenceDataset {
        // reviewers r0..r4, ring {r0,r1,r2}; papers p0..p3
        let mut b = ConferenceDataset::builder();
        for r in ["r0", "r1", "r2", "r3", "r4"] {
            b.reviewer(r);
        }
        b.author("r0", "p0").author("r1", "p0").author("r1", "p1").author("r2", "p2").author("r3", "p3");
        b.build().unwrap()
    }

    #[test]
    fn success_metrics_hand_count() {
        let ds = ring_dataset();
        let ring = [0, 1, 2];
        // p0 gets r2 (other member for r0 and r1); p1 none; p2 gets r3 only
        let a = Assignment {
            paper_load: 1,
            reviewer_cap: 2,
            reviewers: vec![vec![2], vec![4], vec![3], vec![0]],
        };
        let m = ring_success(&a, &ring, &ds).unwrap();
        assert!((m.paper_frac - 1.0 / 3.0).abs() < 1e-15);
        assert!((m.colluder_frac - 2.0 / 3.0).abs() < 1e-15);
        let none = Assignment {
            reviewers: vec![vec![3], vec![4], vec![3], vec![4]],
            ..a.clone()
        };
        assert_eq!(
            ring_success(&none, &ring, &ds).unwrap(),
            SuccessMetrics { paper_frac: 0.0, colluder_frac: 0.0 }
        );
        let all = Assignment {
            reviewers: vec![vec![2], vec![0], vec![1], vec![3]],
            ..a
        };
        assert_eq!(
            ring_success(&all, &ring, &ds).unwrap(),
            SuccessMetrics { paper_frac: 1.0, colluder_frac: 1.0 }
        );
    }

    #[test]
    fn ring_without_papers_is_rejected() {
        let ds = ring_dataset();
        let a = Assignment {
            paper_load: 1,
            reviewer_cap: 2,
            reviewers: vec![vec![2], vec![4], vec![3], vec![0]],
        };
        assert!(matches!(ring_success(&a, &[4], &ds), Err(Error::Degenerate(_))));
    }

    #[test]
    fn dataset_assignment_names_deficient_paper() {
        let mut b = ConferenceDataset::builder();
        b.text_sim("a", "x", 0.2).text_sim("a", "y", 0.4);
        b.author("a", "y");
        match assign_dataset(&b.build().unwrap(), 1, 5) {
            Err(Error::Infeasible { paper, .. }) => assert_eq!(paper, "y"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_export() {
        let mut b = ConferenceDataset::builder();
        b.text_sim("a", "x", 0.2).text_sim("b", "x", 0.9);
        let ds = b.build().unwrap();
        let a = assign_dataset(&ds, 1, 1).unwrap();
        let mut buf = Vec::new();
        a.write_csv(&ds, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "paper,reviewer\nx,b\n");
    }
}

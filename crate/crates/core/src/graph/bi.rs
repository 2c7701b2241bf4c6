use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{subset_mask, WeightedGraph};
use crate::dataset::ConferenceDataset;
use crate::error::{Error, Result};

/// Label of a reviewer–paper edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeLabel {
    Bid,
    Author,
    /// Conflict that is not an authorship.
    Conflict,
}

impl EdgeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeLabel::Bid => "bid",
            EdgeLabel::Author => "author",
            EdgeLabel::Conflict => "conflict",
        }
    }
}

/// Which labeled edges make up the unlabeled bipartite graph handed to the
/// generic detectors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BiEdgeChoice {
    #[default]
    BidsOnly,
    BidsAndAuthorships,
}

/// Numerator and denominator pieces of the bid density of a reviewer set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DensityParts {
    /// Number of distinct reviewers in the subset.
    pub reviewers: usize,
    /// Number of papers authored by the subset.
    pub papers: usize,
    /// Bids from the subset onto those papers.
    pub bids: usize,
    /// Authorship pairs between the subset and those papers.
    pub authored: usize,
    /// Non-authorship conflicts between the subset and those papers.
    pub conflicted: usize,
}

impl DensityParts {
    /// Number of pairs on which a bid could be placed.
    pub fn possible(&self) -> usize {
        self.reviewers * self.papers - self.authored - self.conflicted
    }

    pub fn density(&self) -> Result<f64> {
        if self.papers == 0 {
            return Err(Error::Degenerate("subset authored no papers".into()));
        }
        let possible = self.possible();
        if possible == 0 {
            return Err(Error::Degenerate("no biddable pair inside the subset".into()));
        }
        Ok(self.bids as f64 / possible as f64)
    }
}

/// Bipartite reviewer/paper graph with bid, authorship and conflict edges.
///
/// Every list is sorted; the three label sets are disjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiGraph {
    bids_by_reviewer: Vec<Vec<usize>>,
    bidders_by_paper: Vec<Vec<usize>>,
    authored_by_reviewer: Vec<Vec<usize>>,
    authors_by_paper: Vec<Vec<usize>>,
    conflicts_by_reviewer: Vec<Vec<usize>>,
    conflicts_by_paper: Vec<Vec<usize>>,
    n_bids: usize,
}

fn by_both(n_r: usize, n_p: usize, pairs: impl Iterator<Item = (usize, usize)>) -> (Vec<Vec<usize>>, Vec<Vec<usize>>, usize) {
    let mut rows = vec![Vec::new(); n_r];
    let mut cols = vec![Vec::new(); n_p];
    let mut n = 0;
    for (r, p) in pairs {
        rows[r].push(p);
        cols[p].push(r);
        n += 1;
    }
    rows.iter_mut().for_each(|l| l.sort_unstable());
    cols.iter_mut().for_each(|l| l.sort_unstable());
    (rows, cols, n)
}

impl BiGraph {
    pub fn build(ds: &ConferenceDataset) -> Self {
        build_bi(ds)
    }

    pub fn n_reviewers(&self) -> usize {
        self.bids_by_reviewer.len()
    }

    pub fn n_papers(&self) -> usize {
        self.bidders_by_paper.len()
    }

    pub fn n_bids(&self) -> usize {
        self.n_bids
    }

    pub fn n_authorships(&self) -> usize {
        self.authored_by_reviewer.iter().map(Vec::len).sum()
    }

    pub fn n_conflicts(&self) -> usize {
        self.conflicts_by_reviewer.iter().map(Vec::len).sum()
    }

    pub fn bids_of(&self, r: usize) -> &[usize] {
        &self.bids_by_reviewer[r]
    }

    pub fn bidders_of(&self, p: usize) -> &[usize] {
        &self.bidders_by_paper[p]
    }

    pub fn papers_of(&self, r: usize) -> &[usize] {
        &self.authored_by_reviewer[r]
    }

    pub fn authors_of(&self, p: usize) -> &[usize] {
        &self.authors_by_paper[p]
    }

    pub fn conflicts_of(&self, r: usize) -> &[usize] {
        &self.conflicts_by_reviewer[r]
    }

    pub fn conflicted_reviewers_of(&self, p: usize) -> &[usize] {
        &self.conflicts_by_paper[p]
    }

    /// Reviewers with at least one authored paper, ascending.
    pub fn author_set(&self) -> Vec<usize> {
        (0..self.n_reviewers())
            .filter(|&r| !self.authored_by_reviewer[r].is_empty())
            .collect()
    }

    pub fn label(&self, r: usize, p: usize) -> Option<EdgeLabel> {
        if self.bids_by_reviewer[r].binary_search(&p).is_ok() {
            Some(EdgeLabel::Bid)
        } else if self.authored_by_reviewer[r].binary_search(&p).is_ok() {
            Some(EdgeLabel::Author)
        } else if self.conflicts_by_reviewer[r].binary_search(&p).is_ok() {
            Some(EdgeLabel::Conflict)
        } else {
            None
        }
    }

    /// Adds a bid on an unlabeled pair; returns `false` when the pair already
    /// carries any label.
    pub fn add_bid(&mut self, r: usize, p: usize) -> bool {
        if self.label(r, p).is_some() {
            return false;
        }
        let i = self.bids_by_reviewer[r].binary_search(&p).unwrap_err();
        self.bids_by_reviewer[r].insert(i, p);
        let j = self.bidders_by_paper[p].binary_search(&r).unwrap_err();
        self.bidders_by_paper[p].insert(j, r);
        self.n_bids += 1;
        true
    }

    pub fn bid_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        pairs(&self.bids_by_reviewer)
    }

    pub fn author_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        pairs(&self.authored_by_reviewer)
    }

    pub fn conflict_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        pairs(&self.conflicts_by_reviewer)
    }

    /// Papers authored by at least one reviewer of `subset`, ascending.
    pub fn authored_papers(&self, subset: &[usize]) -> Vec<usize> {
        let (mask, _) = subset_mask(self.n_reviewers(), subset);
        let mut out: Vec<usize> = mask
            .iter()
            .enumerate()
            .filter(|&(_, &m)| m)
            .flat_map(|(r, _)| self.authored_by_reviewer[r].iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn density_parts(&self, subset: &[usize]) -> DensityParts {
        let (mask, reviewers) = subset_mask(self.n_reviewers(), subset);
        let papers = self.authored_papers(subset);
        let mut in_p = vec![false; self.n_papers()];
        for &p in &papers {
            in_p[p] = true;
        }
        let count = |lists: &Vec<Vec<usize>>| -> usize {
            mask.iter()
                .enumerate()
                .filter(|&(_, &m)| m)
                .map(|(r, _)| lists[r].iter().filter(|&&p| in_p[p]).count())
                .sum()
        };
        DensityParts {
            reviewers,
            papers: papers.len(),
            bids: count(&self.bids_by_reviewer),
            authored: count(&self.authored_by_reviewer),
            conflicted: count(&self.conflicts_by_reviewer),
        }
    }

    /// Bids from `subset` onto its own papers over the number of biddable
    /// pairs. Errors on degenerate subsets.
    pub fn bid_density(&self, subset: &[usize]) -> Result<f64> {
        self.density_parts(subset).density()
    }

    /// Undirected graph on `n_reviewers + n_papers` vertices, reviewers first
    /// and paper `p` at index `n_reviewers + p`.
    pub fn unlabeled(&self, choice: BiEdgeChoice) -> WeightedGraph {
        let nr = self.n_reviewers();
        let bids = self.bid_edges().map(move |(r, p)| (r, nr + p, 1));
        match choice {
            BiEdgeChoice::BidsOnly => WeightedGraph::from_edges(nr + self.n_papers(), bids),
            BiEdgeChoice::BidsAndAuthorships => WeightedGraph::from_edges(
                nr + self.n_papers(),
                bids.chain(self.author_edges().map(move |(r, p)| (r, nr + p, 1))),
            ),
        }
    }

    /// Writes a `kind,reviewer,paper` CSV edge list using dataset names.
    pub fn write_edge_list(&self, ds: &ConferenceDataset, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(w, "kind,reviewer,paper")?;
        for (label, edges) in [
            (EdgeLabel::Bid, pairs(&self.bids_by_reviewer).collect::<Vec<_>>()),
            (EdgeLabel::Author, pairs(&self.authored_by_reviewer).collect()),
            (EdgeLabel::Conflict, pairs(&self.conflicts_by_reviewer).collect()),
        ] {
            for (r, p) in edges {
                writeln!(w, "{},{},{}", label.as_str(), ds.reviewer_name(r), ds.paper_name(p))?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Reviewer subset with incrementally maintained [`DensityParts`].
///
/// Supports O(degree) evaluation of the parts after adding or removing a
/// single reviewer, which peeling and local search rely on.
#[derive(Clone, Debug)]
pub struct BidSubsetState<'g> {
    graph: &'g BiGraph,
    member: Vec<bool>,
    authors_in: Vec<u32>,
    bidders_in: Vec<u32>,
    conflicted_in: Vec<u32>,
    parts: DensityParts,
}

impl<'g> BidSubsetState<'g> {
    pub fn new(graph: &'g BiGraph) -> Self {
        BidSubsetState {
            graph,
            member: vec![false; graph.n_reviewers()],
            authors_in: vec![0; graph.n_papers()],
            bidders_in: vec![0; graph.n_papers()],
            conflicted_in: vec![0; graph.n_papers()],
            parts: DensityParts {
                reviewers: 0,
                papers: 0,
                bids: 0,
                authored: 0,
                conflicted: 0,
            },
        }
    }

    pub fn with_members(graph: &'g BiGraph, subset: &[usize]) -> Self {
        let mut st = Self::new(graph);
        for &r in subset {
            if !st.contains(r) {
                st.add(r);
            }
        }
        st
    }

    pub fn graph(&self) -> &'g BiGraph {
        self.graph
    }

    pub fn contains(&self, r: usize) -> bool {
        self.member[r]
    }

    pub fn parts(&self) -> DensityParts {
        self.parts
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.member.len()).filter(|&r| self.member[r]).collect()
    }

    fn in_p(&self, p: usize) -> bool {
        self.authors_in[p] > 0
    }

    /// Parts of `S ∪ {r}`; `r` must not be a member.
    pub fn parts_after_add(&self, r: usize) -> DensityParts {
        debug_assert!(!self.member[r]);
        let g = self.graph;
        let mut next = self.parts;
        next.reviewers += 1;
        next.authored += g.papers_of(r).len();
        next.bids += g.bids_of(r).iter().filter(|&&p| self.in_p(p)).count();
        next.conflicted += g.conflicts_of(r).iter().filter(|&&p| self.in_p(p)).count();
        for &p in g.papers_of(r) {
            if !self.in_p(p) {
                next.papers += 1;
                next.bids += self.bidders_in[p] as usize;
                next.conflicted += self.conflicted_in[p] as usize;
            }
        }
        next
    }

    /// Parts of `S \ {r}`; `r` must be a member.
    pub fn parts_after_remove(&self, r: usize) -> DensityParts {
        debug_assert!(self.member[r]);
        let g = self.graph;
        let mut next = self.parts;
        next.reviewers -= 1;
        next.authored -= g.papers_of(r).len();
        next.bids -= g.bids_of(r).iter().filter(|&&p| self.in_p(p)).count();
        next.conflicted -= g.conflicts_of(r).iter().filter(|&&p| self.in_p(p)).count();
        for &p in g.papers_of(r) {
            if self.authors_in[p] == 1 {
                next.papers -= 1;
                next.bids -= self.bidders_in[p] as usize;
                next.conflicted -= self.conflicted_in[p] as usize;
            }
        }
        next
    }

    pub fn add(&mut self, r: usize) {
        self.parts = self.parts_after_add(r);
        self.member[r] = true;
        let g = self.graph;
        for &p in g.papers_of(r) {
            self.authors_in[p] += 1;
        }
        for &p in g.bids_of(r) {
            self.bidders_in[p] += 1;
        }
        for &p in g.conflicts_of(r) {
            self.conflicted_in[p] += 1;
        }
    }

    pub fn remove(&mut self, r: usize) {
        self.parts = self.parts_after_remove(r);
        self.member[r] = false;
        let g = self.graph;
        for &p in g.papers_of(r) {
            self.authors_in[p] -= 1;
        }
        for &p in g.bids_of(r) {
            self.bidders_in[p] -= 1;
        }
        for &p in g.conflicts_of(r) {
            self.conflicted_in[p] -= 1;
        }
    }
}

fn pairs(rows: &[Vec<usize>]) -> impl Iterator<Item = (usize, usize)> + '_ {
    rows.iter()
        .enumerate()
        .flat_map(|(r, list)| list.iter().map(move |&p| (r, p)))
}

pub fn build_bi(ds: &ConferenceDataset) -> BiGraph {
    let (nr, np) = (ds.n_reviewers(), ds.n_papers());
    let (bids_by_reviewer, bidders_by_paper, n_bids) = by_both(nr, np, ds.bids().keys().copied());
    let (authored_by_reviewer, authors_by_paper, _) = by_both(nr, np, ds.authorships().iter().copied());
    let (conflicts_by_reviewer, conflicts_by_paper, _) = by_both(
        nr,
        np,
        ds.conflicts()
            .iter()
            .copied()
            .filter(|pair| !ds.authorships().contains(pair)),
    );
    BiGraph {
        bids_by_reviewer,
        bidders_by_paper,
        authored_by_reviewer,
        authors_by_paper,
        conflicts_by_reviewer,
        conflicts_by_paper,
        n_bids,
    }
}

pub fn authored_papers(graph: &BiGraph, subset: &[usize]) -> Vec<usize> {
    graph.authored_papers(subset)
}

pub fn bid_density(graph: &BiGraph, subset: &[usize]) -> Result<f64> {
    graph.bid_density(subset)
}

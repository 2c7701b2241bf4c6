//! Conference data model: reviewers, papers, bids, authorships, conflicts and
//! text similarities.
//!
//! Identifiers are opaque strings mapped to dense indices in declaration
//! order. Every constructor validates the model invariants:
//!
//! * authorships are a subset of conflicts,
//! * no bid is placed on a conflicted pair,
//! * text similarities lie in `[0, 1]`.

mod io;
mod synthetic;
mod textsim;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub use io::{load_dataset, load_dataset_with, save_csv, save_json, DatasetFormat, LoadOptions, Loaded};
pub use synthetic::{generate_synthetic_dataset, subsample_authorships, SyntheticConfig};
pub use textsim::{
    generate_text_similarities, sample_text_similarities, triple_agreement, triple_agreement_in,
    LevelMeans, LevelSet, TextSimModel, TripleAgreement,
};

/// A `(reviewer, paper)` index pair.
pub type Pair = (usize, usize);

/// Bid strength attached to a positive bid.
///
/// Level 0 means "no bid"; any non-zero level is a positive bid. The AAMAS
/// loader produces [`BidLevel::MAYBE`] and [`BidLevel::YES`]; graded exports
/// keep their raw levels (1, 2, 3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BidLevel(pub u8);

impl BidLevel {
    pub const NONE: BidLevel = BidLevel(0);
    pub const MAYBE: BidLevel = BidLevel(1);
    pub const YES: BidLevel = BidLevel(2);

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }
}

impl fmt::Display for BidLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConferenceDataset {
    reviewers: IndexSet<String>,
    papers: IndexSet<String>,
    bids: BTreeMap<Pair, BidLevel>,
    authorships: BTreeSet<Pair>,
    conflicts: BTreeSet<Pair>,
    text_sim: Option<Matrix>,
}

impl ConferenceDataset {
    /// Builds a dataset from its parts, rejecting any invariant violation.
    pub fn from_parts(
        reviewers: IndexSet<String>,
        papers: IndexSet<String>,
        bids: BTreeMap<Pair, BidLevel>,
        authorships: BTreeSet<Pair>,
        conflicts: BTreeSet<Pair>,
        text_sim: Option<Matrix>,
    ) -> Result<Self> {
        let ds = ConferenceDataset {
            reviewers,
            papers,
            bids,
            authorships,
            conflicts,
            text_sim,
        };
        ds.validate()?;
        Ok(ds)
    }

    pub fn builder() -> DatasetBuilder {
        DatasetBuilder::default()
    }

    fn validate(&self) -> Result<()> {
        let (nr, np) = (self.n_reviewers(), self.n_papers());
        let in_range = |&(r, p): &Pair| r < nr && p < np;
        for (set, what) in [
            (self.bids.keys().copied().collect::<Vec<_>>(), "bid"),
            (self.authorships.iter().copied().collect(), "authorship"),
            (self.conflicts.iter().copied().collect(), "conflict"),
        ] {
            if let Some(bad) = set.iter().find(|pair| !in_range(pair)) {
                return Err(Error::invariant(format!(
                    "{what} pair {bad:?} references an undeclared reviewer or paper"
                )));
            }
        }
        for (&pair, level) in &self.bids {
            if !level.is_positive() {
                return Err(Error::invariant(format!(
                    "bid {} carries non-positive level {level}",
                    self.pair_label(pair)
                )));
            }
        }
        if let Some(&pair) = self.authorships.iter().find(|p| !self.conflicts.contains(p)) {
            return Err(Error::invariant(format!(
                "authorship {} is not a conflict",
                self.pair_label(pair)
            )));
        }
        if let Some(&pair) = self.bids.keys().find(|p| self.conflicts.contains(p)) {
            return Err(Error::invariant(format!(
                "pair {} is both a bid and a conflict",
                self.pair_label(pair)
            )));
        }
        if let Some(t) = &self.text_sim {
            if t.rows() != nr || t.cols() != np {
                return Err(Error::invariant(format!(
                    "text similarity matrix is {}x{}, expected {nr}x{np}",
                    t.rows(),
                    t.cols()
                )));
            }
            for r in 0..nr {
                for p in 0..np {
                    let v = t.get(r, p);
                    if !(0.0..=1.0).contains(&v) {
                        return Err(Error::invariant(format!(
                            "text similarity {v} for {} outside [0, 1]",
                            self.pair_label((r, p))
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn pair_label(&self, (r, p): Pair) -> String {
        format!(
            "({}, {})",
            self.reviewers.get_index(r).map_or("?", String::as_str),
            self.papers.get_index(p).map_or("?", String::as_str)
        )
    }

    pub fn n_reviewers(&self) -> usize {
        self.reviewers.len()
    }

    pub fn n_papers(&self) -> usize {
        self.papers.len()
    }

    pub fn reviewers(&self) -> &IndexSet<String> {
        &self.reviewers
    }

    pub fn papers(&self) -> &IndexSet<String> {
        &self.papers
    }

    pub fn reviewer_name(&self, r: usize) -> &str {
        &self.reviewers[r]
    }

    pub fn paper_name(&self, p: usize) -> &str {
        &self.papers[p]
    }

    pub fn reviewer_index(&self, name: &str) -> Option<usize> {
        self.reviewers.get_index_of(name)
    }

    pub fn paper_index(&self, name: &str) -> Option<usize> {
        self.papers.get_index_of(name)
    }

    pub fn bids(&self) -> &BTreeMap<Pair, BidLevel> {
        &self.bids
    }

    pub fn is_bid(&self, pair: Pair) -> bool {
        self.bids.contains_key(&pair)
    }

    pub fn bid_level(&self, pair: Pair) -> BidLevel {
        self.bids.get(&pair).copied().unwrap_or(BidLevel::NONE)
    }

    pub fn authorships(&self) -> &BTreeSet<Pair> {
        &self.authorships
    }

    pub fn conflicts(&self) -> &BTreeSet<Pair> {
        &self.conflicts
    }

    pub fn is_conflict(&self, pair: Pair) -> bool {
        self.conflicts.contains(&pair)
    }

    pub fn text_sim(&self) -> Option<&Matrix> {
        self.text_sim.as_ref()
    }

    /// Authors of each paper, sorted by reviewer index.
    pub fn authors_by_paper(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_papers()];
        for &(r, p) in &self.authorships {
            out[p].push(r);
        }
        out.iter_mut().for_each(|v| v.sort_unstable());
        out
    }

    /// Papers authored by each reviewer, sorted by paper index.
    pub fn papers_by_author(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_reviewers()];
        for &(r, p) in &self.authorships {
            out[r].push(p);
        }
        out
    }

    /// Reviewers who authored at least one paper, ascending.
    pub fn author_reviewers(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.authorships.iter().map(|&(r, _)| r).collect();
        set.into_iter().collect()
    }

    pub fn with_bids(&self, bids: BTreeMap<Pair, BidLevel>) -> Result<Self> {
        Self::from_parts(
            self.reviewers.clone(),
            self.papers.clone(),
            bids,
            self.authorships.clone(),
            self.conflicts.clone(),
            self.text_sim.clone(),
        )
    }

    pub fn with_authorships(&self, authorships: BTreeSet<Pair>) -> Result<Self> {
        Self::from_parts(
            self.reviewers.clone(),
            self.papers.clone(),
            self.bids.clone(),
            authorships,
            self.conflicts.clone(),
            self.text_sim.clone(),
        )
    }

    pub fn with_text_sim(&self, text_sim: Matrix) -> Result<Self> {
        Self::from_parts(
            self.reviewers.clone(),
            self.papers.clone(),
            self.bids.clone(),
            self.authorships.clone(),
            self.conflicts.clone(),
            Some(text_sim),
        )
    }
}

/// Incremental, name-based dataset construction used by the loaders.
///
/// Adding an authorship also records the pair as a conflict.
#[derive(Debug, Default)]
pub struct DatasetBuilder {
    reviewers: IndexSet<String>,
    papers: IndexSet<String>,
    bids: BTreeMap<Pair, BidLevel>,
    authorships: BTreeSet<Pair>,
    conflicts: BTreeSet<Pair>,
    text_sim: BTreeMap<Pair, f64>,
}

impl DatasetBuilder {
    pub fn reviewer(&mut self, name: &str) -> usize {
        self.reviewers.insert_full(name.to_owned()).0
    }

    pub fn paper(&mut self, name: &str) -> usize {
        self.papers.insert_full(name.to_owned()).0
    }

    pub fn bid(&mut self, r: &str, p: &str, level: BidLevel) -> &mut Self {
        let pair = (self.reviewer(r), self.paper(p));
        self.bids.insert(pair, level);
        self
    }

    pub fn author(&mut self, r: &str, p: &str) -> &mut Self {
        let pair = (self.reviewer(r), self.paper(p));
        self.authorships.insert(pair);
        self.conflicts.insert(pair);
        self
    }

    pub fn conflict(&mut self, r: &str, p: &str) -> &mut Self {
        let pair = (self.reviewer(r), self.paper(p));
        self.conflicts.insert(pair);
        self
    }

    pub fn text_sim(&mut self, r: &str, p: &str, value: f64) -> &mut Self {
        let pair = (self.reviewer(r), self.paper(p));
        self.text_sim.insert(pair, value);
        self
    }

    pub(crate) fn bids_mut(&mut self) -> &mut BTreeMap<Pair, BidLevel> {
        &mut self.bids
    }

    pub(crate) fn conflict_set(&self) -> &BTreeSet<Pair> {
        &self.conflicts
    }

    /// Validates and freezes the dataset. Pairs without a text similarity
    /// read as 0 when at least one similarity was supplied.
    pub fn build(self) -> Result<ConferenceDataset> {
        let text_sim = if self.text_sim.is_empty() {
            None
        } else {
            let mut m = Matrix::zeros(self.reviewers.len(), self.papers.len());
            for (&(r, p), &v) in &self.text_sim {
                m.set(r, p, v);
            }
            Some(m)
        };
        ConferenceDataset::from_parts(
            self.reviewers,
            self.papers,
            self.bids,
            self.authorships,
            self.conflicts,
            text_sim,
        )
    }
}

use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexSet;
use rand::seq::index::sample;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{BidLevel, ConferenceDataset, Pair};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Parameters for [`generate_synthetic_dataset`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub n_reviewers: usize,
    pub n_papers: usize,
    pub bid_prob: f64,
    pub authors_per_paper: usize,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            n_reviewers: 200,
            n_papers: 150,
            bid_prob: 0.02,
            authors_per_paper: 3,
            seed: 0,
        }
    }
}

/// Generates a random conference.
///
/// Each paper gets `authors_per_paper` distinct authors drawn uniformly from
/// the reviewers; conflicts are exactly the authorships. Every remaining pair
/// becomes a bid independently with probability `bid_prob`, at level Yes or
/// Maybe with equal probability.
pub fn generate_synthetic_dataset(cfg: &SyntheticConfig) -> Result<ConferenceDataset> {
    if !(0.0..=1.0).contains(&cfg.bid_prob) {
        return Err(Error::config(format!("bid_prob {} outside [0, 1]", cfg.bid_prob)));
    }
    if cfg.authors_per_paper > cfg.n_reviewers {
        return Err(Error::config(format!(
            "{} authors per paper requested but only {} reviewers exist",
            cfg.authors_per_paper, cfg.n_reviewers
        )));
    }
    let mut rng = rng_from_seed(cfg.seed);
    let reviewers: IndexSet<String> = (0..cfg.n_reviewers).map(|i| format!("r{i}")).collect();
    let papers: IndexSet<String> = (0..cfg.n_papers).map(|j| format!("p{j}")).collect();

    let mut authorships = BTreeSet::new();
    for p in 0..cfg.n_papers {
        for r in sample(&mut rng, cfg.n_reviewers, cfg.authors_per_paper) {
            authorships.insert((r, p));
        }
    }
    let conflicts = authorships.clone();

    let mut bids = BTreeMap::new();
    for r in 0..cfg.n_reviewers {
        for p in 0..cfg.n_papers {
            if conflicts.contains(&(r, p)) {
                continue;
            }
            if rng.gen_bool(cfg.bid_prob) {
                let level = if rng.gen_bool(0.5) {
                    BidLevel::YES
                } else {
                    BidLevel::MAYBE
                };
                bids.insert((r, p), level);
            }
        }
    }
    ConferenceDataset::from_parts(reviewers, papers, bids, authorships, conflicts, None)
}

/// Replaces the authorship set with `per_paper` pairs drawn uniformly without
/// replacement from each paper's conflicts. Papers with fewer conflicts keep
/// all of them as authors.
pub fn subsample_authorships(
    ds: &ConferenceDataset,
    per_paper: usize,
    seed: u64,
) -> Result<ConferenceDataset> {
    let mut rng = rng_from_seed(seed);
    let mut by_paper: Vec<Vec<usize>> = vec![Vec::new(); ds.n_papers()];
    for &(r, p) in ds.conflicts() {
        by_paper[p].push(r);
    }
    let mut authorships: BTreeSet<Pair> = BTreeSet::new();
    for (p, cands) in by_paper.iter().enumerate() {
        if cands.len() <= per_paper {
            authorships.extend(cands.iter().map(|&r| (r, p)));
        } else {
            for i in sample(&mut rng, cands.len(), per_paper) {
                authorships.insert((cands[i], p));
            }
        }
    }
    ds.with_authorships(authorships)
}

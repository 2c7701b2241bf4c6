//! Synthetic text similarities drawn per bid level, and the triple-agreement
//! statistic used to check how well similarities order a reviewer's papers.
//!
//! Similarities for "no bid", Maybe and Yes pairs come from three Gaussians
//! with a shared standard deviation `sigma`. For independent draws
//! `P(X >= Y) = Phi((mu_x - mu_y) / (sigma * sqrt 2))`, so the means are
//! placed to hit two target agreement rates:
//!
//! * `p_hard`: Yes over Maybe, giving a Yes-Maybe offset of
//!   `sigma * sqrt 2 * Phi^-1(p_hard)`;
//! * `p_easy`: any positive bid over no bid. With both levels present the
//!   Maybe offset is solved so that the triple-weighted mixture of the two
//!   positive levels reaches `p_easy`; with a single positive level this is
//!   the closed form `sigma * sqrt 2 * Phi^-1(p_easy)`.

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::{BidLevel, ConferenceDataset};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::rng_from_seed;

/// Bid levels selecting one side of a triple.
pub type LevelSet<'a> = &'a [BidLevel];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TextSimModel {
    /// Mean similarity of pairs without a bid.
    pub base_mean: f64,
    /// Shared standard deviation of all three levels.
    pub sigma: f64,
    pub p_easy: f64,
    pub p_hard: f64,
}

impl Default for TextSimModel {
    fn default() -> Self {
        TextSimModel {
            base_mean: 0.030,
            sigma: 0.02,
            p_easy: 0.80,
            p_hard: 0.62,
        }
    }
}

/// Per-level Gaussian means.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelMeans {
    pub none: f64,
    pub maybe: f64,
    pub yes: f64,
}

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

impl TextSimModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::config(format!("sigma must be positive, got {}", self.sigma)));
        }
        if !(0.5 <= self.p_hard && self.p_hard <= self.p_easy && self.p_easy < 1.0) {
            return Err(Error::config(format!(
                "need 0.5 <= p_hard <= p_easy < 1, got p_hard={} p_easy={}",
                self.p_hard, self.p_easy
            )));
        }
        Ok(())
    }

    /// Offset between two level means that makes `P(X >= Y) = p`.
    pub fn offset_for(&self, p: f64) -> f64 {
        self.sigma * std::f64::consts::SQRT_2 * std_normal().inverse_cdf(p)
    }

    /// Means for the three levels given the relative triple weights of Yes
    /// and Maybe bids against no-bid pairs.
    pub fn means_for_weights(&self, yes_weight: f64, maybe_weight: f64) -> Result<LevelMeans> {
        self.validate()?;
        let hard = self.offset_for(self.p_hard);
        let total = yes_weight + maybe_weight;
        let (wy, wm) = if total > 0.0 {
            (yes_weight / total, maybe_weight / total)
        } else {
            (0.5, 0.5)
        };
        let maybe_offset = if wy == 0.0 {
            self.offset_for(self.p_easy)
        } else if wm == 0.0 {
            self.offset_for(self.p_easy) - hard
        } else {
            let phi = std_normal();
            let scale = self.sigma * std::f64::consts::SQRT_2;
            let agreement = |a: f64| wy * phi.cdf((a + hard) / scale) + wm * phi.cdf(a / scale);
            let (mut lo, mut hi) = (-12.0 * self.sigma, 12.0 * self.sigma);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if agreement(mid) < self.p_easy {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        Ok(LevelMeans {
            none: self.base_mean,
            maybe: self.base_mean + maybe_offset,
            yes: self.base_mean + maybe_offset + hard,
        })
    }

    /// Means calibrated to the bid-level mix of `ds`: each Yes or Maybe pair
    /// is weighted by the number of no-bid, non-conflicted papers of the same
    /// reviewer, i.e. by the easy triples it takes part in.
    pub fn level_means(&self, ds: &ConferenceDataset) -> Result<LevelMeans> {
        let (mut wy, mut wm) = (0.0, 0.0);
        let mut yes = vec![0usize; ds.n_reviewers()];
        let mut maybe = vec![0usize; ds.n_reviewers()];
        let mut conflicted = vec![0usize; ds.n_reviewers()];
        for (&(r, _), &level) in ds.bids() {
            if level_class(level) == LevelClass::Yes {
                yes[r] += 1;
            } else {
                maybe[r] += 1;
            }
        }
        for &(r, _) in ds.conflicts() {
            conflicted[r] += 1;
        }
        for r in 0..ds.n_reviewers() {
            let none = (ds.n_papers() - yes[r] - maybe[r] - conflicted[r]) as f64;
            wy += yes[r] as f64 * none;
            wm += maybe[r] as f64 * none;
        }
        self.means_for_weights(wy, wm)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LevelClass {
    None,
    Maybe,
    Yes,
}

/// Level 0 is no bid, level 1 is Maybe, anything above is Yes.
fn level_class(level: BidLevel) -> LevelClass {
    match level.0 {
        0 => LevelClass::None,
        1 => LevelClass::Maybe,
        _ => LevelClass::Yes,
    }
}

/// Unclamped draws for every pair, in row-major order from one seeded stream.
pub fn sample_text_similarities(
    ds: &ConferenceDataset,
    model: &TextSimModel,
    seed: u64,
) -> Result<Matrix> {
    let means = model.level_means(ds)?;
    let mut rng = rng_from_seed(seed);
    let mut out = Matrix::zeros(ds.n_reviewers(), ds.n_papers());
    for r in 0..ds.n_reviewers() {
        for p in 0..ds.n_papers() {
            let mean = match level_class(ds.bid_level((r, p))) {
                LevelClass::None => means.none,
                LevelClass::Maybe => means.maybe,
                LevelClass::Yes => means.yes,
            };
            let z: f64 = StandardNormal.sample(&mut rng);
            out.set(r, p, mean + model.sigma * z);
        }
    }
    Ok(out)
}

/// Draws similarities per bid level and clamps them into `[0, 1]`.
pub fn generate_text_similarities(
    ds: &ConferenceDataset,
    model: &TextSimModel,
    seed: u64,
) -> Result<ConferenceDataset> {
    let raw = sample_text_similarities(ds, model, seed)?;
    ds.with_text_sim(raw.map(|v| v.clamp(0.0, 1.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleAgreement {
    pub agreeing: u64,
    pub total: u64,
}

impl TripleAgreement {
    pub fn fraction(&self) -> f64 {
        self.agreeing as f64 / self.total as f64
    }
}

/// Fraction of triples `(r, p1, p2)` with `r`'s level on `p1` in `high` and on
/// `p2` in `low` such that `T(r, p1) >= T(r, p2)`, over the dataset's own
/// similarities. Conflicted pairs never take part in a triple.
pub fn triple_agreement(
    ds: &ConferenceDataset,
    high: LevelSet<'_>,
    low: LevelSet<'_>,
) -> Result<TripleAgreement> {
    let t = ds
        .text_sim()
        .ok_or_else(|| Error::config("dataset has no text similarities"))?;
    triple_agreement_in(ds, t, high, low)
}

/// Same as [`triple_agreement`] over an arbitrary similarity matrix (for
/// example unclamped draws). Counting is exact: each reviewer's low-side
/// values are sorted once and every high-side value is ranked against them.
pub fn triple_agreement_in(
    ds: &ConferenceDataset,
    t: &Matrix,
    high: LevelSet<'_>,
    low: LevelSet<'_>,
) -> Result<TripleAgreement> {
    let mut agreeing = 0u64;
    let mut total = 0u64;
    let mut highs = Vec::new();
    let mut lows = Vec::new();
    for r in 0..ds.n_reviewers() {
        highs.clear();
        lows.clear();
        for p in 0..ds.n_papers() {
            if ds.is_conflict((r, p)) {
                continue;
            }
            let level = ds.bid_level((r, p));
            let v = t.get(r, p);
            if high.contains(&level) {
                highs.push(v);
            }
            if low.contains(&level) {
                lows.push(v);
            }
        }
        if highs.is_empty() || lows.is_empty() {
            continue;
        }
        lows.sort_by(f64::total_cmp);
        for &h in &highs {
            agreeing += lows.partition_point(|&l| l <= h) as u64;
        }
        total += (highs.len() * lows.len()) as u64;
    }
    if total == 0 {
        return Err(Error::Degenerate("no triples match the requested levels".into()));
    }
    Ok(TripleAgreement { agreeing, total })
}

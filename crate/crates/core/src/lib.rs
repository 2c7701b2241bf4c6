//! Simulation and detection of reviewer collusion rings in conference paper
//! bidding.
//!
//! The crate covers the full experimental pipeline:
//!
//! * [`dataset`]: the conference data model, loaders and synthetic data;
//! * [`graph`]: the reviewer-to-reviewer bidding graph and the labeled
//!   reviewer/paper graph, with edge density and bid density;
//! * [`census`]: counting and peeling honest dense groups;
//! * [`detect`]: dense-subgraph detectors (exact densest subgraph, quasi-clique
//!   peeling and local search, TellTail, Fraudar, a bid-aware quasi-clique);
//! * [`inject`]: planting collusion rings and realizing them as bids;
//! * [`assign`]: similarity scores, min-cost-flow assignment and success
//!   metrics;
//! * [`harness`]: seeded parameter sweeps and their CSV output.

pub mod assign;
pub mod census;
pub mod dataset;
pub mod detect;
pub mod error;
pub mod graph;
pub mod harness;
pub mod inject;
pub mod matrix;
pub mod rng;

pub use error::{Error, Result};

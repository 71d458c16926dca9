//! Constraint-based structure discovery for discrete Bayesian networks.
//!
//! The crate is `no_std` and only needs `alloc`. It covers the whole learning
//! pipeline on categorical data:
//!
//! * [`dataset`]: categorical data, level recoding, contingency counts and
//!   seeded bootstrap resamples.
//! * [`infotheory`]: entropy, (conditional) mutual information and the G²
//!   independence test with its chi-square backend.
//! * [`select`]: mutual-information feature ranking against a target.
//! * [`graph`]: partially directed graphs, v-structures, Meek rules, CPDAGs
//!   and structural Hamming distance.
//! * [`constraints`]: tier blacklists and edge admissibility.
//! * [`pc_stable`] and [`inter_iamb`]: the two structure learners.
//! * [`averaging`]: bootstrap model averaging and confidence bands.
//! * [`params_sim`]: CPT fitting, ancestral sampling and exact marginals.
//!
//! File formats, the CLI and parallel replicate execution live in the
//! `bnstruct` companion crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod averaging;
pub mod benchmarks;
pub mod ci;
pub mod constraints;
pub mod dataset;
mod error;
pub mod graph;
pub mod infotheory;
pub mod inter_iamb;
pub mod params_sim;
pub mod pc_stable;
pub mod select;
mod subsets;

pub use error::{Error, Result};

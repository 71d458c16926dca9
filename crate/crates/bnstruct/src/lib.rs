//! File formats, the experiment config and the command implementations
//! behind the `bnstruct` binary.

pub mod commands;
pub mod config;
pub mod csvio;
pub mod dot;
pub mod error;
pub mod network;
pub mod parallel;
pub mod tsv;

pub use error::{Error, Result};

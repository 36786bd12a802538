//! Command-line companion to `radlab-core`: matrix file parsing, report
//! serialization, randomized verification campaigns, and counterexample
//! search.

pub mod campaign;
pub mod fmt;
pub mod report;
pub mod search;

pub use radlab_core as core;

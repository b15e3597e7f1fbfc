//! Batch verification of F-manifold and Frobenius manifold data files.

pub mod cli;
pub mod manifest;
pub mod report;
pub mod suites;

pub use cli::run;

//! File formats, Monte Carlo harness, figure datasets and the command-line
//! front end for `nmdiff-core`.

pub mod cli;
pub mod config;
pub mod csvio;
pub mod error;
pub mod figures;
pub mod mc;

pub use error::AppError;
pub use nmdiff_core as core;

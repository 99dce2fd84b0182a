//! Trace alignment for process event logs, with reference-free and
//! reference-based alignment quality metrics.

pub mod aligner;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod io;
pub mod metrics;
pub mod model;

pub use error::{Error, Result};

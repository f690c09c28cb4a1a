//! Monte Carlo ensembles over the walk.

pub mod engine;
pub mod functional;
pub mod stats;

pub use engine::{path_stabilization, run, run_scaled, run_values, McConfig, McError};
pub use functional::{Functional, WalkReading};
pub use stats::EnsembleStats;

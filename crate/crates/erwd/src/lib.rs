//! Elephant random walks with delayed steps: ±1 steps whose law depends on a
//! recalled past step, plus a third "stay put" outcome.
//!
//! The crate has four layers:
//!
//! * [`params`] / [`walk`] — the step kernel under five memory regimes
//!   (full past, first step, first two, last step, first-and-last), the two
//!   readings of a recalled zero, and reproducible single-walk simulation;
//! * [`analytic`] — exact finite-n moment recursions, martingale weights and
//!   their asymptotics, a first-order difference-equation solver, and the
//!   catalog of limit constants and Gaussian-plus-atom mixture limit laws;
//! * [`mc`] — replicated ensembles with per-replica random-number streams and
//!   the normalized functionals the limit theorems are stated for;
//! * [`verify`] — atom-aware Kolmogorov-Smirnov, moment and cluster checks,
//!   a brute-force enumeration oracle, and ready-made verification bundles
//!   per theorem.

pub mod analytic;
pub mod mc;
pub mod params;
pub mod rng;
pub mod verify;
pub mod walk;

pub use params::{FyTable, InitialLaw, MemoryRegime, ModelParams, ParamError, ZeroRecallPolicy};
pub use rng::RngStream;
pub use walk::{next_step, scaled_walk, simulate, Trajectory, WalkError, WalkState};

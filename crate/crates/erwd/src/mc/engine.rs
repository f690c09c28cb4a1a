//! Replicated ensembles: embarrassingly parallel walks, deterministic given
//! the master seed.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::functional::{Functional, WalkReading};
use super::stats::EnsembleStats;
use crate::params::{FyTable, InitialLaw, MemoryRegime, ModelParams, ZeroRecallPolicy};
use crate::rng::{uniform, RngStream};
use crate::walk::WalkState;

#[derive(Debug, Error, PartialEq)]
pub enum McError {
    #[error("replica count must be at least 1")]
    NoReplicas,
    #[error("horizon must be at least 1 (at least 2 for the log normalization)")]
    BadHorizon,
    #[error("absorption statistics require last-step memory and r > 0")]
    BadAbsorptionConfig,
    #[error("a multiplier law requires the base walk to start at +1")]
    ScaledNeedsPlusOne,
    #[error("a scaled run requires a multiplier law")]
    MissingMultiplier,
    #[error("checkpoints must be strictly increasing and start at 1 or later")]
    BadCheckpoints,
}

/// Full description of one ensemble run.
#[derive(Debug, Clone, Serialize)]
pub struct McConfig {
    pub params: ModelParams,
    pub regime: MemoryRegime,
    pub policy: ZeroRecallPolicy,
    pub init: InitialLaw,
    /// Walk length; for absorption statistics, the censoring cap.
    pub horizon: usize,
    pub replicas: usize,
    pub seed: u64,
    pub functional: Functional,
    /// Step-size multiplier law; drawn once per replica from an auxiliary
    /// stream and applied to a +1-start base walk.
    pub fy: Option<FyTable>,
}

impl McConfig {
    pub fn validate(&self) -> Result<(), McError> {
        if self.replicas == 0 {
            return Err(McError::NoReplicas);
        }
        let min_horizon =
            if self.functional == Functional::SnOverSqrtNLogN { 2 } else { 1 };
        if self.horizon < min_horizon {
            return Err(McError::BadHorizon);
        }
        if self.functional.is_absorption()
            && (self.regime != MemoryRegime::LastStep || self.params.r() <= 0.0)
        {
            return Err(McError::BadAbsorptionConfig);
        }
        if self.fy.is_some() && self.init != InitialLaw::PlusOne {
            return Err(McError::ScaledNeedsPlusOne);
        }
        Ok(())
    }
}

/// Every reading of a zero-multiplied walk: identically zero steps, so the
/// first zero sits at index 1.
fn zero_scaled_reading(n: u64) -> WalkReading {
    WalkReading { n, sum: 0.0, x1: 0.0, x2: 0.0, first_zero: Some((1, 0.0)) }
}

/// One replica: walk to the horizon and read the functional.
fn run_replica(config: &McConfig, replica: u64) -> Option<f64> {
    let stream = RngStream::new(config.seed, replica);
    let scale = match &config.fy {
        Some(fy) => fy.sample(uniform(&mut stream.aux_rng())),
        None => 1.0,
    };
    if scale == 0.0 {
        return config
            .functional
            .evaluate(&zero_scaled_reading(config.horizon as u64), &config.params);
    }
    let mut rng = stream.walk_rng();
    let mut state =
        WalkState::start(config.params, config.regime, config.policy, config.init, &mut rng);
    let absorption_only = config.functional.is_absorption();
    while (state.steps_taken() as usize) < config.horizon {
        // frozen tails contribute nothing further to any reading
        if state.is_frozen() {
            break;
        }
        state.advance(&mut rng);
        if absorption_only && state.first_zero_at().is_some() {
            break;
        }
    }
    let reading = WalkReading {
        n: config.horizon as u64,
        sum: scale * state.sum() as f64,
        x1: scale * state.first_step() as f64,
        x2: scale * state.second_step() as f64,
        first_zero: state
            .first_zero_at()
            .map(|at| (at, scale * state.sum_at_first_zero() as f64)),
    };
    config.functional.evaluate(&reading, &config.params)
}

/// Per-replica functional values in replica order; `None` marks a censored
/// replica. Replica i draws from stream (seed, i), so the result is bitwise
/// independent of the thread count.
pub fn run_values(config: &McConfig) -> Result<Vec<Option<f64>>, McError> {
    config.validate()?;
    Ok((0..config.replicas as u64)
        .into_par_iter()
        .map(|i| run_replica(config, i))
        .collect())
}

/// Run the ensemble and accumulate the statistics.
pub fn run(config: &McConfig) -> Result<EnsembleStats, McError> {
    let values = run_values(config)?;
    let mut stats = EnsembleStats::new();
    for v in values {
        match v {
            Some(x) => stats.push(x),
            None => stats.push_censored(),
        }
    }
    Ok(stats)
}

/// Multiplier-walk ensemble; requires `fy` and a +1 base start.
pub fn run_scaled(config: &McConfig) -> Result<EnsembleStats, McError> {
    if config.fy.is_none() {
        return Err(McError::MissingMultiplier);
    }
    run(config)
}

/// Evaluate the functional at each checkpoint along the same trajectory,
/// replica by replica. Checkpoints must be strictly increasing.
pub fn path_stabilization(
    config: &McConfig,
    checkpoints: &[usize],
) -> Result<Vec<Vec<f64>>, McError> {
    config.validate()?;
    if checkpoints.is_empty()
        || checkpoints[0] < 1
        || checkpoints.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(McError::BadCheckpoints);
    }
    let rows: Vec<Vec<f64>> = (0..config.replicas as u64)
        .into_par_iter()
        .map(|i| {
            let stream = RngStream::new(config.seed, i);
            let scale = match &config.fy {
                Some(fy) => fy.sample(uniform(&mut stream.aux_rng())),
                None => 1.0,
            };
            if scale == 0.0 {
                return checkpoints
                    .iter()
                    .map(|&ck| {
                        config
                            .functional
                            .evaluate(&zero_scaled_reading(ck as u64), &config.params)
                            .unwrap_or(f64::NAN)
                    })
                    .collect();
            }
            let mut rng = stream.walk_rng();
            let mut state = WalkState::start(
                config.params,
                config.regime,
                config.policy,
                config.init,
                &mut rng,
            );
            let mut out = Vec::with_capacity(checkpoints.len());
            for &ck in checkpoints {
                while (state.steps_taken() as usize) < ck {
                    if state.is_frozen() {
                        break;
                    }
                    state.advance(&mut rng);
                }
                let reading = WalkReading {
                    n: ck as u64,
                    sum: scale * state.sum() as f64,
                    x1: scale * state.first_step() as f64,
                    x2: scale * state.second_step() as f64,
                    first_zero: state
                        .first_zero_at()
                        .map(|at| (at, scale * state.sum_at_first_zero() as f64)),
                };
                out.push(
                    config
                        .functional
                        .evaluate(&reading, &config.params)
                        .unwrap_or(f64::NAN),
                );
            }
            out
        })
        .collect();
    Ok(rows)
}

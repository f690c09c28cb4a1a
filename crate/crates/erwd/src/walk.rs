//! Step kernel and single-walk simulation.

use rand_chacha::rand_core::RngCore;
use thiserror::Error;

use crate::params::{InitialLaw, MemoryRegime, ModelParams, ZeroRecallPolicy};
use crate::rng::{uniform_pair, RngStream};

#[derive(Debug, Error, PartialEq)]
pub enum WalkError {
    #[error("memory view is empty")]
    EmptyMemory,
    #[error("horizon must be at least 1")]
    ZeroHorizon,
}

/// One realized walk: steps in `{-1, 0, +1}` and the partial sums `S_1..S_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub steps: Vec<i8>,
    pub sums: Vec<i64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Final partial sum `S_n`.
    pub fn final_sum(&self) -> i64 {
        *self.sums.last().expect("trajectory has at least one step")
    }
}

/// Composition of the remembered steps as a multiset.
#[derive(Debug, Clone, Copy, Default)]
struct MemoryCounts {
    plus: u64,
    minus: u64,
    zero: u64,
}

impl MemoryCounts {
    fn total(&self) -> u64 {
        self.plus + self.minus + self.zero
    }

    fn from_slice(memory: &[i8]) -> Self {
        let mut counts = Self::default();
        for &s in memory {
            match s {
                1 => counts.plus += 1,
                -1 => counts.minus += 1,
                _ => counts.zero += 1,
            }
        }
        counts
    }
}

/// Draw the recalled value, then resolve the repeat/flip/delay branch.
///
/// Consumes exactly one `(u_recall, u_branch)` pair. The conditional mean of
/// the result given the memory is `(p-q) * sum(memory) / |memory|` under both
/// policies.
#[inline]
fn kernel_step(
    counts: MemoryCounts,
    params: &ModelParams,
    policy: ZeroRecallPolicy,
    u_recall: f64,
    u_branch: f64,
) -> i8 {
    let total = counts.total() as f64;
    let pick = u_recall * total;
    let recalled: i8 = if pick < counts.plus as f64 {
        1
    } else if pick < (counts.plus + counts.minus) as f64 {
        -1
    } else {
        0
    };
    let p = params.p();
    let pq = params.nonzero_prob();
    match recalled {
        0 => match policy {
            ZeroRecallPolicy::Propagate => 0,
            ZeroRecallPolicy::SymmetricResample => {
                if u_branch < pq / 2.0 {
                    1
                } else if u_branch < pq {
                    -1
                } else {
                    0
                }
            }
        },
        s => {
            if u_branch < p {
                s
            } else if u_branch < pq {
                -s
            } else {
                0
            }
        }
    }
}

/// Draw the next step given an explicit memory multiset.
pub fn next_step(
    memory: &[i8],
    params: &ModelParams,
    policy: ZeroRecallPolicy,
    rng: &mut impl RngCore,
) -> Result<i8, WalkError> {
    if memory.is_empty() {
        return Err(WalkError::EmptyMemory);
    }
    let (u_recall, u_branch) = uniform_pair(rng);
    Ok(kernel_step(MemoryCounts::from_slice(memory), params, policy, u_recall, u_branch))
}

/// Incremental walk driver. Holds the O(1) memory summary each regime needs,
/// so a step costs the same regardless of the horizon.
#[derive(Debug, Clone)]
pub struct WalkState {
    params: ModelParams,
    regime: MemoryRegime,
    policy: ZeroRecallPolicy,
    n: u64,
    sum: i64,
    x1: i8,
    x2: i8,
    last: i8,
    full_counts: MemoryCounts,
    first_zero_at: Option<u64>,
    sum_at_first_zero: i64,
}

impl WalkState {
    /// Start a walk by drawing the first step. Consumes one uniform pair for
    /// every initial law so streams stay aligned across inits.
    pub fn start(
        params: ModelParams,
        regime: MemoryRegime,
        policy: ZeroRecallPolicy,
        init: InitialLaw,
        rng: &mut impl RngCore,
    ) -> Self {
        let (u, _) = uniform_pair(rng);
        let x1 = match init {
            InitialLaw::PlusOne => 1,
            InitialLaw::MinusOne => -1,
            InitialLaw::Zero => 0,
            InitialLaw::ThreePoint => {
                if u < params.p() {
                    1
                } else if u < params.nonzero_prob() {
                    -1
                } else {
                    0
                }
            }
        };
        let mut state = Self {
            params,
            regime,
            policy,
            n: 0,
            sum: 0,
            x1,
            x2: 0,
            last: 0,
            full_counts: MemoryCounts::default(),
            first_zero_at: None,
            sum_at_first_zero: 0,
        };
        state.record(x1);
        state
    }

    fn record(&mut self, step: i8) {
        self.n += 1;
        self.sum += step as i64;
        if self.n == 2 {
            self.x2 = step;
        }
        self.last = step;
        match step {
            1 => self.full_counts.plus += 1,
            -1 => self.full_counts.minus += 1,
            _ => self.full_counts.zero += 1,
        }
        if step == 0 && self.first_zero_at.is_none() {
            self.first_zero_at = Some(self.n);
            self.sum_at_first_zero = self.sum;
        }
    }

    fn memory_counts(&self) -> MemoryCounts {
        let single = |s: i8| {
            let mut c = MemoryCounts::default();
            match s {
                1 => c.plus = 1,
                -1 => c.minus = 1,
                _ => c.zero = 1,
            }
            c
        };
        match self.regime {
            MemoryRegime::Full => self.full_counts,
            MemoryRegime::FirstStep => single(self.x1),
            MemoryRegime::LastStep => single(self.last),
            MemoryRegime::FirstTwo => {
                if self.n == 1 {
                    single(self.x1)
                } else {
                    let mut c = single(self.x1);
                    let d = single(self.x2);
                    c.plus += d.plus;
                    c.minus += d.minus;
                    c.zero += d.zero;
                    c
                }
            }
            MemoryRegime::FirstAndLast => {
                if self.n == 1 {
                    single(self.x1)
                } else {
                    let mut c = single(self.x1);
                    let d = single(self.last);
                    c.plus += d.plus;
                    c.minus += d.minus;
                    c.zero += d.zero;
                    c
                }
            }
        }
    }

    /// Draw and record the next step.
    pub fn advance(&mut self, rng: &mut impl RngCore) -> i8 {
        let (u_recall, u_branch) = uniform_pair(rng);
        let step = kernel_step(self.memory_counts(), &self.params, self.policy, u_recall, u_branch);
        self.record(step);
        step
    }

    pub fn steps_taken(&self) -> u64 {
        self.n
    }

    pub fn sum(&self) -> i64 {
        self.sum
    }

    pub fn first_step(&self) -> i8 {
        self.x1
    }

    /// Second step; only meaningful once two steps exist.
    pub fn second_step(&self) -> i8 {
        self.x2
    }

    /// Index of the first zero step, if one has occurred.
    pub fn first_zero_at(&self) -> Option<u64> {
        self.first_zero_at
    }

    /// Partial sum at the first zero step.
    pub fn sum_at_first_zero(&self) -> i64 {
        self.sum_at_first_zero
    }

    /// Under last-step memory with the propagate policy the walk is frozen
    /// once a zero step occurs: every later step is zero.
    pub fn is_frozen(&self) -> bool {
        self.regime == MemoryRegime::LastStep
            && self.policy == ZeroRecallPolicy::Propagate
            && self.last == 0
    }
}

/// Simulate one walk of length `n`. The result is a pure function of the
/// stream address and the configuration.
pub fn simulate(
    params: &ModelParams,
    regime: MemoryRegime,
    policy: ZeroRecallPolicy,
    init: InitialLaw,
    n: usize,
    stream: &RngStream,
) -> Result<Trajectory, WalkError> {
    if n == 0 {
        return Err(WalkError::ZeroHorizon);
    }
    let mut rng = stream.walk_rng();
    let mut state = WalkState::start(*params, regime, policy, init, &mut rng);
    let mut steps = Vec::with_capacity(n);
    let mut sums = Vec::with_capacity(n);
    steps.push(state.first_step());
    sums.push(state.sum());
    for _ in 1..n {
        let s = state.advance(&mut rng);
        steps.push(s);
        sums.push(state.sum());
    }
    Ok(Trajectory { steps, sums })
}

/// Partial sums of the multiplier walk `y * S_n` built from a base walk whose
/// first step is identically `+1`.
pub fn scaled_walk(base: &Trajectory, y: f64) -> Vec<f64> {
    debug_assert_eq!(base.steps.first(), Some(&1), "base walk must start at +1");
    base.sums.iter().map(|&s| y * s as f64).collect()
}

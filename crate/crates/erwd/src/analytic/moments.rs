//! Exact per-n moment recursions for every memory regime, policy, and
//! initial law.
//!
//! Each regime reduces to a small linear recursion driven by the two kernel
//! identities
//!
//! ```text
//! E(X_{n+1} | memory) = (p-q) * mean(memory)
//! E(X_{n+1}^2 | memory) = (p+q) * frac_nonzero(memory)   (propagate)
//!                       = (p+q)                          (symmetric resample)
//! ```
//!
//! so means and second moments of the partial sums are computable exactly in
//! O(n) for horizons up to millions of steps. The long additive accumulations
//! are compensated so the closed-form comparisons hold to 1e-10 at n = 1e6.

use thiserror::Error;

use super::kahan::KahanSum;
use crate::params::{InitialLaw, MemoryRegime, ModelParams, ZeroRecallPolicy};

#[derive(Debug, Error, PartialEq)]
pub enum MomentError {
    #[error("horizon must be at least 1")]
    ZeroHorizon,
}

/// Exact E(S_n) and E(S_n²) for n = 1..=n_max, with the configuration that
/// produced them.
#[derive(Debug, Clone)]
pub struct MomentSeries {
    pub params: ModelParams,
    pub regime: MemoryRegime,
    pub policy: ZeroRecallPolicy,
    pub init: InitialLaw,
    means: Vec<f64>,
    seconds: Vec<f64>,
}

impl MomentSeries {
    pub fn len(&self) -> usize {
        self.means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }

    /// E(S_n), 1-indexed.
    pub fn mean(&self, n: usize) -> f64 {
        self.means[n - 1]
    }

    /// E(S_n²), 1-indexed.
    pub fn second_moment(&self, n: usize) -> f64 {
        self.seconds[n - 1]
    }

    /// Var(S_n) = E(S_n²) - E(S_n)².
    pub fn variance(&self, n: usize) -> f64 {
        let m = self.mean(n);
        self.second_moment(n) - m * m
    }
}

/// Exact first two moments of the partial sums.
pub fn exact_moments(
    params: &ModelParams,
    regime: MemoryRegime,
    policy: ZeroRecallPolicy,
    init: InitialLaw,
    n_max: usize,
) -> Result<MomentSeries, MomentError> {
    if n_max == 0 {
        return Err(MomentError::ZeroHorizon);
    }
    let (means, seconds) = match regime {
        MemoryRegime::Full => full_series(params, policy, init, n_max),
        MemoryRegime::FirstStep => mix_branches(params, init, n_max, |x1, w| {
            FirstStepBranch::new(*params, policy, x1, w)
        }),
        MemoryRegime::FirstTwo => mix_branches(params, init, n_max, |x1, w| {
            FirstTwoBranch::new(*params, policy, x1, w)
        }),
        MemoryRegime::LastStep => last_step_series(params, policy, init, n_max),
        MemoryRegime::FirstAndLast => mix_branches(params, init, n_max, |x1, w| {
            FirstAndLastBranch::new(*params, policy, x1, w)
        }),
    };
    Ok(MomentSeries { params: *params, regime, policy, init, means, seconds })
}

/// E(Q_n) where Q_n counts the nonzero steps, under full memory with the
/// propagate policy: E(Q_{n+1}) = (1 + (p+q)/n) E(Q_n). Grows like
/// n^{p+q} / Γ(1+p+q) times E(X_1²), i.e. sublinearly — the diagnostic for
/// why that mode has no nondegenerate √n limit.
pub fn full_propagate_nonzero_mass(params: &ModelParams, init: InitialLaw, n: usize) -> f64 {
    assert!(n >= 1);
    let s = params.nonzero_prob();
    let mut q = init.second_moment(params);
    for k in 1..n {
        q *= 1.0 + s / k as f64;
    }
    q
}

// ---------------------------------------------------------------------------
// full memory: one linear recursion, valid for any initial law
// ---------------------------------------------------------------------------

fn full_series(
    params: &ModelParams,
    policy: ZeroRecallPolicy,
    init: InitialLaw,
    n_max: usize,
) -> (Vec<f64>, Vec<f64>) {
    let d = params.drift();
    let s = params.nonzero_prob();
    let mut means = Vec::with_capacity(n_max);
    let mut seconds = Vec::with_capacity(n_max);
    let mut mean = init.mean(params);
    let mut sec = init.second_moment(params);
    let mut qmass = init.second_moment(params);
    means.push(mean);
    seconds.push(sec);
    for n in 1..n_max {
        let n = n as f64;
        let step_sq = match policy {
            ZeroRecallPolicy::SymmetricResample => s,
            ZeroRecallPolicy::Propagate => s * qmass / n,
        };
        sec = sec * (1.0 + 2.0 * d / n) + step_sq;
        mean *= 1.0 + d / n;
        qmass *= 1.0 + s / n;
        means.push(mean);
        seconds.push(sec);
    }
    (means, seconds)
}

// ---------------------------------------------------------------------------
// branch mixing: the restricted-memory regimes condition on the first step
// ---------------------------------------------------------------------------

trait BranchChain {
    /// E(T_n) and E(T_n²) of the current index.
    fn moments(&self) -> (f64, f64);
    fn advance(&mut self);
}

fn mix_branches<B, F>(
    params: &ModelParams,
    init: InitialLaw,
    n_max: usize,
    make: F,
) -> (Vec<f64>, Vec<f64>)
where
    B: BranchChain,
    F: Fn(i8, f64) -> B,
{
    let mut branches: Vec<(f64, B)> = init
        .weights(params)
        .into_iter()
        .filter(|&(_, w)| w > 0.0)
        .map(|(x1, w)| (w, make(x1, w)))
        .collect();
    let mut means = Vec::with_capacity(n_max);
    let mut seconds = Vec::with_capacity(n_max);
    for n in 0..n_max {
        if n > 0 {
            for (_, b) in branches.iter_mut() {
                b.advance();
            }
        }
        let mut mean = 0.0;
        let mut sec = 0.0;
        for (w, b) in &branches {
            let (m, v) = b.moments();
            mean += w * m;
            sec += w * v;
        }
        means.push(mean);
        seconds.push(sec);
    }
    (means, seconds)
}

/// First-step memory, first step fixed at `x1`: later steps are i.i.d.
struct FirstStepBranch {
    step_mean: f64,
    step_sq: f64,
    t: KahanSum,
    v: KahanSum,
}

impl FirstStepBranch {
    fn new(params: ModelParams, policy: ZeroRecallPolicy, x1: i8, _w: f64) -> Self {
        let x = x1 as f64;
        let step_sq = match (x1, policy) {
            (0, ZeroRecallPolicy::Propagate) => 0.0,
            _ => params.nonzero_prob(),
        };
        Self {
            step_mean: params.drift() * x,
            step_sq,
            t: KahanSum::new(x),
            v: KahanSum::new(x * x),
        }
    }
}

impl BranchChain for FirstStepBranch {
    fn moments(&self) -> (f64, f64) {
        (self.t.value(), self.v.value())
    }

    fn advance(&mut self) {
        // E(T_{n+1}²) = E(T_n²) + 2 μ E(T_n) + E(step²): the step is
        // independent of the past within the branch
        self.v.add(2.0 * self.step_mean * self.t.value());
        self.v.add(self.step_sq);
        self.t.add(self.step_mean);
    }
}

/// First-two memory with the first step fixed: the second step is drawn from
/// the first, then steps are i.i.d. given the pair. Handled as a two-level
/// branch over x2.
struct FirstTwoBranch {
    subs: Vec<(f64, FirstTwoPair)>,
    n: usize,
}

struct FirstTwoPair {
    x1: f64,
    step_mean: f64,
    step_sq: f64,
    t: KahanSum,
    v: KahanSum,
}

impl FirstTwoBranch {
    fn new(params: ModelParams, policy: ZeroRecallPolicy, x1: i8, _w: f64) -> Self {
        let subs = second_step_weights(&params, policy, x1)
            .into_iter()
            .filter(|&(_, w)| w > 0.0)
            .map(|(x2, w)| {
                let pair = FirstTwoPair::new(&params, policy, x1 as f64, x2 as f64);
                (w, pair)
            })
            .collect();
        Self { subs, n: 1 }
    }
}

impl FirstTwoPair {
    fn new(params: &ModelParams, policy: ZeroRecallPolicy, x1: f64, x2: f64) -> Self {
        let step_mean = params.drift() * (x1 + x2) / 2.0;
        let step_sq = match policy {
            ZeroRecallPolicy::Propagate => params.nonzero_prob() * (x1 * x1 + x2 * x2) / 2.0,
            ZeroRecallPolicy::SymmetricResample => params.nonzero_prob(),
        };
        let t2 = x1 + x2;
        Self { x1, step_mean, step_sq, t: KahanSum::new(t2), v: KahanSum::new(t2 * t2) }
    }

    fn advance_tail(&mut self) {
        self.v.add(2.0 * self.step_mean * self.t.value());
        self.v.add(self.step_sq);
        self.t.add(self.step_mean);
    }
}

impl BranchChain for FirstTwoBranch {
    fn moments(&self) -> (f64, f64) {
        if self.n == 1 {
            // only the first step exists; x2 has not been drawn
            let x1 = self.subs.first().map_or(0.0, |(_, p)| p.x1);
            return (x1, x1 * x1);
        }
        let mut mean = 0.0;
        let mut sec = 0.0;
        for (w, pair) in &self.subs {
            let (m, v) = (pair.t.value(), pair.v.value());
            mean += w * m;
            sec += w * v;
        }
        (mean, sec)
    }

    fn advance(&mut self) {
        if self.n >= 2 {
            for (_, pair) in self.subs.iter_mut() {
                pair.advance_tail();
            }
        }
        // n == 1 -> 2: the pair states already hold T_2 = x1 + x2
        self.n += 1;
    }
}

/// Distribution of the second step given the first.
fn second_step_weights(
    params: &ModelParams,
    policy: ZeroRecallPolicy,
    x1: i8,
) -> [(i8, f64); 3] {
    let (p, q, r) = (params.p(), params.q(), params.r());
    match x1 {
        1 => [(1, p), (-1, q), (0, r)],
        -1 => [(1, q), (-1, p), (0, r)],
        _ => match policy {
            ZeroRecallPolicy::Propagate => [(1, 0.0), (-1, 0.0), (0, 1.0)],
            ZeroRecallPolicy::SymmetricResample => {
                let half = params.nonzero_prob() / 2.0;
                [(1, half), (-1, half), (0, r)]
            }
        },
    }
}

// ---------------------------------------------------------------------------
// last-step memory: a coupled chain in E(X_n), E(X_n²), E(S_n X_n), E(S_n²);
// linear in the initial moments, so any initial law feeds in directly
// ---------------------------------------------------------------------------

fn last_step_series(
    params: &ModelParams,
    policy: ZeroRecallPolicy,
    init: InitialLaw,
    n_max: usize,
) -> (Vec<f64>, Vec<f64>) {
    let d = params.drift();
    let pq = params.nonzero_prob();
    let mut e = init.mean(params);
    let mut kap = init.second_moment(params);
    let mut m = kap; // E(S_1 X_1) = E(X_1²)
    let mut s = KahanSum::new(e);
    let mut v = KahanSum::new(kap);
    let mut means = vec![e];
    let mut seconds = vec![kap];
    for _ in 1..n_max {
        let kap_next = match policy {
            ZeroRecallPolicy::Propagate => pq * kap,
            ZeroRecallPolicy::SymmetricResample => pq,
        };
        let e_next = d * e;
        v.add(2.0 * d * m);
        v.add(kap_next);
        s.add(e_next);
        m = d * m + kap_next;
        e = e_next;
        kap = kap_next;
        means.push(s.value());
        seconds.push(v.value());
    }
    (means, seconds)
}

// ---------------------------------------------------------------------------
// first-and-last memory: per fixed first step, the chain couples E(X_n),
// E(X_n²), E(T_n), E(T_n X_n), E(T_n²)
// ---------------------------------------------------------------------------

struct FirstAndLastBranch {
    x1: f64,
    d: f64,
    pq: f64,
    policy: ZeroRecallPolicy,
    e: f64,
    kap: f64,
    m: f64,
    t: KahanSum,
    v: KahanSum,
}

impl FirstAndLastBranch {
    fn new(params: ModelParams, policy: ZeroRecallPolicy, x1: i8, _w: f64) -> Self {
        let x = x1 as f64;
        Self {
            x1: x,
            d: params.drift(),
            pq: params.nonzero_prob(),
            policy,
            e: x,
            kap: x * x,
            m: x * x,
            t: KahanSum::new(x),
            v: KahanSum::new(x * x),
        }
    }
}

impl BranchChain for FirstAndLastBranch {
    fn moments(&self) -> (f64, f64) {
        (self.t.value(), self.v.value())
    }

    fn advance(&mut self) {
        // memory {x1, X_n}; at n = 1 both entries coincide with x1, which the
        // same formulas cover
        let e_next = self.d * (self.x1 + self.e) / 2.0;
        let kap_next = match self.policy {
            ZeroRecallPolicy::Propagate => self.pq * (self.x1 * self.x1 + self.kap) / 2.0,
            ZeroRecallPolicy::SymmetricResample => self.pq,
        };
        let t_now = self.t.value();
        let cross = self.d * (self.x1 * t_now + self.m) / 2.0; // E(T_n X_{n+1})
        self.v.add(2.0 * cross);
        self.v.add(kap_next);
        self.m = cross + kap_next;
        self.t.add(e_next);
        self.e = e_next;
        self.kap = kap_next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams {
        ModelParams::new(0.5, 0.3, 0.2).unwrap()
    }

    #[test]
    fn first_step_closed_forms_at_n_10() {
        // E(T_n) = 1 + (n-1)(p-q), Var(T_n) = (n-1)(p+q-(p-q)²)
        let series = exact_moments(
            &params(),
            MemoryRegime::FirstStep,
            ZeroRecallPolicy::Propagate,
            InitialLaw::PlusOne,
            10,
        )
        .unwrap();
        assert!((series.mean(10) - 2.8).abs() < 1e-13);
        assert!((series.variance(10) - 9.0 * 0.76).abs() < 1e-12);
        assert!((series.variance(2) - 0.76).abs() < 1e-14);
    }

    #[test]
    fn first_step_mirror_symmetry() {
        let plus = exact_moments(
            &params(),
            MemoryRegime::FirstStep,
            ZeroRecallPolicy::Propagate,
            InitialLaw::PlusOne,
            50,
        )
        .unwrap();
        let minus = exact_moments(
            &params(),
            MemoryRegime::FirstStep,
            ZeroRecallPolicy::Propagate,
            InitialLaw::MinusOne,
            50,
        )
        .unwrap();
        for n in 1..=50 {
            assert!((plus.mean(n) + minus.mean(n)).abs() < 1e-12);
            assert!((plus.variance(n) - minus.variance(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_start_under_propagate_is_the_zero_process() {
        for regime in MemoryRegime::ALL {
            let series = exact_moments(
                &params(),
                regime,
                ZeroRecallPolicy::Propagate,
                InitialLaw::Zero,
                20,
            )
            .unwrap();
            for n in 1..=20 {
                assert_eq!(series.mean(n), 0.0, "{regime} mean at {n}");
                assert_eq!(series.second_moment(n), 0.0, "{regime} second at {n}");
            }
        }
    }

    #[test]
    fn full_memory_martingale_mean_under_both_policies() {
        use crate::analytic::martingale::martingale_weight;
        for policy in ZeroRecallPolicy::ALL {
            let series = exact_moments(
                &params(),
                MemoryRegime::Full,
                policy,
                InitialLaw::ThreePoint,
                2000,
            )
            .unwrap();
            let m1 = series.mean(1);
            for n in [2usize, 10, 100, 1999] {
                let weighted = martingale_weight(&params(), n as u64) * series.mean(n);
                assert!(
                    (weighted / m1 - 1.0).abs() < 1e-10,
                    "{policy} at n={n}: {weighted} vs {m1}"
                );
            }
        }
    }

    #[test]
    fn first_and_last_n1_matches_initial_law() {
        let series = exact_moments(
            &params(),
            MemoryRegime::FirstAndLast,
            ZeroRecallPolicy::SymmetricResample,
            InitialLaw::PlusOne,
            1,
        )
        .unwrap();
        assert_eq!(series.mean(1), 1.0);
        assert_eq!(series.second_moment(1), 1.0);
    }

    #[test]
    fn variance_is_nonnegative_and_consistent() {
        for regime in MemoryRegime::ALL {
            for policy in ZeroRecallPolicy::ALL {
                let series = exact_moments(&params(), regime, policy, InitialLaw::ThreePoint, 300)
                    .unwrap();
                for n in 1..=300 {
                    let var = series.variance(n);
                    assert!(var >= -1e-12, "{regime} {policy} var({n}) = {var}");
                }
            }
        }
    }

    #[test]
    fn nonzero_mass_growth_rate() {
        use crate::analytic::special::gamma;
        let pr = params();
        let n = 1_000_000;
        let q = full_propagate_nonzero_mass(&pr, InitialLaw::PlusOne, n);
        let target = 1.0 / gamma(1.0 + pr.nonzero_prob());
        let scaled = q / (n as f64).powf(pr.nonzero_prob());
        assert!((scaled - target).abs() <= 1e-3, "{scaled} vs {target}");
    }
}

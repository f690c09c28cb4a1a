//! Brute-force enumeration oracle: the exact law of S_n by summing kernel
//! probabilities over all 3^n step sequences.
//!
//! The kernel probabilities are recomputed here from the model definition,
//! independently of both the sampler and the moment recursions, so agreement
//! across the three routes is meaningful.

use std::collections::BTreeMap;

use crate::params::{InitialLaw, MemoryRegime, ModelParams, ZeroRecallPolicy};

/// Exact distribution of S_n for each n up to the enumeration depth.
#[derive(Debug, Clone)]
pub struct Enumeration {
    dists: Vec<BTreeMap<i64, f64>>,
}

const STEPS: [i8; 3] = [1, -1, 0];

/// P(next step = +1 / -1 / 0) given the full step history, from first
/// principles: recall an index uniformly from the regime's memory set, then
/// repeat / flip / delay, resolving a recalled zero by the policy.
fn kernel_probabilities(
    history: &[i8],
    params: &ModelParams,
    regime: MemoryRegime,
    policy: ZeroRecallPolicy,
) -> [f64; 3] {
    let indices = regime.memory_indices(history.len());
    let recall_weight = 1.0 / indices.len() as f64;
    let (p, q, r) = (params.p(), params.q(), params.r());
    let mut probs = [0.0f64; 3];
    for idx in indices {
        match history[idx] {
            1 => {
                probs[0] += recall_weight * p;
                probs[1] += recall_weight * q;
                probs[2] += recall_weight * r;
            }
            -1 => {
                probs[0] += recall_weight * q;
                probs[1] += recall_weight * p;
                probs[2] += recall_weight * r;
            }
            _ => match policy {
                ZeroRecallPolicy::Propagate => probs[2] += recall_weight,
                ZeroRecallPolicy::SymmetricResample => {
                    let half = (p + q) / 2.0;
                    probs[0] += recall_weight * half;
                    probs[1] += recall_weight * half;
                    probs[2] += recall_weight * r;
                }
            },
        }
    }
    probs
}

fn explore(
    history: &mut Vec<i8>,
    sum: i64,
    prob: f64,
    n_max: usize,
    params: &ModelParams,
    regime: MemoryRegime,
    policy: ZeroRecallPolicy,
    dists: &mut [BTreeMap<i64, f64>],
) {
    *dists[history.len() - 1].entry(sum).or_insert(0.0) += prob;
    if history.len() == n_max {
        return;
    }
    let probs = kernel_probabilities(history, params, regime, policy);
    for (step, &p_step) in STEPS.iter().zip(&probs) {
        if p_step == 0.0 {
            continue;
        }
        history.push(*step);
        explore(history, sum + *step as i64, prob * p_step, n_max, params, regime, policy, dists);
        history.pop();
    }
}

/// Enumerate with an explicit first-step distribution.
pub fn enumerate_weighted(
    params: &ModelParams,
    regime: MemoryRegime,
    policy: ZeroRecallPolicy,
    init_weights: &[(i8, f64)],
    n_max: usize,
) -> Enumeration {
    assert!(n_max >= 1, "enumeration depth must be at least 1");
    assert!(n_max <= 16, "3^n paths: depth capped to keep enumeration exact and fast");
    let mut dists = vec![BTreeMap::new(); n_max];
    for &(x1, w) in init_weights {
        if w == 0.0 {
            continue;
        }
        let mut history = vec![x1];
        explore(&mut history, x1 as i64, w, n_max, params, regime, policy, &mut dists);
    }
    Enumeration { dists }
}

pub fn enumerate(
    params: &ModelParams,
    regime: MemoryRegime,
    policy: ZeroRecallPolicy,
    init: InitialLaw,
    n_max: usize,
) -> Enumeration {
    enumerate_weighted(params, regime, policy, &init.weights(params), n_max)
}

impl Enumeration {
    pub fn depth(&self) -> usize {
        self.dists.len()
    }

    /// Exact distribution of S_n (1-indexed).
    pub fn dist(&self, n: usize) -> &BTreeMap<i64, f64> {
        &self.dists[n - 1]
    }

    pub fn total_mass(&self, n: usize) -> f64 {
        self.dist(n).values().sum()
    }

    pub fn mean(&self, n: usize) -> f64 {
        self.dist(n).iter().map(|(&s, &w)| s as f64 * w).sum()
    }

    pub fn second_moment(&self, n: usize) -> f64 {
        self.dist(n).iter().map(|(&s, &w)| (s * s) as f64 * w).sum()
    }

    pub fn variance(&self, n: usize) -> f64 {
        let m = self.mean(n);
        self.second_moment(n) - m * m
    }

    /// The law of -S_n.
    pub fn negated(&self, n: usize) -> BTreeMap<i64, f64> {
        self.dist(n).iter().map(|(&s, &w)| (-s, w)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams {
        ModelParams::new(0.5, 0.3, 0.2).unwrap()
    }

    #[test]
    fn mass_is_conserved() {
        for regime in MemoryRegime::ALL {
            for policy in ZeroRecallPolicy::ALL {
                let e = enumerate(&params(), regime, policy, InitialLaw::ThreePoint, 6);
                for n in 1..=6 {
                    assert!((e.total_mass(n) - 1.0).abs() < 1e-13, "{regime} {policy} n={n}");
                }
            }
        }
    }

    #[test]
    fn first_step_t2_law_is_exact() {
        // T_2 = 1 + step where the step repeats +1 w.p. p, flips w.p. q, delays w.p. r
        let e = enumerate(
            &params(),
            MemoryRegime::FirstStep,
            ZeroRecallPolicy::Propagate,
            InitialLaw::PlusOne,
            2,
        );
        let d = e.dist(2);
        assert!((d[&2] - 0.5).abs() < 1e-15);
        assert!((d[&1] - 0.2).abs() < 1e-15);
        assert!((d[&0] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn mirrored_start_negates_the_law_of_t_n() {
        for regime in MemoryRegime::ALL {
            for policy in ZeroRecallPolicy::ALL {
                let plus = enumerate(&params(), regime, policy, InitialLaw::PlusOne, 8);
                let minus = enumerate(&params(), regime, policy, InitialLaw::MinusOne, 8);
                for n in 1..=8 {
                    let negated = plus.negated(n);
                    let target = minus.dist(n);
                    assert_eq!(negated.len(), target.len());
                    for (s, w) in &negated {
                        assert!(
                            (w - target[s]).abs() < 1e-14,
                            "{regime} {policy} n={n} s={s}"
                        );
                    }
                    assert!((plus.variance(n) - minus.variance(n)).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn sign_swapped_start_mirrors_the_random_walk() {
        // same kernel, first-step law (q, p, r) instead of (p, q, r): the
        // resulting law is the reflection of the three-point walk
        let pr = params();
        for regime in MemoryRegime::ALL {
            let swapped = [(1i8, pr.q()), (-1i8, pr.p()), (0i8, pr.r())];
            let base = enumerate(&pr, regime, ZeroRecallPolicy::Propagate, InitialLaw::ThreePoint, 7);
            let mirrored =
                enumerate_weighted(&pr, regime, ZeroRecallPolicy::Propagate, &swapped, 7);
            for n in 1..=7 {
                let negated = base.negated(n);
                for (s, w) in &negated {
                    assert!((w - mirrored.dist(n)[s]).abs() < 1e-14, "{regime} n={n} s={s}");
                }
            }
        }
    }

    #[test]
    fn full_memory_three_point_small_n_sanity() {
        // n = 2 by hand: P(S_2 = 2) = p·p, P(S_2 = -2) = q·p, P(S_2 = 0) includes
        // the zero-start mass r plus the flip transitions
        let e = enumerate(
            &params(),
            MemoryRegime::Full,
            ZeroRecallPolicy::Propagate,
            InitialLaw::ThreePoint,
            2,
        );
        let d = e.dist(2);
        assert!((d[&2] - 0.25).abs() < 1e-15);
        assert!((d[&-2] - 0.3 * 0.5).abs() < 1e-15);
        // 0: start at 0 (r, then propagate) = 0.2; +1 then -1: 0.5·0.3; -1 then +1: 0.3·0.3
        assert!((d[&0] - (0.2 + 0.15 + 0.09)).abs() < 1e-15);
    }
}

//! Martingale weights a_n, the ν_n normalizer, and the diffusion regimes.
//!
//! With γ_k = 1 + (p-q)/k, the weight a_n = Π_{k<n} γ_k^{-1}
//! = Γ(p-q+1) Γ(n) / Γ(n+p-q) makes a_n S_n a martingale under full memory,
//! and ν_n = Σ_{k≤n} a_k² sets the scale of its quadratic variation.

use super::kahan::KahanSum;
use super::special::{gamma, ln_gamma, ln_gamma_ratio};
use crate::params::ModelParams;

/// Growth class of ν_n, split by the sign of (p - q) - 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum DiffusionRegime {
    Diffusive,
    Critical,
    Superdiffusive,
}

const CRITICAL_TOL: f64 = 1e-12;

pub fn classify(params: &ModelParams) -> DiffusionRegime {
    let d = params.drift();
    if (d - 0.5).abs() <= CRITICAL_TOL {
        DiffusionRegime::Critical
    } else if d > 0.5 {
        DiffusionRegime::Superdiffusive
    } else {
        DiffusionRegime::Diffusive
    }
}

/// a_n computed through log-gamma, stable for n up to 1e9 and beyond.
pub fn martingale_weight(params: &ModelParams, n: u64) -> f64 {
    assert!(n >= 1, "martingale weight defined for n >= 1");
    let d = params.drift();
    assert!(d > -1.0, "martingale weight requires p - q > -1, got {d}");
    if n == 1 {
        return 1.0; // empty product
    }
    (ln_gamma(1.0 + d) - ln_gamma_ratio(n as f64, d)).exp()
}

/// ν_n = Σ_{k≤n} a_k², by direct summation with a running ratio
/// a_{k+1} = a_k · k / (k + p - q).
pub fn nu_exact(params: &ModelParams, n: u64) -> f64 {
    assert!(n >= 1);
    let d = params.drift();
    let mut a = 1.0f64;
    let mut sum = KahanSum::default();
    sum.add(1.0);
    for k in 1..n {
        let k = k as f64;
        a *= k / (k + d);
        sum.add(a * a);
    }
    sum.value()
}

/// Asymptotic value of ν_n: the power law in the diffusive phase, (π/4) log n
/// at criticality, and the finite sup in the superdiffusive phase.
pub fn nu_asymptote(params: &ModelParams, n: u64) -> (DiffusionRegime, f64) {
    let d = params.drift();
    let regime = classify(params);
    let value = match regime {
        DiffusionRegime::Diffusive => {
            let g = gamma(1.0 + d);
            g * g * (n as f64).powf(1.0 - 2.0 * d) / (1.0 - 2.0 * d)
        }
        DiffusionRegime::Critical => std::f64::consts::FRAC_PI_4 * (n as f64).ln(),
        DiffusionRegime::Superdiffusive => nu_sup(params),
    };
    (regime, value)
}

/// Numerically converged bound sup_n ν_n for p - q > 1/2: partial sum plus an
/// Euler-Maclaurin tail estimate for Σ_{k>K} a_k².
fn nu_sup(params: &ModelParams) -> f64 {
    let d = params.drift();
    debug_assert!(d > 0.5);
    const CUTOFF: u64 = 2_000_000;
    let partial = nu_exact(params, CUTOFF);
    let g = gamma(1.0 + d);
    let k = CUTOFF as f64;
    let tail = g * g * (k.powf(1.0 - 2.0 * d) / (2.0 * d - 1.0) + 0.5 * k.powf(-2.0 * d));
    partial + tail
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: f64, q: f64) -> ModelParams {
        ModelParams::new(p, q, 1.0 - p - q).unwrap()
    }

    #[test]
    fn weight_is_one_at_n_equals_one() {
        assert_eq!(martingale_weight(&params(0.6, 0.1), 1), 1.0);
    }

    #[test]
    fn weight_matches_small_products() {
        // a_2 = 1/γ_1 = 1/(1 + d), a_3 = a_2 / (1 + d/2)
        let pr = params(0.6, 0.1); // d = 0.5
        assert!((martingale_weight(&pr, 2) - 2.0 / 3.0).abs() < 1e-14);
        assert!((martingale_weight(&pr, 3) - 8.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn weight_ratio_identity_holds_to_1e13() {
        // a_{n+1}/a_n = n / (n + d), including very large n
        for (p, q) in [(0.6, 0.1), (0.5, 0.3), (0.8, 0.05), (0.3, 0.5)] {
            let pr = params(p, q);
            let d = pr.drift();
            for n in [1u64, 2, 7, 100, 10_000, 1_000_000, 1_000_000_000] {
                let ratio = martingale_weight(&pr, n + 1) / martingale_weight(&pr, n);
                let exact = n as f64 / (n as f64 + d);
                assert!(
                    (ratio / exact - 1.0).abs() < 1e-13,
                    "p={p} q={q} n={n}: ratio {ratio} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn weight_matches_running_product() {
        let pr = params(0.5, 0.3);
        let d = pr.drift();
        let mut a = 1.0f64;
        for n in 1..=2000u64 {
            let w = martingale_weight(&pr, n);
            assert!((w / a - 1.0).abs() < 1e-11, "n={n}: {w} vs {a}");
            a *= n as f64 / (n as f64 + d);
        }
    }

    #[test]
    fn classical_reduction_at_r_zero() {
        // with q = 1 - p the weight equals Γ(n)Γ(2p)/Γ(n+2p-1)
        for p in [0.55, 0.75, 0.9] {
            let pr = ModelParams::new_boundary(p, 1.0 - p, 0.0).unwrap();
            for n in (2..=100u64).chain([1000, 10_000]) {
                let ours = martingale_weight(&pr, n);
                let classical =
                    (ln_gamma(2.0 * p) - ln_gamma_ratio(n as f64, 2.0 * p - 1.0)).exp();
                assert!(
                    (ours / classical - 1.0).abs() <= 1e-12,
                    "p={p} n={n}: {ours} vs {classical}"
                );
            }
        }
    }

    #[test]
    fn nu_starts_at_one_and_matches_asymptote_in_the_diffusive_phase() {
        let pr = params(0.5, 0.3); // d = 0.2
        assert_eq!(nu_exact(&pr, 1), 1.0);
        let exact = nu_exact(&pr, 1_000_000);
        let (regime, asym) = nu_asymptote(&pr, 1_000_000);
        assert_eq!(regime, DiffusionRegime::Diffusive);
        let ratio = exact / asym;
        assert!((0.99..=1.01).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn critical_classification_and_log_growth() {
        let pr = params(0.6, 0.1);
        let (regime, asym) = nu_asymptote(&pr, 100_000);
        assert_eq!(regime, DiffusionRegime::Critical);
        // log-speed convergence: only a loose ratio check is meaningful
        let exact = nu_exact(&pr, 100_000);
        assert!((exact / asym - 1.0).abs() < 0.15, "{exact} vs {asym}");
    }

    #[test]
    fn superdiffusive_nu_is_bounded_monotone_with_tiny_increments() {
        let pr = params(0.8, 0.05); // d = 0.75
        let (regime, sup) = nu_asymptote(&pr, 1);
        assert_eq!(regime, DiffusionRegime::Superdiffusive);
        let mut prev = 0.0;
        for n in [10u64, 100, 1000, 10_000, 100_000, 1_000_000] {
            let v = nu_exact(&pr, n);
            assert!(v > prev);
            assert!(v <= sup + 1e-9, "nu_{n} = {v} above sup {sup}");
            prev = v;
        }
        // beyond 1e5 consecutive increments a_n^2 are below 1e-6
        let d = pr.drift();
        let a_1e5 = martingale_weight(&pr, 100_000);
        assert!(a_1e5 * a_1e5 < 1e-6);
        let _ = d;
    }
}

//! Absorption statistics of the last-step-memory walk with delays.
//!
//! Under the propagate policy and r > 0 the walk freezes at the first zero
//! step. The absorption time τ is geometric, and conditioning on "no zero
//! yet" leaves a two-state walk with transition probabilities
//! p̃ = p/(p+q) for repeating the sign and q̃ = q/(p+q) for flipping it.

use super::limits::LimitError;
use crate::params::ModelParams;

/// Closed-form absorption quantities at index n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LastStepFormulas {
    /// P(τ = n) = r (1-r)^{n-1}.
    pub p_tau_n: f64,
    /// E(τ) = 1/r.
    pub mean_tau: f64,
    /// E(T̃_n) of the conditioned walk started at +1:
    /// (1 - (2p̃-1)^n) / (2(1-p̃)).
    pub mean_t_tilde_n: f64,
    /// E(S̃_{n-1}) of the conditioned walk with a random (±1) start:
    /// (p-q)/(2q) · (1 - ((p-q)/(p+q))^{n-1}).
    pub mean_s_tilde_prev: f64,
    /// E(S_τ) = (p-q)/(1-p+q).
    pub mean_s_tau: f64,
}

pub fn last_step_formulas(params: &ModelParams, n: u64) -> Result<LastStepFormulas, LimitError> {
    assert!(n >= 1);
    let r = params.r();
    if r <= 0.0 {
        return Err(LimitError::NoDelay);
    }
    let (p, q) = (params.p(), params.q());
    let s = params.nonzero_prob();
    let p_tilde = p / s;
    let ratio = (p - q) / s; // 2p̃ - 1
    let mean_t_tilde_n = if q == 0.0 {
        n as f64
    } else {
        (1.0 - ratio.powi(n as i32)) / (2.0 * (1.0 - p_tilde))
    };
    let mean_s_tilde_prev = if q == 0.0 {
        (n - 1) as f64
    } else {
        (p - q) / (2.0 * q) * (1.0 - ratio.powi(n as i32 - 1))
    };
    Ok(LastStepFormulas {
        p_tau_n: r * (1.0 - r).powi(n as i32 - 1),
        mean_tau: 1.0 / r,
        mean_t_tilde_n,
        mean_s_tilde_prev,
        mean_s_tau: (p - q) / (1.0 - p + q),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_absorption_at_default_parameters() {
        let params = ModelParams::new(0.5, 0.3, 0.2).unwrap();
        let f1 = last_step_formulas(&params, 1).unwrap();
        assert!((f1.p_tau_n - 0.2).abs() < 1e-15);
        assert!((f1.mean_tau - 5.0).abs() < 1e-15);
        assert!((f1.mean_s_tau - 0.25).abs() < 1e-15);
        // P(τ = n) sums to one
        let total: f64 = (1..400).map(|n| last_step_formulas(&params, n).unwrap().p_tau_n).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conditioned_walk_mean_converges_to_its_closed_limit() {
        // p̃ = 0.625: E(T̃_n) = (1 - 0.25^n)/0.75 → 4/3
        let params = ModelParams::new(0.5, 0.3, 0.2).unwrap();
        let f1 = last_step_formulas(&params, 1).unwrap();
        assert!((f1.mean_t_tilde_n - 1.0).abs() < 1e-15);
        let f40 = last_step_formulas(&params, 40).unwrap();
        assert!((f40.mean_t_tilde_n - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(f1.mean_s_tilde_prev, 0.0);
    }

    #[test]
    fn symmetric_kernel_has_zero_absorbed_mean() {
        let params = ModelParams::new(0.4, 0.4, 0.2).unwrap();
        let f = last_step_formulas(&params, 5).unwrap();
        assert_eq!(f.mean_s_tau, 0.0);
        assert_eq!(f.mean_s_tilde_prev, 0.0);
    }

    #[test]
    fn no_delay_is_a_domain_error() {
        let params = ModelParams::new_boundary(0.6, 0.4, 0.0).unwrap();
        assert_eq!(last_step_formulas(&params, 3), Err(LimitError::NoDelay));
    }

    #[test]
    fn tilde_mean_is_consistent_with_the_tau_decomposition() {
        // E(S_τ) = Σ_n E(S̃_{n-1}) P(τ = n)
        let params = ModelParams::new(0.5, 0.3, 0.2).unwrap();
        let mut acc = 0.0;
        for n in 1..500 {
            let f = last_step_formulas(&params, n).unwrap();
            acc += f.mean_s_tilde_prev * f.p_tau_n;
        }
        assert!((acc - 0.25).abs() < 1e-12);
    }
}

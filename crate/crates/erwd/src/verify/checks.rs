//! Statistical comparisons of Monte Carlo ensembles against exact targets:
//! atom-aware Kolmogorov-Smirnov, moment checks, discrete-cluster
//! classification, and a chi-square fit for the absorption time.

use thiserror::Error;

use super::report::TestResult;
use crate::analytic::mixture::MixtureLaw;
use crate::analytic::special::chi_square_sf;
use crate::mc::EnsembleStats;

#[derive(Debug, Error, PartialEq)]
pub enum VerifyError {
    #[error("sample is empty")]
    EmptySample,
    #[error("sample contains a NaN")]
    NanInSample,
    #[error("moment checks need at least 100 observations, got {0}")]
    TooFewObservations(u64),
    #[error("atom locations must be separated by more than 2·epsilon")]
    OverlappingAtoms,
    #[error("geometric fit needs at least 1e4 observations, got {0}")]
    TooFewCounts(u64),
}

/// Kolmogorov-Smirnov distance between the empirical law of `sample` and a
/// mixture with atoms: the sup of |F_m - F| over all sample points and atom
/// locations, evaluating both F(x) and the left limit F(x-).
pub fn ks_mixed(sample: &[f64], law: &MixtureLaw) -> Result<f64, VerifyError> {
    if sample.is_empty() {
        return Err(VerifyError::EmptySample);
    }
    if sample.iter().any(|x| x.is_nan()) {
        return Err(VerifyError::NanInSample);
    }
    let mut xs = sample.to_vec();
    xs.sort_unstable_by(|a, b| a.total_cmp(b));
    let m = xs.len() as f64;
    let mut d = 0.0f64;
    // walk tie groups: the ecdf jumps by the full tie mass at a repeated value
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i + 1;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        let right = j as f64 / m - law.cdf(x);
        let left = i as f64 / m - law.cdf_left(x);
        d = d.max(right.abs()).max(left.abs());
        i = j;
    }
    for (loc, _) in law.atoms() {
        let at_or_below = xs.partition_point(|&v| v <= loc) as f64 / m;
        let below = xs.partition_point(|&v| v < loc) as f64 / m;
        d = d.max((at_or_below - law.cdf(loc)).abs());
        d = d.max((below - law.cdf_left(loc)).abs());
    }
    Ok(d)
}

/// Which empirical moment a check targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentKind {
    Mean,
    SecondMoment,
    Variance,
}

/// How the sampling band and the finite-n allowance combine into a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tolerance {
    /// k·SE + bias: a sampling band widened by a deterministic allowance.
    SePlusBias,
    /// max(k·SE, bias): whichever of the two dominates.
    SeOrBias,
}

/// |empirical - target| against the combined tolerance.
pub fn moment_check(
    name: impl Into<String>,
    stats: &EnsembleStats,
    kind: MomentKind,
    target: f64,
    k_sigma: f64,
    bias_allowance: f64,
    tolerance: Tolerance,
    note: impl Into<String>,
) -> Result<TestResult, VerifyError> {
    if stats.count() < 100 {
        return Err(VerifyError::TooFewObservations(stats.count()));
    }
    let (empirical, se) = match kind {
        MomentKind::Mean => (stats.mean(), stats.se_mean()),
        MomentKind::SecondMoment => (stats.second_moment(), stats.se_second_moment()),
        MomentKind::Variance => (stats.variance(), stats.se_variance()),
    };
    let band = k_sigma * se;
    let threshold = match tolerance {
        Tolerance::SePlusBias => band + bias_allowance,
        Tolerance::SeOrBias => band.max(bias_allowance),
    };
    let mut note = note.into();
    note.push_str(&format!(" [empirical {empirical:.6}, target {target:.6}, se {se:.2e}]"));
    Ok(TestResult::new(name, (empirical - target).abs(), threshold, stats.count(), note))
}

/// Classify each sample point to the nearest atom within `epsilon` and test
/// the class frequencies against the atom weights at 4·√(w(1-w)/m), with an
/// allowed fraction of unclassified points. The reported statistic is the
/// worst deviation as a multiple of its own tolerance.
pub fn discrete_cluster_check(
    name: impl Into<String>,
    sample: &[f64],
    atoms: &[(f64, f64)],
    epsilon: f64,
    unclassified_slack: f64,
    note: impl Into<String>,
) -> Result<TestResult, VerifyError> {
    if sample.is_empty() {
        return Err(VerifyError::EmptySample);
    }
    for (i, &(a, _)) in atoms.iter().enumerate() {
        for &(b, _) in &atoms[i + 1..] {
            if (a - b).abs() <= 2.0 * epsilon {
                return Err(VerifyError::OverlappingAtoms);
            }
        }
    }
    let m = sample.len() as f64;
    let mut counts = vec![0u64; atoms.len()];
    let mut unclassified = 0u64;
    for &x in sample {
        let nearest = atoms
            .iter()
            .enumerate()
            .min_by(|(_, (a, _)), (_, (b, _))| (x - a).abs().total_cmp(&(x - b).abs()))
            .map(|(i, (a, _))| (i, (x - a).abs()))
            .expect("atom list verified non-empty by separation check");
        match nearest {
            (i, dist) if dist <= epsilon => counts[i] += 1,
            _ => unclassified += 1,
        }
    }
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for (idx, (&count, &(loc, weight))) in counts.iter().zip(atoms).enumerate() {
        let freq = count as f64 / m;
        let tol = 4.0 * (weight * (1.0 - weight) / m).sqrt();
        worst = worst.max((freq - weight).abs() / tol);
        if idx > 0 {
            detail.push(' ');
        }
        detail.push_str(&format!("{loc}:{freq:.4}/{weight:.4}"));
    }
    let unclassified_frac = unclassified as f64 / m;
    if unclassified_slack > 0.0 {
        worst = worst.max(unclassified_frac / unclassified_slack);
    } else if unclassified > 0 {
        worst = f64::INFINITY;
    }
    let mut note = note.into();
    note.push_str(&format!(" [{detail}; unclassified {unclassified_frac:.2e}]"));
    Ok(TestResult::new(name, worst, 1.0, sample.len() as u64, note))
}

/// Chi-square goodness of fit of absorption-time counts against the
/// geometric law P(τ = k) = r (1-r)^{k-1}, pooling the tail so every bin has
/// expected count at least 5. Passes at significance 0.001; the reported
/// statistic is 1 - p so that pass means statistic <= 0.999.
pub fn geometric_fit(
    name: impl Into<String>,
    tau_counts: &[u64],
    r: f64,
    note: impl Into<String>,
) -> Result<TestResult, VerifyError> {
    let total: u64 = tau_counts.iter().sum();
    if total < 10_000 {
        return Err(VerifyError::TooFewCounts(total));
    }
    let m = total as f64;
    let mut chi2 = 0.0f64;
    let mut bins = 0usize;
    let mut pooled_obs = 0.0f64;
    let mut pooled_exp = 0.0f64;
    let mut tail_prob = 1.0f64; // P(τ >= k)
    let mut pooling = false;
    for (i, &obs) in tau_counts.iter().enumerate() {
        let p_k = r * (1.0 - r).powi(i as i32);
        let expected = m * p_k;
        tail_prob -= p_k;
        if !pooling && expected >= 5.0 {
            chi2 += (obs as f64 - expected).powi(2) / expected;
            bins += 1;
        } else {
            pooling = true;
            pooled_obs += obs as f64;
            pooled_exp += expected;
        }
    }
    // everything beyond the observed histogram
    pooled_exp += m * tail_prob.max(0.0);
    if pooled_exp > 0.0 {
        chi2 += (pooled_obs - pooled_exp).powi(2) / pooled_exp;
        bins += 1;
    }
    let dof = (bins - 1).max(1) as f64;
    let p_value = chi_square_sf(chi2, dof);
    let mut note = note.into();
    note.push_str(&format!(" [chi2 {chi2:.3}, dof {dof}, p {p_value:.4}]"));
    Ok(TestResult::new(name, 1.0 - p_value, 0.999, total, note))
}

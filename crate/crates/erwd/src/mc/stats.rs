//! Streaming ensemble statistics with deterministic, associative merging.

/// Accumulated functional values of an ensemble. Power sums merge by plain
/// addition, so combining partial accumulators is associative and
/// order-independent up to rounding; the retained sample is kept in replica
/// order for the distributional tests.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EnsembleStats {
    count: u64,
    censored: u64,
    s1: f64,
    s2: f64,
    s3: f64,
    s4: f64,
    min: f64,
    max: f64,
    samples: Vec<f64>,
}

impl EnsembleStats {
    pub fn new() -> Self {
        Self { min: f64::INFINITY, max: f64::NEG_INFINITY, ..Self::default() }
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.s1 += x;
        let x2 = x * x;
        self.s2 += x2;
        self.s3 += x2 * x;
        self.s4 += x2 * x2;
        self.min = self.min.min(x);
        self.max = self.max.max(x);
        self.samples.push(x);
    }

    pub fn push_censored(&mut self) {
        self.censored += 1;
    }

    pub fn from_values(values: &[f64], censored: u64) -> Self {
        let mut stats = Self::new();
        for &v in values {
            stats.push(v);
        }
        stats.censored = censored;
        stats
    }

    /// Combine two accumulators (replica ranges concatenate in order).
    pub fn merge(mut self, other: EnsembleStats) -> EnsembleStats {
        self.count += other.count;
        self.censored += other.censored;
        self.s1 += other.s1;
        self.s2 += other.s2;
        self.s3 += other.s3;
        self.s4 += other.s4;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
        self.samples.extend(other.samples);
        self
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn censored(&self) -> u64 {
        self.censored
    }

    pub fn mean(&self) -> f64 {
        self.s1 / self.count as f64
    }

    pub fn second_moment(&self) -> f64 {
        self.s2 / self.count as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.second_moment() - m * m
    }

    pub fn fourth_moment(&self) -> f64 {
        self.s4 / self.count as f64
    }

    /// Standard error of the sample mean.
    pub fn se_mean(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }

    /// Standard error of the sample second moment (mean of X²).
    pub fn se_second_moment(&self) -> f64 {
        let m2 = self.second_moment();
        let var_of_sq = self.fourth_moment() - m2 * m2;
        (var_of_sq.max(0.0) / self.count as f64).sqrt()
    }

    /// Standard error of the sample variance, via the fourth central moment:
    /// Var(s²) ≈ (μ₄ - σ⁴)/n.
    pub fn se_variance(&self) -> f64 {
        let m = self.mean();
        let n = self.count as f64;
        let mu4 =
            (self.s4 - 4.0 * m * self.s3 + 6.0 * m * m * self.s2) / n - 3.0 * m.powi(4);
        let var = self.variance();
        (((mu4 - var * var).max(0.0)) / n).sqrt()
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_of_a_small_sample() {
        let stats = EnsembleStats::from_values(&[1.0, 2.0, 3.0, 4.0], 0);
        assert_eq!(stats.count(), 4);
        assert_eq!(stats.mean(), 2.5);
        assert_eq!(stats.second_moment(), 7.5);
        assert!((stats.variance() - 1.25).abs() < 1e-15);
        assert_eq!(stats.min(), 1.0);
        assert_eq!(stats.max(), 4.0);
    }

    #[test]
    fn merge_equals_single_pass() {
        let all = [0.3, -1.2, 4.5, 0.0, 2.2, -0.7];
        let whole = EnsembleStats::from_values(&all, 1);
        let merged = EnsembleStats::from_values(&all[..2], 1)
            .merge(EnsembleStats::from_values(&all[2..5], 0))
            .merge(EnsembleStats::from_values(&all[5..], 0));
        assert_eq!(whole.count(), merged.count());
        assert_eq!(whole.censored(), merged.censored());
        assert!((whole.mean() - merged.mean()).abs() < 1e-12);
        assert!((whole.variance() - merged.variance()).abs() < 1e-12);
        assert_eq!(whole.samples(), merged.samples());
    }
}

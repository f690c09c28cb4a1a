//! Finite mixtures of Gaussians and point masses — the codomain of every
//! distributional limit in the model.

use serde::Serialize;
use thiserror::Error;

use super::special::normal_cdf;

#[derive(Debug, Error, PartialEq)]
pub enum MixtureError {
    #[error("mixture weights must be nonnegative and sum to 1 within 1e-12, got sum = {0}")]
    BadWeights(f64),
    #[error("gaussian variance must be nonnegative, got {0}")]
    NegativeVariance(f64),
    #[error("quantile level must lie in (0,1), got {0}")]
    BadQuantileLevel(f64),
    #[error("moment order {0} not supported (max 4)")]
    BadMomentOrder(u32),
    #[error("mixture has no components")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ComponentKind {
    Gaussian { mean: f64, variance: f64 },
    PointMass { location: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Component {
    pub weight: f64,
    pub kind: ComponentKind,
}

/// Convex combination of Gaussian laws and point masses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixtureLaw {
    components: Vec<Component>,
}

impl MixtureLaw {
    pub fn new(components: Vec<Component>) -> Result<Self, MixtureError> {
        if components.is_empty() {
            return Err(MixtureError::Empty);
        }
        let mut sum = 0.0;
        for c in &components {
            if c.weight < 0.0 || c.weight.is_nan() {
                return Err(MixtureError::BadWeights(c.weight));
            }
            if let ComponentKind::Gaussian { variance, .. } = c.kind {
                if variance < 0.0 {
                    return Err(MixtureError::NegativeVariance(variance));
                }
            }
            sum += c.weight;
        }
        if (sum - 1.0).abs() > 1e-12 {
            return Err(MixtureError::BadWeights(sum));
        }
        Ok(Self { components })
    }

    /// Single standard building blocks.
    pub fn gaussian(mean: f64, variance: f64) -> Self {
        Self { components: vec![Component { weight: 1.0, kind: ComponentKind::Gaussian { mean, variance } }] }
    }

    pub fn point_mass(location: f64) -> Self {
        Self { components: vec![Component { weight: 1.0, kind: ComponentKind::PointMass { location } }] }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Atom locations with their weights (zero-variance Gaussians count as
    /// atoms for CDF purposes).
    pub fn atoms(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for c in &self.components {
            let loc = match c.kind {
                ComponentKind::PointMass { location } => Some(location),
                ComponentKind::Gaussian { mean, variance } if variance == 0.0 => Some(mean),
                _ => None,
            };
            if let Some(loc) = loc {
                match out.iter_mut().find(|(l, _)| *l == loc) {
                    Some(entry) => entry.1 += c.weight,
                    None => out.push((loc, c.weight)),
                }
            }
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }

    /// Right-continuous CDF.
    pub fn cdf(&self, x: f64) -> f64 {
        self.cdf_impl(x, true)
    }

    /// Left limit F(x-).
    pub fn cdf_left(&self, x: f64) -> f64 {
        self.cdf_impl(x, false)
    }

    fn cdf_impl(&self, x: f64, include_atom_at_x: bool) -> f64 {
        let mut acc = 0.0;
        for c in &self.components {
            acc += c.weight
                * match c.kind {
                    ComponentKind::Gaussian { mean, variance } if variance > 0.0 => {
                        normal_cdf((x - mean) / variance.sqrt())
                    }
                    ComponentKind::Gaussian { mean, .. } => {
                        indicator(x, mean, include_atom_at_x)
                    }
                    ComponentKind::PointMass { location } => {
                        indicator(x, location, include_atom_at_x)
                    }
                };
        }
        acc
    }

    /// Raw moment E X^k for k ≤ 4.
    pub fn moment(&self, k: u32) -> Result<f64, MixtureError> {
        if k > 4 {
            return Err(MixtureError::BadMomentOrder(k));
        }
        let mut acc = 0.0;
        for c in &self.components {
            let m = match c.kind {
                ComponentKind::PointMass { location } => location.powi(k as i32),
                ComponentKind::Gaussian { mean, variance } => gaussian_raw_moment(mean, variance, k),
            };
            acc += c.weight * m;
        }
        Ok(acc)
    }

    pub fn mean(&self) -> f64 {
        self.moment(1).expect("order 1 is always supported")
    }

    pub fn variance(&self) -> f64 {
        let m1 = self.mean();
        self.moment(2).expect("order 2 is always supported") - m1 * m1
    }

    /// Generalized inverse Q(u) = inf { x : F(x) ≥ u }, which lands on the
    /// left endpoint of any atom plateau.
    pub fn quantile(&self, u: f64) -> Result<f64, MixtureError> {
        if !(0.0..1.0).contains(&u) || u <= 0.0 {
            return Err(MixtureError::BadQuantileLevel(u));
        }
        // bracket the level
        let mut lo = -1.0f64;
        let mut hi = 1.0f64;
        for c in &self.components {
            let (center, spread) = match c.kind {
                ComponentKind::Gaussian { mean, variance } => (mean, variance.sqrt()),
                ComponentKind::PointMass { location } => (location, 0.0),
            };
            lo = lo.min(center - 10.0 * spread - 1.0);
            hi = hi.max(center + 10.0 * spread + 1.0);
        }
        while self.cdf(lo) >= u {
            lo = lo * 2.0 - 1.0;
        }
        while self.cdf(hi) < u {
            hi = hi * 2.0 + 1.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid) >= u {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= f64::EPSILON * hi.abs().max(lo.abs()).max(1.0) {
                break;
            }
        }
        Ok(hi)
    }
}

fn indicator(x: f64, atom: f64, include: bool) -> f64 {
    let hit = if include { x >= atom } else { x > atom };
    if hit {
        1.0
    } else {
        0.0
    }
}

fn gaussian_raw_moment(mean: f64, variance: f64, k: u32) -> f64 {
    match k {
        0 => 1.0,
        1 => mean,
        2 => mean * mean + variance,
        3 => mean.powi(3) + 3.0 * mean * variance,
        4 => mean.powi(4) + 6.0 * mean * mean * variance + 3.0 * variance * variance,
        _ => unreachable!("orders above 4 rejected earlier"),
    }
}

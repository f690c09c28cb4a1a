//! Catalog of the model's limit theorems: their constants and their mixture
//! limit laws.

use serde::Serialize;
use thiserror::Error;

use super::diffeq::affine_fixed_line;
use super::martingale::{classify, DiffusionRegime};
use super::mixture::{Component, ComponentKind, MixtureLaw};
use super::special::gamma;
use crate::params::{FyTable, ModelParams};

/// Identifier of one limit statement. The constants and laws attached to each
/// id are documented on [`limit_constants`] and [`limit_law`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[allow(non_camel_case_types)]
pub enum LimitTheoremId {
    /// Diffusive full-memory fluctuation: S_n/√n → (p+q)·N(0, (p+q)/(1-2(p-q))) + r·δ0.
    T41a,
    /// Critical full-memory fluctuation: S_n/√(n log n) → (p+q)·N(0, p+q) + r·δ0.
    T41b,
    /// Superdiffusive full-memory a.s. limit L of S_n/n^{p-q}, pinned by its
    /// first two moments.
    T41c,
    /// Diffusive fluctuation of the multiplier walk Y·S̃_n.
    T43,
    /// Critical-case analog of T43.
    T43critical,
    /// First-step memory law of large numbers: three-point limit of S_n/n.
    T52,
    /// First-step memory randomly-centered CLT.
    T53a,
    /// First-two memory law of large numbers: five-point limit of S_n/n.
    T61a,
    /// First-two memory randomly-centered CLT (three Gaussians plus an atom).
    T62a,
    /// Last-step memory absorption: moments of τ and S_τ.
    T72,
    /// First-and-last memory law of large numbers: three-point limit of S_n/n.
    T81,
    /// First-and-last memory randomly-centered CLT.
    T82,
}

impl LimitTheoremId {
    pub const ALL: [LimitTheoremId; 12] = [
        LimitTheoremId::T41a,
        LimitTheoremId::T41b,
        LimitTheoremId::T41c,
        LimitTheoremId::T43,
        LimitTheoremId::T43critical,
        LimitTheoremId::T52,
        LimitTheoremId::T53a,
        LimitTheoremId::T61a,
        LimitTheoremId::T62a,
        LimitTheoremId::T72,
        LimitTheoremId::T81,
        LimitTheoremId::T82,
    ];
}

impl std::fmt::Display for LimitTheoremId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for LimitTheoremId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        LimitTheoremId::ALL
            .into_iter()
            .find(|id| format!("{id:?}").to_ascii_lowercase() == lower)
            .ok_or_else(|| format!("unknown theorem id `{s}`"))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum LimitError {
    #[error("{id}: requires {constraint}, got p-q = {drift}")]
    DriftConstraint { id: LimitTheoremId, constraint: &'static str, drift: f64 },
    #[error("{id}: requires a finite discrete step-size law")]
    RequiresFy { id: LimitTheoremId },
    #[error("{id}: states almost-sure or moment convergence only; no mixture law attached")]
    NoMixtureLaw { id: LimitTheoremId },
    #[error("delay probability r must be positive")]
    NoDelay,
}

/// A named scalar attached to a theorem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NamedConstant {
    pub name: &'static str,
    pub value: f64,
}

fn c(name: &'static str, value: f64) -> NamedConstant {
    NamedConstant { name, value }
}

fn require_regime(
    params: &ModelParams,
    id: LimitTheoremId,
    want: DiffusionRegime,
    constraint: &'static str,
) -> Result<(), LimitError> {
    if classify(params) == want {
        Ok(())
    } else {
        Err(LimitError::DriftConstraint { id, constraint, drift: params.drift() })
    }
}

/// Exact limit constants of the theorem, as closed forms in (p, q, r).
pub fn limit_constants(
    params: &ModelParams,
    id: LimitTheoremId,
) -> Result<Vec<NamedConstant>, LimitError> {
    let d = params.drift();
    let s = params.nonzero_prob();
    let r = params.r();
    let (p, q) = (params.p(), params.q());
    Ok(match id {
        LimitTheoremId::T41a => {
            require_regime(params, id, DiffusionRegime::Diffusive, "p - q < 1/2")?;
            let v = s / (1.0 - 2.0 * d);
            vec![
                c("gaussian_variance", v),
                c("gaussian_weight", s),
                c("atom_weight", r),
                c("second_moment", s * v),
            ]
        }
        LimitTheoremId::T41b => {
            require_regime(params, id, DiffusionRegime::Critical, "p - q = 1/2")?;
            vec![
                c("gaussian_variance", s),
                c("gaussian_weight", s),
                c("atom_weight", r),
                c("second_moment", s * s),
            ]
        }
        LimitTheoremId::T41c => {
            require_regime(params, id, DiffusionRegime::Superdiffusive, "p - q > 1/2")?;
            let mean = d / gamma(1.0 + d);
            let second = s / ((2.0 * d - 1.0) * gamma(2.0 * d));
            vec![
                c("mean_L", mean),
                c("second_moment_L", second),
                c("variance_L", second - mean * mean),
            ]
        }
        LimitTheoremId::T43 => {
            require_regime(params, id, DiffusionRegime::Diffusive, "p - q < 1/2")?;
            vec![
                c("variance_scale", s / (1.0 - 2.0 * d)),
                c("variance_scale_alt", 1.0 / (1.0 - 2.0 * d)),
            ]
        }
        LimitTheoremId::T43critical => {
            require_regime(params, id, DiffusionRegime::Critical, "p - q = 1/2")?;
            vec![c("variance_scale", s)]
        }
        LimitTheoremId::T52 => vec![
            c("atom", d),
            c("mean", d * d),
            c("variance", d * d * (s - d * d)),
        ],
        LimitTheoremId::T53a => vec![
            c("norm_variance", s - d * d),
            c("gaussian_weight", s),
            c("atom_weight", r),
        ],
        LimitTheoremId::T61a => {
            let mean = d * d * (1.0 + d) / 2.0;
            let var = d * d / 4.0
                * (s * (1.0 + 3.0 * p - q) - d * d * (1.0 + d) * (1.0 + d));
            vec![
                c("atom_outer", d),
                c("atom_inner", d / 2.0),
                c("mean", mean),
                c("variance", var),
            ]
        }
        LimitTheoremId::T62a => vec![
            c("variance_same_pair", s - d * d),
            c("variance_delayed_pair", s / 2.0 - (d / 2.0) * (d / 2.0)),
            c("variance_mixed_pair", s),
        ],
        LimitTheoremId::T72 => {
            if r <= 0.0 {
                return Err(LimitError::NoDelay);
            }
            vec![
                c("mean_tau", 1.0 / r),
                c("mean_s_tau", d / (1.0 - d)),
                c("p_tau_1", r),
            ]
        }
        LimitTheoremId::T81 => {
            let dd = 2.0 + q - p;
            vec![
                c("atom", d / dd),
                c("mean", d * d / dd),
                c("variance", d * d / (dd * dd) * (s - d * d)),
            ]
        }
        LimitTheoremId::T82 => {
            let dd = 2.0 + q - p;
            vec![
                c("sigma_t_squared", sigma_t_squared(params)),
                c("gaussian_weight", s),
                c("atom_weight", r),
                c("mean_slope", d / dd),
                c("mean_intercept", 4.0 * (1.0 - d) / (dd * dd)),
            ]
        }
    })
}

/// Mixture limit law of the theorem, where one exists. `fy` is required for
/// the multiplier-walk statements T43 / T43critical.
pub fn limit_law(
    params: &ModelParams,
    id: LimitTheoremId,
    fy: Option<&FyTable>,
) -> Result<MixtureLaw, LimitError> {
    let d = params.drift();
    let s = params.nonzero_prob();
    let r = params.r();
    let (p, q) = (params.p(), params.q());
    let gaussian = |weight: f64, variance: f64| Component {
        weight,
        kind: ComponentKind::Gaussian { mean: 0.0, variance },
    };
    let atom = |weight: f64, location: f64| Component {
        weight,
        kind: ComponentKind::PointMass { location },
    };
    let components = match id {
        LimitTheoremId::T41a => {
            require_regime(params, id, DiffusionRegime::Diffusive, "p - q < 1/2")?;
            vec![gaussian(s, s / (1.0 - 2.0 * d)), atom(r, 0.0)]
        }
        LimitTheoremId::T41b => {
            require_regime(params, id, DiffusionRegime::Critical, "p - q = 1/2")?;
            vec![gaussian(s, s), atom(r, 0.0)]
        }
        LimitTheoremId::T43 => {
            require_regime(params, id, DiffusionRegime::Diffusive, "p - q < 1/2")?;
            let fy = fy.ok_or(LimitError::RequiresFy { id })?;
            return Ok(t43_law(params, fy, None));
        }
        LimitTheoremId::T43critical => {
            require_regime(params, id, DiffusionRegime::Critical, "p - q = 1/2")?;
            let fy = fy.ok_or(LimitError::RequiresFy { id })?;
            return Ok(scaled_mixture(params, fy, s));
        }
        LimitTheoremId::T52 => vec![atom(p, d), atom(r, 0.0), atom(q, -d)],
        LimitTheoremId::T53a => vec![gaussian(s, 1.0), atom(r, 0.0)],
        LimitTheoremId::T61a => vec![
            atom(p * p, d),
            atom(p * r, d / 2.0),
            atom(p * q + q * q + r, 0.0),
            atom(q * r, -d / 2.0),
            atom(p * q, -d),
        ],
        LimitTheoremId::T62a => vec![
            gaussian(p * s, s - d * d),
            gaussian(r * s, s / 2.0 - (d / 2.0) * (d / 2.0)),
            gaussian(q * s, s),
            atom(r, 0.0),
        ],
        LimitTheoremId::T81 => {
            let dd = 2.0 + q - p;
            vec![atom(p, d / dd), atom(r, 0.0), atom(q, -d / dd)]
        }
        LimitTheoremId::T82 => vec![gaussian(s, sigma_t_squared(params)), atom(r, 0.0)],
        LimitTheoremId::T41c | LimitTheoremId::T72 => {
            return Err(LimitError::NoMixtureLaw { id });
        }
    };
    Ok(MixtureLaw::new(components).expect("theorem mixtures are normalized by construction"))
}

/// The T43 mixture: Σ_{t≠0} (p+q)·P(Y=t)·N(0, v t²) plus an atom at zero of
/// weight (p+q)·P(Y=0) + r.
///
/// The variance scale v defaults to (p+q)/(1-2(p-q)), the limit of
/// E(S̃_n²)/n along the fixed-start walk; the alternative printed constant
/// 1/(1-2(p-q)) is reported alongside by the verification catalog.
pub fn t43_law(params: &ModelParams, fy: &FyTable, variance_scale: Option<f64>) -> MixtureLaw {
    let d = params.drift();
    let v = variance_scale.unwrap_or(params.nonzero_prob() / (1.0 - 2.0 * d));
    scaled_mixture(params, fy, v)
}

fn scaled_mixture(params: &ModelParams, fy: &FyTable, v: f64) -> MixtureLaw {
    let s = params.nonzero_prob();
    let r = params.r();
    let mut components = Vec::new();
    let mut atom_weight = r;
    for &(t, w) in fy.entries() {
        if w == 0.0 {
            continue;
        }
        if t == 0.0 {
            atom_weight += s * w;
        } else {
            components.push(Component {
                weight: s * w,
                kind: ComponentKind::Gaussian { mean: 0.0, variance: v * t * t },
            });
        }
    }
    components.push(Component { weight: atom_weight, kind: ComponentKind::PointMass { location: 0.0 } });
    MixtureLaw::new(components).expect("scaled mixtures are normalized by construction")
}

/// Linear-variance coefficient σ_T² of the first-and-last walk started at +1,
/// assembled from the intermediate moment chain:
///
/// 1. the step-mean fixed line E(X_n) → A = (p-q)/(2+q-p) with geometric
///    corrections, giving E(T_n) ≈ A·n + B;
/// 2. the mixed-moment equation E(T_{n+1}X_{n+1}) = (p-q)/2 · (E(T_n) +
///    E(T_n X_n)) + (p+q), an affine-forced first-order equation whose limit
///    line M·n + C comes from the difference-equation solver;
/// 3. the telescoped second moment minus the squared mean:
///    σ_T² = M + 2C - (p+q) - 2AB.
pub fn sigma_t_squared(params: &ModelParams) -> f64 {
    let d = params.drift();
    let s = params.nonzero_prob();
    let big_d = 2.0 - d;
    let lambda = d / 2.0;
    let a = d / big_d; // fixed point of e' = λ(1 + e)
    let b = (1.0 - a) / (1.0 - lambda); // Σ_k (E(X_k) - A) for X_1 = 1
    let beta = lambda * a;
    let intercept = lambda * b + s;
    let (m, cc) = affine_fixed_line(lambda, beta, intercept)
        .expect("|p-q|/2 < 1/2 for interior parameters");
    m + 2.0 * cc - s - 2.0 * a * b
}

//! Exact finite-n moments, normalizer asymptotics, difference-equation
//! machinery, and the limit-law catalog.

pub mod diffeq;
pub mod kahan;
pub mod last_step;
pub mod limits;
pub mod martingale;
pub mod mixture;
pub mod moments;
pub mod special;

pub use diffeq::{DiffEqError, DiffEqSpec, Forcing};
pub use last_step::{last_step_formulas, LastStepFormulas};
pub use limits::{limit_constants, limit_law, sigma_t_squared, t43_law, LimitError, LimitTheoremId, NamedConstant};
pub use martingale::{classify, martingale_weight, nu_asymptote, nu_exact, DiffusionRegime};
pub use mixture::{Component, ComponentKind, MixtureError, MixtureLaw};
pub use moments::{exact_moments, full_propagate_nonzero_mass, MomentError, MomentSeries};

//! Normalized functionals of one walk, evaluated at the horizon (or at
//! absorption for the τ statistics).

use serde::Serialize;

use crate::params::ModelParams;

/// What the engine reads off a finished (possibly multiplier-scaled) walk.
#[derive(Debug, Clone, Copy)]
pub struct WalkReading {
    pub n: u64,
    /// S_n, after any multiplier scaling.
    pub sum: f64,
    /// First step (after scaling).
    pub x1: f64,
    /// Second step (after scaling); 0 when n = 1.
    pub x2: f64,
    /// Index of the first zero step, with the partial sum there.
    pub first_zero: Option<(u64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Functional {
    /// S_n / n.
    SnOverN,
    /// S_n / √n.
    SnOverSqrtN,
    /// S_n / √(n ln n).
    SnOverSqrtNLogN,
    /// S_n / n^{p-q}.
    SnOverNPow,
    /// (S_n - n(p-q)X_1) / √(n(p+q-(p-q)²)).
    CenteredFirstStep,
    /// (S_n - n(p-q)(X_1+X_2)/2) / √n.
    CenteredFirstTwo,
    /// (S_n - n(p-q)X_1/(2+q-p)) / √n.
    CenteredFirstLast,
    /// Absorption index τ; censored replicas yield no value.
    Tau,
    /// Partial sum at absorption S_τ; censored replicas yield no value.
    STau,
}

impl Functional {
    /// True for the two absorption statistics.
    pub fn is_absorption(&self) -> bool {
        matches!(self, Functional::Tau | Functional::STau)
    }

    /// Evaluate on a finished walk. `None` means the replica is censored
    /// (absorption requested but not reached within the horizon).
    pub fn evaluate(&self, reading: &WalkReading, params: &ModelParams) -> Option<f64> {
        let n = reading.n as f64;
        let d = params.drift();
        Some(match self {
            Functional::SnOverN => reading.sum / n,
            Functional::SnOverSqrtN => reading.sum / n.sqrt(),
            Functional::SnOverSqrtNLogN => reading.sum / (n * n.ln()).sqrt(),
            Functional::SnOverNPow => reading.sum / n.powf(d),
            Functional::CenteredFirstStep => {
                let scale = (n * (params.nonzero_prob() - d * d)).sqrt();
                (reading.sum - n * d * reading.x1) / scale
            }
            Functional::CenteredFirstTwo => {
                (reading.sum - n * d * (reading.x1 + reading.x2) / 2.0) / n.sqrt()
            }
            Functional::CenteredFirstLast => {
                let dd = 2.0 + params.q() - params.p();
                (reading.sum - n * d * reading.x1 / dd) / n.sqrt()
            }
            Functional::Tau => reading.first_zero?.0 as f64,
            Functional::STau => reading.first_zero?.1,
        })
    }
}

impl std::fmt::Display for Functional {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Functional::SnOverN => "sn-over-n",
            Functional::SnOverSqrtN => "sn-over-sqrt-n",
            Functional::SnOverSqrtNLogN => "sn-over-sqrt-n-log-n",
            Functional::SnOverNPow => "sn-over-n-pow",
            Functional::CenteredFirstStep => "centered-first-step",
            Functional::CenteredFirstTwo => "centered-first-two",
            Functional::CenteredFirstLast => "centered-first-last",
            Functional::Tau => "tau",
            Functional::STau => "s-tau",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Functional {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sn-over-n" => Ok(Functional::SnOverN),
            "sn-over-sqrt-n" => Ok(Functional::SnOverSqrtN),
            "sn-over-sqrt-n-log-n" => Ok(Functional::SnOverSqrtNLogN),
            "sn-over-n-pow" => Ok(Functional::SnOverNPow),
            "centered-first-step" => Ok(Functional::CenteredFirstStep),
            "centered-first-two" => Ok(Functional::CenteredFirstTwo),
            "centered-first-last" => Ok(Functional::CenteredFirstLast),
            "tau" => Ok(Functional::Tau),
            "s-tau" => Ok(Functional::STau),
            _ => Err(format!("unknown functional `{s}`")),
        }
    }
}

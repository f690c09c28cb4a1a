//! First-order linear difference equations x_{n+1} = a x_n + b_n: exact
//! iteration and the closed asymptotics used by the moment chains.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DiffEqError {
    #[error("asymptotic form requires |a| < 1, got a = {0}")]
    NotContracting(f64),
    #[error("power forcing requires exponent > -1, got {0}")]
    BadExponent(f64),
}

/// Forcing sequence b_n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Forcing {
    Constant(f64),
    /// b_n = scale * n^exponent with exponent > -1.
    Power { scale: f64, exponent: f64 },
}

impl Forcing {
    fn at(&self, n: f64) -> f64 {
        match *self {
            Forcing::Constant(b) => b,
            Forcing::Power { scale, exponent } => scale * n.powf(exponent),
        }
    }
}

/// The equation x_{n+1} = a x_n + b_n for n ≥ 1 with x_1 given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffEqSpec {
    pub coeff: f64,
    pub forcing: Forcing,
    pub x1: f64,
}

impl DiffEqSpec {
    pub fn new(coeff: f64, forcing: Forcing, x1: f64) -> Result<Self, DiffEqError> {
        if let Forcing::Power { exponent, .. } = forcing {
            if exponent <= -1.0 {
                return Err(DiffEqError::BadExponent(exponent));
            }
        }
        Ok(Self { coeff, forcing, x1 })
    }

    /// x_n by direct iteration, equivalent to the closed sum
    /// x_n = a^{n-1} x_1 + Σ_{ν=0}^{n-2} a^ν b_{n-1-ν}. Valid for any a.
    pub fn exact(&self, n: u64) -> f64 {
        assert!(n >= 1);
        let mut x = self.x1;
        for k in 1..n {
            x = self.coeff * x + self.forcing.at(k as f64);
        }
        x
    }

    /// Large-n form: b/(1-a) for constant forcing, and
    /// b_{n-1}/(1-a) - γ a b_{n-1} / (n (1-a)²) for b_n = b n^γ.
    pub fn asymptotic(&self, n: u64) -> Result<f64, DiffEqError> {
        assert!(n >= 1);
        let a = self.coeff;
        if a.abs() >= 1.0 {
            return Err(DiffEqError::NotContracting(a));
        }
        let one_minus = 1.0 - a;
        Ok(match self.forcing {
            Forcing::Constant(b) => b / one_minus,
            Forcing::Power { exponent, .. } => {
                let b_prev = self.forcing.at(n as f64 - 1.0);
                b_prev / one_minus - exponent * a * b_prev / (n as f64 * one_minus * one_minus)
            }
        })
    }
}

/// Limit line of x_{n+1} = a x_n + (slope·n + intercept): the iterates
/// approach M n + C with M = slope/(1-a), C = intercept/(1-a) - slope/(1-a)².
/// This is the affine-forcing specialization of the asymptotic form above and
/// is what the first-and-last moment chain telescopes through.
pub fn affine_fixed_line(a: f64, slope: f64, intercept: f64) -> Result<(f64, f64), DiffEqError> {
    if a.abs() >= 1.0 {
        return Err(DiffEqError::NotContracting(a));
    }
    let one_minus = 1.0 - a;
    let m = slope / one_minus;
    let c = intercept / one_minus - slope / (one_minus * one_minus);
    Ok((m, c))
}

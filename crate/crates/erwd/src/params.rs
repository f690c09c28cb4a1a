//! Model parameters, initial laws, memory regimes, and the recalled-zero policy.

use serde::Serialize;
use thiserror::Error;

/// Tolerance on `p + q + r = 1`.
pub const PROB_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("probabilities must sum to 1 within {PROB_SUM_TOL}: p+q+r = {0}")]
    SumNotOne(f64),
    #[error("probability out of range [0,1]: {name} = {value}")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("boundary value {name} = {value} requires the boundary opt-in constructor")]
    BoundaryNotAllowed { name: &'static str, value: f64 },
    #[error("finite discrete law is empty")]
    EmptyTable,
    #[error("finite discrete law weights must be nonnegative and sum to 1 within {PROB_SUM_TOL}: sum = {0}")]
    BadTable(f64),
}

/// The step-kernel probability triple: repeat the recalled sign with
/// probability `p`, flip it with probability `q`, emit a zero (delay) with
/// probability `r = 1 - p - q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    p: f64,
    q: f64,
    r: f64,
    /// True when all three probabilities are strictly inside (0,1), the
    /// standing assumption of the model. Boundary values are allowed only
    /// through [`ModelParams::new_boundary`].
    strict_interior: bool,
}

impl ModelParams {
    /// Strict-interior constructor: requires `0 < p,q,r < 1`.
    pub fn new(p: f64, q: f64, r: f64) -> Result<Self, ParamError> {
        let params = Self::new_boundary(p, q, r)?;
        for (name, value) in [("p", p), ("q", q), ("r", r)] {
            if value <= 0.0 || value >= 1.0 {
                return Err(ParamError::BoundaryNotAllowed { name, value });
            }
        }
        Ok(Self { strict_interior: true, ..params })
    }

    /// Boundary opt-in constructor: allows `p`, `q`, `r` to touch 0 or 1
    /// (e.g. `r = 0` reduces to the classical walk, `q = r = 0` is the
    /// deterministic kernel used by tests).
    pub fn new_boundary(p: f64, q: f64, r: f64) -> Result<Self, ParamError> {
        for (name, value) in [("p", p), ("q", q), ("r", r)] {
            if !(0.0..=1.0).contains(&value) || value.is_nan() {
                return Err(ParamError::OutOfRange { name, value });
            }
        }
        let sum = p + q + r;
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(ParamError::SumNotOne(sum));
        }
        Ok(Self { p, q, r, strict_interior: false })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// `p - q`, the factor in the conditional mean of a step given the memory.
    pub fn drift(&self) -> f64 {
        self.p - self.q
    }

    /// `p + q`, the probability that a step recalled from a nonzero memory
    /// entry is itself nonzero.
    pub fn nonzero_prob(&self) -> f64 {
        self.p + self.q
    }

    pub fn strict_interior(&self) -> bool {
        self.strict_interior
    }
}

/// Law of the first step. `Fixed` variants produce the walk conventionally
/// written `T_n`; `ThreePoint` draws the first step from `(+1, -1, 0)` with
/// probabilities `(p, q, r)` and produces the walk written `S_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InitialLaw {
    PlusOne,
    MinusOne,
    Zero,
    ThreePoint,
}

impl InitialLaw {
    /// Support and probabilities of the first step.
    pub fn weights(&self, params: &ModelParams) -> [(i8, f64); 3] {
        match self {
            InitialLaw::PlusOne => [(1, 1.0), (-1, 0.0), (0, 0.0)],
            InitialLaw::MinusOne => [(1, 0.0), (-1, 1.0), (0, 0.0)],
            InitialLaw::Zero => [(1, 0.0), (-1, 0.0), (0, 1.0)],
            InitialLaw::ThreePoint => [(1, params.p()), (-1, params.q()), (0, params.r())],
        }
    }

    pub fn mean(&self, params: &ModelParams) -> f64 {
        match self {
            InitialLaw::PlusOne => 1.0,
            InitialLaw::MinusOne => -1.0,
            InitialLaw::Zero => 0.0,
            InitialLaw::ThreePoint => params.drift(),
        }
    }

    pub fn second_moment(&self, params: &ModelParams) -> f64 {
        match self {
            InitialLaw::PlusOne | InitialLaw::MinusOne => 1.0,
            InitialLaw::Zero => 0.0,
            InitialLaw::ThreePoint => params.nonzero_prob(),
        }
    }
}

impl std::fmt::Display for InitialLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            InitialLaw::PlusOne => "plus-one",
            InitialLaw::MinusOne => "minus-one",
            InitialLaw::Zero => "zero",
            InitialLaw::ThreePoint => "three-point",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for InitialLaw {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plus-one" | "+1" => Ok(InitialLaw::PlusOne),
            "minus-one" | "-1" => Ok(InitialLaw::MinusOne),
            "zero" | "0" => Ok(InitialLaw::Zero),
            "three-point" => Ok(InitialLaw::ThreePoint),
            _ => Err(format!("unknown initial law `{s}`")),
        }
    }
}

/// Which past steps the walker can recall when drawing step `n + 1`.
///
/// The recalled index set over steps `1..=n` is `{1..n}`, `{1}`, `{1,2}`
/// (just `{1}` while only one step exists), `{n}`, and `{1,n}` respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MemoryRegime {
    Full,
    FirstStep,
    FirstTwo,
    LastStep,
    FirstAndLast,
}

impl MemoryRegime {
    pub const ALL: [MemoryRegime; 5] = [
        MemoryRegime::Full,
        MemoryRegime::FirstStep,
        MemoryRegime::FirstTwo,
        MemoryRegime::LastStep,
        MemoryRegime::FirstAndLast,
    ];

    /// Recalled indices (0-based) given `n` steps already taken.
    pub fn memory_indices(&self, n: usize) -> Vec<usize> {
        assert!(n >= 1, "memory is defined only after the first step");
        match self {
            MemoryRegime::Full => (0..n).collect(),
            MemoryRegime::FirstStep => vec![0],
            MemoryRegime::FirstTwo => {
                if n == 1 {
                    vec![0]
                } else {
                    vec![0, 1]
                }
            }
            MemoryRegime::LastStep => vec![n - 1],
            MemoryRegime::FirstAndLast => {
                if n == 1 {
                    vec![0]
                } else {
                    vec![0, n - 1]
                }
            }
        }
    }

    /// Policy under which each regime's published formulas hold exactly; see
    /// the zero-recall discussion on [`ZeroRecallPolicy`].
    pub fn default_policy(&self) -> ZeroRecallPolicy {
        match self {
            MemoryRegime::Full | MemoryRegime::FirstAndLast => ZeroRecallPolicy::SymmetricResample,
            MemoryRegime::FirstStep | MemoryRegime::FirstTwo | MemoryRegime::LastStep => {
                ZeroRecallPolicy::Propagate
            }
        }
    }
}

impl std::fmt::Display for MemoryRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MemoryRegime::Full => "full",
            MemoryRegime::FirstStep => "first-step",
            MemoryRegime::FirstTwo => "first-two",
            MemoryRegime::LastStep => "last-step",
            MemoryRegime::FirstAndLast => "first-and-last",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for MemoryRegime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(MemoryRegime::Full),
            "first-step" => Ok(MemoryRegime::FirstStep),
            "first-two" => Ok(MemoryRegime::FirstTwo),
            "last-step" => Ok(MemoryRegime::LastStep),
            "first-and-last" => Ok(MemoryRegime::FirstAndLast),
            _ => Err(format!("unknown memory regime `{s}`")),
        }
    }
}

/// What `±X_K` means when the recalled step `X_K` is zero. The kernel
/// definition leaves this case open, and the two readings are not
/// equivalent:
///
/// * `Propagate` takes the sign algebra literally: `±0 = 0`, so a recalled
///   delay forces a delay.
/// * `SymmetricResample` keeps the second moment of a step at `p + q`
///   regardless of the memory content: a recalled zero yields `+1` or `-1`
///   with probability `(p+q)/2` each, `0` with probability `r`.
///
/// Both give the same conditional step mean `(p-q) * mean(memory)`. They
/// differ only when a remembered step is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ZeroRecallPolicy {
    Propagate,
    SymmetricResample,
}

impl ZeroRecallPolicy {
    pub const ALL: [ZeroRecallPolicy; 2] =
        [ZeroRecallPolicy::Propagate, ZeroRecallPolicy::SymmetricResample];
}

impl std::fmt::Display for ZeroRecallPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ZeroRecallPolicy::Propagate => "propagate",
            ZeroRecallPolicy::SymmetricResample => "symmetric-resample",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for ZeroRecallPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "propagate" => Ok(ZeroRecallPolicy::Propagate),
            "symmetric-resample" => Ok(ZeroRecallPolicy::SymmetricResample),
            _ => Err(format!("unknown zero-recall policy `{s}`")),
        }
    }
}

/// A finite discrete law, used for the independent step-size multiplier `Y`.
/// Restricting to a finite table keeps every mixture limit a finite sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FyTable {
    entries: Vec<(f64, f64)>,
}

impl FyTable {
    pub fn new(entries: Vec<(f64, f64)>) -> Result<Self, ParamError> {
        if entries.is_empty() {
            return Err(ParamError::EmptyTable);
        }
        let mut sum = 0.0;
        for &(_, w) in &entries {
            if !(0.0..=1.0).contains(&w) || w.is_nan() {
                return Err(ParamError::BadTable(w));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(ParamError::BadTable(sum));
        }
        Ok(Self { entries })
    }

    /// Point mass at `value`.
    pub fn delta(value: f64) -> Self {
        Self { entries: vec![(value, 1.0)] }
    }

    /// Uniform law over the given support.
    pub fn uniform(values: &[f64]) -> Result<Self, ParamError> {
        if values.is_empty() {
            return Err(ParamError::EmptyTable);
        }
        let w = 1.0 / values.len() as f64;
        let mut entries: Vec<(f64, f64)> = values.iter().map(|&v| (v, w)).collect();
        // make the weights sum to exactly 1.0
        let excess: f64 = entries.iter().map(|e| e.1).sum::<f64>() - 1.0;
        entries.last_mut().unwrap().1 -= excess;
        Ok(Self { entries })
    }

    /// The law of the first step under the three-point convention:
    /// `+1` w.p. `p`, `-1` w.p. `q`, `0` w.p. `r`.
    ///
    /// Composing this with a base walk started at a fixed `+1` realizes the
    /// random-start walk in the form the limit theorems assume: the `-1`
    /// branch is the mirrored walk and the `0` branch is the zero process.
    pub fn three_point(params: &ModelParams) -> Self {
        Self { entries: vec![(1.0, params.p()), (-1.0, params.q()), (0.0, params.r())] }
    }

    /// Law of the product `Y * Z` of independent draws from `self` and `other`.
    pub fn compose(&self, other: &FyTable) -> Self {
        let mut acc: Vec<(f64, f64)> = Vec::new();
        for &(y, wy) in &self.entries {
            for &(z, wz) in &other.entries {
                let v = y * z;
                let w = wy * wz;
                if w == 0.0 {
                    continue;
                }
                match acc.iter_mut().find(|(u, _)| *u == v) {
                    Some(entry) => entry.1 += w,
                    None => acc.push((v, w)),
                }
            }
        }
        Self { entries: acc }
    }

    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    /// Inverse-CDF draw from a uniform in `[0,1)`, in table order.
    pub fn sample(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        for &(v, w) in &self.entries {
            acc += w;
            if u < acc {
                return v;
            }
        }
        self.entries.last().unwrap().0
    }

    pub fn mean(&self) -> f64 {
        self.entries.iter().map(|&(v, w)| v * w).sum()
    }

    pub fn second_moment(&self) -> f64 {
        self.entries.iter().map(|&(v, w)| v * v * w).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_constructor_rejects_boundary() {
        assert!(ModelParams::new(0.5, 0.3, 0.2).is_ok());
        assert_eq!(
            ModelParams::new(0.5, 0.5, 0.0),
            Err(ParamError::BoundaryNotAllowed { name: "r", value: 0.0 })
        );
        assert!(ModelParams::new_boundary(0.5, 0.5, 0.0).is_ok());
        assert!(ModelParams::new_boundary(1.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn sum_must_be_one() {
        assert_eq!(ModelParams::new(0.5, 0.3, 0.3), Err(ParamError::SumNotOne(1.1)));
        assert!(ModelParams::new(0.5, 0.3, 0.2 + 5e-13).is_ok());
    }

    #[test]
    fn memory_indices_per_regime() {
        assert_eq!(MemoryRegime::Full.memory_indices(4), vec![0, 1, 2, 3]);
        assert_eq!(MemoryRegime::FirstStep.memory_indices(4), vec![0]);
        assert_eq!(MemoryRegime::FirstTwo.memory_indices(1), vec![0]);
        assert_eq!(MemoryRegime::FirstTwo.memory_indices(4), vec![0, 1]);
        assert_eq!(MemoryRegime::LastStep.memory_indices(4), vec![3]);
        assert_eq!(MemoryRegime::FirstAndLast.memory_indices(1), vec![0]);
        assert_eq!(MemoryRegime::FirstAndLast.memory_indices(4), vec![0, 3]);
    }

    #[test]
    fn three_point_composition_matches_initial_sign_mixture() {
        let params = ModelParams::new(0.5, 0.3, 0.2).unwrap();
        let fy = FyTable::uniform(&[-2.0, 0.0, 1.0]).unwrap();
        let w = fy.compose(&FyTable::three_point(&params));
        // P(W = 0) = P(Y=0) + P(Y!=0) r
        let w0: f64 = w
            .entries()
            .iter()
            .filter(|(v, _)| *v == 0.0)
            .map(|(_, p)| p)
            .sum();
        let expect = 1.0 / 3.0 + (2.0 / 3.0) * 0.2;
        assert!((w0 - expect).abs() < 1e-15);
        let total: f64 = w.entries().iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fy_sampling_respects_table_order() {
        let fy = FyTable::new(vec![(2.0, 0.25), (-1.0, 0.5), (0.0, 0.25)]).unwrap();
        assert_eq!(fy.sample(0.0), 2.0);
        assert_eq!(fy.sample(0.2499), 2.0);
        assert_eq!(fy.sample(0.25), -1.0);
        assert_eq!(fy.sample(0.74), -1.0);
        assert_eq!(fy.sample(0.999), 0.0);
        assert!((fy.mean() - (0.5 - 0.5)).abs() < 1e-15);
    }
}

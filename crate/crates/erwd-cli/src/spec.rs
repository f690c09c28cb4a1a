//! Resolution of a run specification from defaults, an optional key=value
//! config file, and command-line flags (flags win). The resolved spec is
//! echoed into every output so any run can be reproduced from its artifacts.

use std::collections::BTreeMap;
use std::path::Path;

use erwd::analytic::LimitTheoremId;
use erwd::mc::Functional;
use erwd::params::{FyTable, InitialLaw, MemoryRegime, ModelParams, ZeroRecallPolicy};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    JsonLines,
}

impl std::fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::JsonLines => "json-lines",
        })
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json-lines" => Ok(OutputFormat::JsonLines),
            _ => Err(format!("unknown output format `{s}` (csv | json-lines)")),
        }
    }
}

/// Raw, partially-specified inputs prior to resolution.
#[derive(Debug, Default, Clone)]
pub struct RawSpec {
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub r: Option<f64>,
    pub boundary_ok: bool,
    pub regime: Option<MemoryRegime>,
    pub policy: Option<ZeroRecallPolicy>,
    pub init: Option<InitialLaw>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub seed: Option<u64>,
    pub functional: Option<Functional>,
    pub theorem: Option<LimitTheoremId>,
    pub fy: Option<String>,
    pub format: Option<OutputFormat>,
    pub suite: Option<String>,
}

impl RawSpec {
    /// Fill any unset field from the config file values.
    pub fn merge_file(&mut self, file: &RawSpec) {
        self.p = self.p.or(file.p);
        self.q = self.q.or(file.q);
        self.r = self.r.or(file.r);
        self.boundary_ok |= file.boundary_ok;
        self.regime = self.regime.or(file.regime);
        self.policy = self.policy.or(file.policy);
        self.init = self.init.or(file.init);
        self.n = self.n.or(file.n);
        self.m = self.m.or(file.m);
        self.seed = self.seed.or(file.seed);
        self.functional = self.functional.or(file.functional);
        self.theorem = self.theorem.or(file.theorem);
        self.fy = self.fy.clone().or_else(|| file.fy.clone());
        self.format = self.format.or(file.format);
        self.suite = self.suite.clone().or_else(|| file.suite.clone());
    }
}

/// Fully resolved run specification.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub subcommand: &'static str,
    pub params: ModelParams,
    pub boundary_ok: bool,
    pub regime: MemoryRegime,
    pub policy: ZeroRecallPolicy,
    pub init: InitialLaw,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub functional: Option<Functional>,
    pub theorem: Option<LimitTheoremId>,
    pub fy: Option<FyTable>,
    pub format: OutputFormat,
    pub suite: Option<String>,
}

impl RunSpec {
    pub fn resolve(subcommand: &'static str, raw: RawSpec) -> Result<Self, CliError> {
        let p = raw.p.unwrap_or(0.5);
        let q = raw.q.unwrap_or(0.3);
        let r = raw.r.unwrap_or_else(|| 1.0 - p - q);
        let params = if raw.boundary_ok {
            ModelParams::new_boundary(p, q, r)
        } else {
            ModelParams::new(p, q, r)
        }
        .map_err(|e| CliError::Usage(e.to_string()))?;
        let regime = raw.regime.unwrap_or(MemoryRegime::Full);
        let policy = raw.policy.unwrap_or_else(|| regime.default_policy());
        let fy = match &raw.fy {
            Some(text) => Some(parse_fy(text)?),
            None => None,
        };
        // a multiplier rides on a +1-start base walk
        let init = match (&fy, raw.init) {
            (Some(_), Some(init)) if init != InitialLaw::PlusOne => {
                return Err(CliError::Usage(format!(
                    "--fy requires the base walk to start at +1, got --init {init}"
                )));
            }
            (Some(_), _) => InitialLaw::PlusOne,
            (None, init) => init.unwrap_or(InitialLaw::ThreePoint),
        };
        Ok(Self {
            subcommand,
            params,
            boundary_ok: raw.boundary_ok,
            regime,
            policy,
            init,
            n: raw.n.unwrap_or(1000),
            m: raw.m.unwrap_or(1),
            seed: raw.seed.unwrap_or(0),
            functional: raw.functional,
            theorem: raw.theorem,
            fy,
            format: raw.format.unwrap_or(OutputFormat::Csv),
            suite: raw.suite,
        })
    }

    /// The resolved spec as ordered key=value pairs; re-parseable as a config
    /// file, so any output reproduces its run.
    pub fn echo_pairs(&self) -> Vec<(String, String)> {
        let mut pairs = vec![
            ("subcommand".into(), self.subcommand.to_string()),
            ("p".into(), self.params.p().to_string()),
            ("q".into(), self.params.q().to_string()),
            ("r".into(), self.params.r().to_string()),
            ("boundary-ok".into(), self.boundary_ok.to_string()),
            ("regime".into(), self.regime.to_string()),
            ("policy".into(), self.policy.to_string()),
            ("init".into(), self.init.to_string()),
            ("n".into(), self.n.to_string()),
            ("m".into(), self.m.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("format".into(), self.format.to_string()),
        ];
        if let Some(f) = self.functional {
            pairs.push(("functional".into(), f.to_string()));
        }
        if let Some(t) = self.theorem {
            pairs.push(("theorem".into(), t.to_string()));
        }
        if let Some(fy) = &self.fy {
            let text: Vec<String> =
                fy.entries().iter().map(|(v, w)| format!("{v}:{w}")).collect();
            pairs.push(("fy".into(), text.join(",")));
        }
        if let Some(s) = &self.suite {
            pairs.push(("suite".into(), s.clone()));
        }
        pairs
    }

    pub fn echo_config_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.echo_pairs() {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }

    pub fn echo_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (k, v) in self.echo_pairs() {
            map.insert(k, serde_json::Value::String(v));
        }
        serde_json::Value::Object(map)
    }
}

/// Parse `value:weight,value:weight`, weights as decimals or fractions
/// (`1/3`). Weights must sum to 1 within 1e-9 and are renormalized exactly.
pub fn parse_fy(text: &str) -> Result<FyTable, CliError> {
    let mut entries = Vec::new();
    for piece in text.split(',') {
        let (v, w) = piece
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("bad fy entry `{piece}`: want value:weight")))?;
        let value: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad fy value `{v}`")))?;
        let weight = parse_weight(w.trim())?;
        entries.push((value, weight));
    }
    let total: f64 = entries.iter().map(|(_, w)| w).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(CliError::Usage(format!("fy weights sum to {total}, want 1")));
    }
    for entry in entries.iter_mut() {
        entry.1 /= total;
    }
    FyTable::new(entries).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_weight(text: &str) -> Result<f64, CliError> {
    if let Some((num, den)) = text.split_once('/') {
        let num: f64 = num
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad fy weight `{text}`")))?;
        let den: f64 = den
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad fy weight `{text}`")))?;
        if den == 0.0 {
            return Err(CliError::Usage("fy weight divides by zero".into()));
        }
        Ok(num / den)
    } else {
        text.parse()
            .map_err(|_| CliError::Usage(format!("bad fy weight `{text}`")))
    }
}

/// Parse a `key = value` config file (# comments allowed).
pub fn parse_config_file(path: &Path) -> Result<RawSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<RawSpec, CliError> {
    let mut map: BTreeMap<String, String> = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: want key = value", lineno + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    let mut raw = RawSpec::default();
    let usage = |key: &str, v: &str, what: &str| {
        CliError::Usage(format!("config key {key}: bad {what} `{v}`"))
    };
    for (key, value) in &map {
        match key.as_str() {
            "subcommand" => {} // informational echo; the invoked subcommand governs
            "p" => raw.p = Some(value.parse().map_err(|_| usage(key, value, "number"))?),
            "q" => raw.q = Some(value.parse().map_err(|_| usage(key, value, "number"))?),
            "r" => raw.r = Some(value.parse().map_err(|_| usage(key, value, "number"))?),
            "boundary-ok" => {
                raw.boundary_ok =
                    value.parse().map_err(|_| usage(key, value, "bool"))?
            }
            "regime" => {
                raw.regime = Some(value.parse().map_err(|e: String| CliError::Usage(e))?)
            }
            "policy" => {
                raw.policy = Some(value.parse().map_err(|e: String| CliError::Usage(e))?)
            }
            "init" => raw.init = Some(value.parse().map_err(|e: String| CliError::Usage(e))?),
            "n" => raw.n = Some(value.parse().map_err(|_| usage(key, value, "integer"))?),
            "m" => raw.m = Some(value.parse().map_err(|_| usage(key, value, "integer"))?),
            "seed" => raw.seed = Some(value.parse().map_err(|_| usage(key, value, "integer"))?),
            "functional" => {
                raw.functional = Some(value.parse().map_err(|e: String| CliError::Usage(e))?)
            }
            "theorem" => {
                raw.theorem = Some(value.parse().map_err(|e: String| CliError::Usage(e))?)
            }
            "fy" => raw.fy = Some(value.clone()),
            "format" => {
                raw.format = Some(value.parse().map_err(|e: String| CliError::Usage(e))?)
            }
            "suite" => raw.suite = Some(value.clone()),
            other => {
                return Err(CliError::Usage(format!("unknown config key `{other}`")));
            }
        }
    }
    Ok(raw)
}


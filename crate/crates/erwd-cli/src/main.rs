//! Command-line front end: simulate walks, print exact moment tables, dump
//! limit laws, and run the verification catalog.
//!
//! Exit codes: 0 success / all checks pass, 1 statistical check failure,
//! 2 usage error, 3 model-domain constraint violation.

mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use erwd::analytic::{exact_moments, limit_constants, limit_law, LimitError, LimitTheoremId};
use erwd::mc::{run_values, Functional, McConfig};
use erwd::params::{InitialLaw, MemoryRegime, ZeroRecallPolicy};
use erwd::rng::RngStream;
use erwd::verify::{assemble_report, run_acceptance_suite, run_theorem, CatalogError, Overrides};
use erwd::walk::simulate;

use spec::{parse_config_file, OutputFormat, RawSpec, RunSpec};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config, or parameters: exit 2.
    Usage(String),
    /// Valid request outside a model constraint: exit 3.
    Domain(String),
    /// A statistical check failed: exit 1.
    ChecksFailed,
}

impl From<LimitError> for CliError {
    fn from(e: LimitError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        CliError::Domain(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "erwd", about = "Elephant random walks with delays: simulation and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct CommonArgs {
    /// Key=value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Repeat-sign probability.
    #[arg(long)]
    p: Option<f64>,
    /// Flip-sign probability.
    #[arg(long)]
    q: Option<f64>,
    /// Delay probability (defaults to 1 - p - q).
    #[arg(long)]
    r: Option<f64>,
    /// Allow boundary parameter values (0 or 1).
    #[arg(long = "boundary-ok")]
    boundary_ok: bool,
    /// Memory regime: full | first-step | first-two | last-step | first-and-last.
    #[arg(long)]
    regime: Option<MemoryRegime>,
    /// Recalled-zero policy: propagate | symmetric-resample (default: per regime).
    #[arg(long)]
    policy: Option<ZeroRecallPolicy>,
    /// First-step law: plus-one | minus-one | zero | three-point.
    #[arg(long)]
    init: Option<InitialLaw>,
    /// Horizon (walk length).
    #[arg(long)]
    n: Option<usize>,
    /// Replica count.
    #[arg(long)]
    m: Option<usize>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Functional to evaluate per replica (simulate: switches to ensemble output).
    #[arg(long)]
    functional: Option<Functional>,
    /// Step-size multiplier law, value:weight pairs (weights may be fractions).
    #[arg(long, allow_hyphen_values = true)]
    fy: Option<String>,
    /// Output format: csv | json-lines.
    #[arg(long)]
    format: Option<OutputFormat>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the resolved spec as a config file.
    #[arg(long = "emit-config")]
    emit_config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate trajectories, or an ensemble of functional values.
    Simulate(CommonArgs),
    /// Exact per-n moments of the partial sums.
    Moments(CommonArgs),
    /// Limit constants and the mixture limit law of a theorem.
    Limits {
        #[command(flatten)]
        common: CommonArgs,
        /// Theorem id (T41a..T82).
        #[arg(long)]
        theorem: Option<LimitTheoremId>,
    },
    /// Run verification checks; exit 1 if any fails.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Theorem id to check.
        #[arg(long)]
        theorem: Option<LimitTheoremId>,
        /// `acceptance` runs the whole catalog.
        #[arg(long)]
        suite: Option<String>,
        /// Also write the flat CSV of results here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("ERWD_THREADS") {
        if let Ok(k) = threads.parse::<usize>() {
            // affects wall time only; results are replica-addressed
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
    }
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::ChecksFailed) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("domain error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn resolve(
    subcommand: &'static str,
    common: &CommonArgs,
    theorem: Option<LimitTheoremId>,
    suite: Option<String>,
) -> Result<RunSpec, CliError> {
    let mut raw = RawSpec {
        p: common.p,
        q: common.q,
        r: common.r,
        boundary_ok: common.boundary_ok,
        regime: common.regime,
        policy: common.policy,
        init: common.init,
        n: common.n,
        m: common.m,
        seed: common.seed,
        functional: common.functional,
        theorem,
        fy: common.fy.clone(),
        format: common.format,
        suite,
    };
    if let Some(path) = &common.config {
        raw.merge_file(&parse_config_file(path)?);
    }
    RunSpec::resolve(subcommand, raw)
}

fn emit(common: &CommonArgs, spec: &RunSpec, output: String) -> Result<(), CliError> {
    if let Some(path) = &common.emit_config {
        std::fs::write(path, spec.echo_config_text())
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    match &common.out {
        Some(path) => std::fs::write(path, output)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{output}");
            Ok(())
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate(common) => {
            let spec = resolve("simulate", &common, None, None)?;
            let output = cmd_simulate(&spec)?;
            emit(&common, &spec, output)
        }
        Command::Moments(common) => {
            let spec = resolve("moments", &common, None, None)?;
            let output = cmd_moments(&spec)?;
            emit(&common, &spec, output)
        }
        Command::Limits { common, theorem } => {
            let spec = resolve("limits", &common, theorem, None)?;
            let output = cmd_limits(&spec)?;
            emit(&common, &spec, output)
        }
        Command::Verify { common, theorem, suite, csv } => {
            let spec = resolve("verify", &common, theorem, suite)?;
            let (report_json, report_csv, pass) = cmd_verify(&spec, &common)?;
            if let Some(path) = &csv {
                std::fs::write(path, report_csv)
                    .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
            emit(&common, &spec, report_json)?;
            if pass {
                Ok(())
            } else {
                Err(CliError::ChecksFailed)
            }
        }
    }
}

/// Header lines embedding the resolved spec into a CSV output.
fn csv_header(spec: &RunSpec) -> String {
    let mut out = String::new();
    for (k, v) in spec.echo_pairs() {
        out.push_str(&format!("# {k} = {v}\n"));
    }
    out
}

fn cmd_simulate(spec: &RunSpec) -> Result<String, CliError> {
    match spec.functional {
        Some(functional) => {
            let config = McConfig {
                params: spec.params,
                regime: spec.regime,
                policy: spec.policy,
                init: spec.init,
                horizon: spec.n,
                replicas: spec.m,
                seed: spec.seed,
                functional,
                fy: spec.fy.clone(),
            };
            let values = run_values(&config).map_err(|e| CliError::Domain(e.to_string()))?;
            let censored = values.iter().filter(|v| v.is_none()).count();
            let mut out = String::new();
            match spec.format {
                OutputFormat::Csv => {
                    out.push_str(&csv_header(spec));
                    if censored > 0 {
                        out.push_str(&format!("# censored = {censored}\n"));
                    }
                    out.push_str("replica,value\n");
                    for (i, v) in values.iter().enumerate() {
                        if let Some(v) = v {
                            out.push_str(&format!("{i},{v}\n"));
                        }
                    }
                }
                OutputFormat::JsonLines => {
                    out.push_str(&format!(
                        "{}\n",
                        serde_json::json!({"config": spec.echo_json()})
                    ));
                    for (i, v) in values.iter().enumerate() {
                        out.push_str(&format!(
                            "{}\n",
                            serde_json::json!({"replica": i, "value": v})
                        ));
                    }
                }
            }
            Ok(out)
        }
        None => {
            let mut rows = Vec::new();
            for replica in 0..spec.m {
                let t = simulate(
                    &spec.params,
                    spec.regime,
                    spec.policy,
                    spec.init,
                    spec.n,
                    &RngStream::new(spec.seed, replica as u64),
                )
                .map_err(|e| CliError::Domain(e.to_string()))?;
                for (k, (&step, &sum)) in t.steps.iter().zip(&t.sums).enumerate() {
                    rows.push((replica, k + 1, step, sum));
                }
            }
            let mut out = String::new();
            match spec.format {
                OutputFormat::Csv => {
                    out.push_str(&csv_header(spec));
                    out.push_str("replica,n,step,partial_sum\n");
                    for (replica, n, step, sum) in rows {
                        out.push_str(&format!("{replica},{n},{step},{sum}\n"));
                    }
                }
                OutputFormat::JsonLines => {
                    out.push_str(&format!(
                        "{}\n",
                        serde_json::json!({"config": spec.echo_json()})
                    ));
                    for (replica, n, step, sum) in rows {
                        out.push_str(&format!(
                            "{}\n",
                            serde_json::json!({"replica": replica, "n": n, "step": step, "partial_sum": sum})
                        ));
                    }
                }
            }
            Ok(out)
        }
    }
}

fn cmd_moments(spec: &RunSpec) -> Result<String, CliError> {
    let series = exact_moments(&spec.params, spec.regime, spec.policy, spec.init, spec.n)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    let mut out = String::new();
    match spec.format {
        OutputFormat::Csv => {
            out.push_str(&csv_header(spec));
            out.push_str("n,mean,second_moment,variance\n");
            for n in 1..=spec.n {
                out.push_str(&format!(
                    "{n},{},{},{}\n",
                    series.mean(n),
                    series.second_moment(n),
                    series.variance(n)
                ));
            }
        }
        OutputFormat::JsonLines => {
            out.push_str(&format!("{}\n", serde_json::json!({"config": spec.echo_json()})));
            for n in 1..=spec.n {
                out.push_str(&format!(
                    "{}\n",
                    serde_json::json!({
                        "n": n,
                        "mean": series.mean(n),
                        "second_moment": series.second_moment(n),
                        "variance": series.variance(n),
                    })
                ));
            }
        }
    }
    Ok(out)
}

fn cmd_limits(spec: &RunSpec) -> Result<String, CliError> {
    let theorem = spec
        .theorem
        .ok_or_else(|| CliError::Usage("limits requires --theorem".into()))?;
    let constants = limit_constants(&spec.params, theorem)?;
    let law = match limit_law(&spec.params, theorem, spec.fy.as_ref()) {
        Ok(law) => Some(law),
        Err(LimitError::NoMixtureLaw { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let moments = law.as_ref().map(|l| {
        (0..=4)
            .map(|k| l.moment(k).expect("orders up to 4"))
            .collect::<Vec<f64>>()
    });
    let doc = serde_json::json!({
        "config": spec.echo_json(),
        "theorem": theorem.to_string(),
        "constants": constants
            .iter()
            .map(|c| serde_json::json!({"name": c.name, "value": c.value}))
            .collect::<Vec<_>>(),
        "law": law,
        "law_moments": moments,
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable")))
}

fn cmd_verify(spec: &RunSpec, common: &CommonArgs) -> Result<(String, String, bool), CliError> {
    let overrides = Overrides { n: common.n, m: common.m, seed: common.seed };
    let report = match (&spec.suite, spec.theorem) {
        (Some(suite), None) if suite == "acceptance" => run_acceptance_suite(&overrides)?,
        (Some(suite), None) => {
            return Err(CliError::Usage(format!("unknown suite `{suite}` (want: acceptance)")));
        }
        (None, Some(theorem)) => {
            let out = run_theorem(theorem, &overrides)?;
            // each theorem check pins its own walk configuration; echo only
            // the check identity and the applied overrides
            let config = serde_json::json!({
                "subcommand": "verify",
                "theorem": theorem.to_string(),
                "overrides": {
                    "n": common.n.map(|v| v as u64),
                    "m": common.m.map(|v| v as u64),
                    "seed": common.seed,
                },
            });
            assemble_report(out.results, config, out.notes)
        }
        _ => {
            return Err(CliError::Usage(
                "verify needs exactly one of --theorem <id> or --suite acceptance".into(),
            ));
        }
    };
    let pass = report.pass;
    for r in &report.results {
        eprintln!(
            "{} {}: statistic {:.6e} vs threshold {:.6e}",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.statistic,
            r.threshold
        );
    }
    for note in &report.notes {
        eprintln!("note: {note}");
    }
    Ok((report.to_json() + "\n", report.to_csv(), pass))
}

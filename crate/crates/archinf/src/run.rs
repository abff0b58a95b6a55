//! Argument grammar, configuration merging, dispatch, and exit-code mapping.
//!
//! Precedence: command-line flags override `--config` file values, which
//! override documented defaults. The resolved configuration drives one of
//! five commands; `--dump-config FILE` writes the resolved configuration and
//! exits instead of running.
//!
//! Exit codes: `0` success/exists (including verification suites that
//! confirm), `2` inconclusive (no certificate, or a suite completed without
//! confirming), `3` rejected input (domain violations, malformed or
//! unknown-key configs, inadmissible moment orders), `4` runtime failure
//! (overflow/divergence, quadrature breakdown, I/O), `64` usage errors.

use std::path::PathBuf;

use archinf_core::coeffs::CoeffSequence;
use archinf_core::existence::{check_cs, check_kl_diagnostic, find_d_star};
use archinf_core::innovations::InnovationDist;
use archinf_core::simulate::{simulate_recursive, simulate_volterra, Engine, Path, SimConfig};
use archinf_core::verify::{
    check_divergence, check_engine_equivalence, evaluate_moment_bounds, VerifyConfig,
};
use archinf_core::ArchError;
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::config::{
    parse_dist, Command, EngineSpec, ModelSpec, OutputFormat, RunConfig, Suite,
};
use crate::csv_io::{atomic_write, coeffs_to_csv, path_to_csv};
use crate::report::{
    CheckReport, DstarJson, SimulateMeta, VerifyBoundsJson, VerifyDivergenceJson,
    VerifyEquivalenceJson,
};

/// Success / existence certified.
pub const EXIT_OK: i32 = 0;
/// Inconclusive: no certificate, or a suite completed without confirming.
pub const EXIT_INCONCLUSIVE: i32 = 2;
/// Rejected input.
pub const EXIT_REJECTED: i32 = 3;
/// Runtime failure.
pub const EXIT_RUNTIME: i32 = 4;
/// Usage error (bad argv).
pub const EXIT_USAGE: i32 = 64;

/// A classified failure: message plus exit code.
#[derive(Debug)]
pub struct CliError {
    /// Human-readable description, printed to stderr.
    pub message: String,
    /// Process exit code.
    pub code: i32,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        Self { message: msg.into(), code: EXIT_USAGE }
    }
    fn rejected(msg: impl Into<String>) -> Self {
        Self { message: msg.into(), code: EXIT_REJECTED }
    }
    fn inconclusive(msg: impl Into<String>) -> Self {
        Self { message: msg.into(), code: EXIT_INCONCLUSIVE }
    }
    fn runtime(msg: impl Into<String>) -> Self {
        Self { message: msg.into(), code: EXIT_RUNTIME }
    }
}

impl From<ArchError> for CliError {
    /// Classify core errors: domain/shape problems are rejected input (3),
    /// numerical breakdowns are runtime failures (4), and a missing
    /// existence certificate is inconclusive (2).
    fn from(e: ArchError) -> Self {
        let code = match &e {
            ArchError::Domain { .. }
            | ArchError::NegativeCoefficient { .. }
            | ArchError::RootInUnitDisk { .. }
            | ArchError::ZeroConstantTerm
            | ArchError::HorizonExceeded { .. }
            | ArchError::TailUnavailable
            | ArchError::UnsupportedKind(_)
            | ArchError::NormalizationViolated { .. }
            | ArchError::InsufficientSamples { .. }
            | ArchError::MismatchedPaths
            | ArchError::BoundUndefined { .. }
            | ArchError::BracketFailure(_) => EXIT_REJECTED,
            ArchError::Overflow { .. } | ArchError::QuadratureNonconvergence(_) => EXIT_RUNTIME,
            ArchError::ExistenceNotEstablished(_) => EXIT_INCONCLUSIVE,
            _ => EXIT_RUNTIME,
        };
        Self { message: e.to_string(), code }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        Self::runtime(format!("{e:#}"))
    }
}

// ---------------------------------------------------------------------------
// Argument grammar.
// ---------------------------------------------------------------------------

/// `archinf` — ARCH(∞) existence analysis, simulation, and verification.
#[derive(Parser, Debug)]
#[command(name = "archinf", version, about, propagate_version = true)]
pub struct Cli {
    /// Load a JSON configuration file; command-line flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Write the fully resolved configuration to FILE and exit.
    #[arg(long, global = true, value_name = "FILE")]
    pub dump_config: Option<PathBuf>,

    /// Worker threads (fallback: ARCHINF_THREADS). Affects speed only,
    /// never results.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Suppress progress output on stderr; results are never suppressed.
    #[arg(long, global = true)]
    pub quiet: bool,

    /// Simulate even when existence is not certified.
    #[arg(long, global = true)]
    pub force: bool,

    /// Subcommand.
    #[command(subcommand)]
    pub command: CliCommand,
}

/// The five subcommands.
#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Decide existence of a stationary causal solution.
    Check(CheckArgs),
    /// Locate the critical FIGARCH memory parameter d*.
    Dstar(DstarArgs),
    /// Simulate one path and write it as CSV (columns n,sigma2,x).
    Simulate(SimulateArgs),
    /// Run a Monte Carlo verification suite.
    Verify(VerifyArgs),
    /// Materialize coefficients as CSV (columns j,a_j).
    Coeffs(CoeffsArgs),
}

/// Coefficient-family flags shared by model-taking subcommands.
#[derive(Args, Debug, Default, Clone)]
pub struct ModelArgs {
    /// Family: figarch0d0 | figarchpq | geometric | explicit.
    #[arg(long)]
    pub model: Option<String>,
    /// Memory parameter d ∈ (0,1) (figarch families).
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<f64>,
    /// Numerator lag polynomial, comma-separated, constant term 1
    /// (figarchpq).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Option<Vec<f64>>,
    /// Denominator lag polynomial, comma-separated, constant term 1
    /// (figarchpq).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub phi: Option<Vec<f64>>,
    /// Scale c > 0 (geometric).
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Ratio r ∈ (0,1) (geometric).
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<f64>,
    /// Explicit coefficient list, comma-separated (explicit).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a: Option<Vec<f64>>,
}

fn parse_on_off(s: &str) -> Result<bool, String> {
    match s {
        "on" | "true" => Ok(true),
        "off" | "false" => Ok(false),
        other => Err(format!("expected on|off, got {other:?}")),
    }
}

/// Flags for `archinf check`.
#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Innovation law: gaussian | student:NU | rademacher | twopoint:V1,V2,W.
    #[arg(long)]
    dist: Option<String>,
    /// Coefficient horizon (default 1000000).
    #[arg(long = "J")]
    j: Option<usize>,
    /// Analytic tail correction beyond J: on | off.
    #[arg(long, value_parser = parse_on_off)]
    tail: Option<bool>,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (default json).
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

/// Flags for `archinf dstar`.
#[derive(Args, Debug)]
pub struct DstarArgs {
    /// Innovation law: gaussian | student:NU | rademacher | twopoint:V1,V2,W.
    #[arg(long)]
    dist: Option<String>,
    /// Summation horizon (default 1000000).
    #[arg(long = "J")]
    j: Option<usize>,
    /// Bisection tolerance (default 1e-4).
    #[arg(long, allow_hyphen_values = true)]
    tol: Option<f64>,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (default json).
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

/// Flags for `archinf simulate`.
#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Innovation law: gaussian | student:NU | rademacher | twopoint:V1,V2,W.
    #[arg(long)]
    dist: Option<String>,
    /// Retained observations (default 100000).
    #[arg(long)]
    n: Option<usize>,
    /// Discarded warm-up steps (default 10·J).
    #[arg(long = "burnin")]
    burn_in: Option<usize>,
    /// Coefficient window (default 5000).
    #[arg(long = "J")]
    j: Option<usize>,
    /// RNG seed (default 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Baseline variance a0 (default 1).
    #[arg(long, allow_hyphen_values = true)]
    a0: Option<f64>,
    /// Engine: recursive | volterra.
    #[arg(long, value_enum)]
    engine: Option<EngineSpec>,
    /// Volterra chaos truncation order (default 30).
    #[arg(long = "chaos")]
    chaos_order: Option<usize>,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (default csv).
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

/// Flags for `archinf verify`.
#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite: bounds | equivalence | divergence.
    #[arg(long, value_enum)]
    suite: Option<Suite>,
    #[command(flatten)]
    model: ModelArgs,
    /// Innovation law: gaussian | student:NU | rademacher | twopoint:V1,V2,W.
    #[arg(long)]
    dist: Option<String>,
    /// Moment order for the bounds suite (default: the located p*).
    #[arg(long, allow_hyphen_values = true)]
    p: Option<f64>,
    /// Replicates for the bounds suite (default 100).
    #[arg(long)]
    replicates: Option<usize>,
    /// Per-replicate length (bounds) or long horizon (divergence).
    #[arg(long)]
    n: Option<usize>,
    /// Coefficient window; the exact-chaos window for equivalence
    /// (default 20, at most 30).
    #[arg(long = "J")]
    j: Option<usize>,
    /// Discarded warm-up steps (default 10·J).
    #[arg(long = "burnin")]
    burn_in: Option<usize>,
    /// Base RNG seed (default 0); suites use seed..seed+10.
    #[arg(long)]
    seed: Option<u64>,
    /// Baseline variance a0 (default 1).
    #[arg(long, allow_hyphen_values = true)]
    a0: Option<f64>,
    /// Engine for the bounds suite: recursive | volterra.
    #[arg(long, value_enum)]
    engine: Option<EngineSpec>,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (default json).
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

/// Flags for `archinf coeffs`.
#[derive(Args, Debug)]
pub struct CoeffsArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Number of coefficients to write (default 1000).
    #[arg(long = "J")]
    j: Option<usize>,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (default csv).
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

// ---------------------------------------------------------------------------
// Merging argv over config file over defaults.
// ---------------------------------------------------------------------------

const MODEL_GRAMMAR: &str = "--model figarch0d0 --d D | \
     --model figarchpq --d D --theta 1,T1,.. --phi 1,P1,.. | \
     --model geometric --c C --r R | --model explicit --a A1,A2,..";

fn require<T>(v: Option<T>, flag: &str, ctx: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::usage(format!("{ctx} requires {flag}\nmodel grammar: {MODEL_GRAMMAR}")))
}

/// Build the model spec from flags, or overlay parameter flags onto the
/// config-file model.
fn merge_model(cli: &ModelArgs, base: Option<ModelSpec>) -> Result<Option<ModelSpec>, CliError> {
    if let Some(kind) = &cli.model {
        let spec = match kind.as_str() {
            "figarch0d0" => ModelSpec::Figarch0d0 {
                d: require(cli.d, "--d", "--model figarch0d0")?,
            },
            "figarchpq" => ModelSpec::FigarchPq {
                d: require(cli.d, "--d", "--model figarchpq")?,
                theta: require(cli.theta.clone(), "--theta", "--model figarchpq")?,
                phi: require(cli.phi.clone(), "--phi", "--model figarchpq")?,
            },
            "geometric" => ModelSpec::Geometric {
                c: require(cli.c, "--c", "--model geometric")?,
                r: require(cli.r, "--r", "--model geometric")?,
            },
            "explicit" => ModelSpec::Explicit {
                a: require(cli.a.clone(), "--a", "--model explicit")?,
            },
            other => {
                return Err(CliError::usage(format!(
                    "unknown model {other:?}\nmodel grammar: {MODEL_GRAMMAR}"
                )))
            }
        };
        return Ok(Some(spec));
    }
    let any_param = cli.d.is_some()
        || cli.theta.is_some()
        || cli.phi.is_some()
        || cli.c.is_some()
        || cli.r.is_some()
        || cli.a.is_some();
    match base {
        Some(mut m) => {
            // Parameter flags override fields of the configured model.
            match &mut m {
                ModelSpec::Figarch0d0 { d } => {
                    if let Some(v) = cli.d {
                        *d = v;
                    }
                }
                ModelSpec::FigarchPq { d, theta, phi } => {
                    if let Some(v) = cli.d {
                        *d = v;
                    }
                    if let Some(t) = &cli.theta {
                        *theta = t.clone();
                    }
                    if let Some(p) = &cli.phi {
                        *phi = p.clone();
                    }
                }
                ModelSpec::Geometric { c, r } => {
                    if let Some(v) = cli.c {
                        *c = v;
                    }
                    if let Some(v) = cli.r {
                        *r = v;
                    }
                }
                ModelSpec::Explicit { a } => {
                    if let Some(v) = &cli.a {
                        *a = v.clone();
                    }
                }
            }
            Ok(Some(m))
        }
        None if any_param => Err(CliError::usage(format!(
            "model parameter flags given without --model or a configured model\n\
             model grammar: {MODEL_GRAMMAR}"
        ))),
        None => Ok(None),
    }
}

/// Load `--config`, overlay the subcommand's flags, and resolve defaults.
pub fn build_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let invoked = match &cli.command {
        CliCommand::Check(_) => Command::Check,
        CliCommand::Dstar(_) => Command::Dstar,
        CliCommand::Simulate(_) => Command::Simulate,
        CliCommand::Verify(_) => Command::Verify,
        CliCommand::Coeffs(_) => Command::Coeffs,
    };
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::rejected(format!("cannot read config {}: {e}", path.display()))
            })?;
            let parsed: RunConfig = serde_json::from_str(&text).map_err(|e| {
                CliError::rejected(format!("invalid config {}: {e}", path.display()))
            })?;
            if parsed.command != invoked {
                return Err(CliError::rejected(format!(
                    "config {} is for a different subcommand ({:?}); invoked {:?}",
                    path.display(),
                    parsed.command,
                    invoked
                )));
            }
            parsed
        }
        None => RunConfig::new(invoked),
    };

    match &cli.command {
        CliCommand::Check(a) => {
            cfg.model = merge_model(&a.model, cfg.model.take())?;
            cfg.dist = a.dist.clone().or(cfg.dist);
            cfg.j = a.j.or(cfg.j);
            cfg.tail = a.tail.or(cfg.tail);
            cfg.out = a.out.clone().or(cfg.out);
            cfg.format = a.format.or(cfg.format);
        }
        CliCommand::Dstar(a) => {
            cfg.dist = a.dist.clone().or(cfg.dist);
            cfg.j = a.j.or(cfg.j);
            cfg.tol = a.tol.or(cfg.tol);
            cfg.out = a.out.clone().or(cfg.out);
            cfg.format = a.format.or(cfg.format);
        }
        CliCommand::Simulate(a) => {
            cfg.model = merge_model(&a.model, cfg.model.take())?;
            cfg.dist = a.dist.clone().or(cfg.dist);
            cfg.n = a.n.or(cfg.n);
            cfg.burn_in = a.burn_in.or(cfg.burn_in);
            cfg.j = a.j.or(cfg.j);
            cfg.seed = a.seed.or(cfg.seed);
            cfg.a0 = a.a0.or(cfg.a0);
            cfg.engine = a.engine.or(cfg.engine);
            cfg.chaos_order = a.chaos_order.or(cfg.chaos_order);
            cfg.out = a.out.clone().or(cfg.out);
            cfg.format = a.format.or(cfg.format);
        }
        CliCommand::Verify(a) => {
            cfg.suite = a.suite.or(cfg.suite);
            cfg.model = merge_model(&a.model, cfg.model.take())?;
            cfg.dist = a.dist.clone().or(cfg.dist);
            cfg.p = a.p.or(cfg.p);
            cfg.replicates = a.replicates.or(cfg.replicates);
            cfg.n = a.n.or(cfg.n);
            cfg.j = a.j.or(cfg.j);
            cfg.burn_in = a.burn_in.or(cfg.burn_in);
            cfg.seed = a.seed.or(cfg.seed);
            cfg.a0 = a.a0.or(cfg.a0);
            cfg.engine = a.engine.or(cfg.engine);
            cfg.out = a.out.clone().or(cfg.out);
            cfg.format = a.format.or(cfg.format);
        }
        CliCommand::Coeffs(a) => {
            cfg.model = merge_model(&a.model, cfg.model.take())?;
            cfg.j = a.j.or(cfg.j);
            cfg.out = a.out.clone().or(cfg.out);
            cfg.format = a.format.or(cfg.format);
        }
    }
    Ok(cfg.resolve())
}

// ---------------------------------------------------------------------------
// Execution.
// ---------------------------------------------------------------------------

/// Progress and override switches that live outside the run configuration.
#[derive(Debug, Clone, Copy, Default)]
pub struct GlobalOpts {
    /// Suppress progress output.
    pub quiet: bool,
    /// Simulate without an existence certificate.
    pub force: bool,
}

fn progress(opts: &GlobalOpts, msg: &str) {
    if !opts.quiet {
        eprintln!("{msg}");
    }
}

fn model_of(cfg: &RunConfig) -> Result<&ModelSpec, CliError> {
    cfg.model.as_ref().ok_or_else(|| {
        CliError::usage(format!(
            "this subcommand requires a model\nmodel grammar: {MODEL_GRAMMAR}"
        ))
    })
}

/// Build the sequence at the resolved horizon and apply the tail knob.
fn build_seq(cfg: &RunConfig) -> Result<CoeffSequence, CliError> {
    let j = cfg.j.expect("resolved");
    let seq = model_of(cfg)?.build(j)?;
    match cfg.tail {
        Some(false) => Ok(seq.without_tail()),
        Some(true) if !seq.has_tail_model() => Err(CliError::rejected(
            "tail correction requested, but this family has no analytic tail model",
        )),
        _ => Ok(seq),
    }
}

fn dist_of(cfg: &RunConfig) -> Result<InnovationDist, CliError> {
    Ok(parse_dist(cfg.dist.as_deref().expect("resolved"))?)
}

fn require_format(cfg: &RunConfig, want: OutputFormat, what: &str) -> Result<(), CliError> {
    let got = cfg.format.expect("resolved");
    if got != want {
        return Err(CliError::rejected(format!(
            "{what} output is {want:?}-only; --format {got:?} is not supported"
        )));
    }
    Ok(())
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => Ok(atomic_write(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::runtime(format!("serializing report: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Run one resolved configuration. Returns the exit code on success paths;
/// failures come back as classified [`CliError`]s.
pub fn execute(cfg: &RunConfig, opts: &GlobalOpts) -> Result<i32, CliError> {
    match cfg.command {
        Command::Check => cmd_check(cfg, opts),
        Command::Dstar => cmd_dstar(cfg, opts),
        Command::Simulate => cmd_simulate(cfg, opts),
        Command::Verify => cmd_verify(cfg, opts),
        Command::Coeffs => cmd_coeffs(cfg, opts),
    }
}

fn cmd_check(cfg: &RunConfig, opts: &GlobalOpts) -> Result<i32, CliError> {
    require_format(cfg, OutputFormat::Json, "check")?;
    let seq = build_seq(cfg)?;
    let dist = dist_of(cfg)?;
    progress(opts, &format!("checking existence at J = {}", seq.j_max()));
    let report = check_cs(&seq, &dist)?;
    let kl = check_kl_diagnostic(&seq, &dist);
    emit(cfg, &to_json(&CheckReport::new(&report, kl))?)?;
    Ok(if report.verdict.exists() { EXIT_OK } else { EXIT_INCONCLUSIVE })
}

fn cmd_dstar(cfg: &RunConfig, opts: &GlobalOpts) -> Result<i32, CliError> {
    require_format(cfg, OutputFormat::Json, "dstar")?;
    if cfg.model.is_some() {
        progress(opts, "note: dstar ignores --model (it sweeps the figarch0d0 family)");
    }
    let dist = dist_of(cfg)?;
    let j = cfg.j.expect("resolved");
    let tol = cfg.tol.expect("resolved");
    progress(opts, &format!("bisecting the critical memory parameter (J = {j}, tol = {tol})"));
    let report = find_d_star(&dist, j, tol)?;
    emit(cfg, &to_json(&DstarJson::from(&report))?)?;
    Ok(EXIT_OK)
}

/// Existence gate for `simulate`: certify on a well-resolved horizon even
/// when the simulation window is short.
fn certify(cfg: &RunConfig, dist: &InnovationDist) -> Result<archinf_core::existence::ExistenceReport, CliError> {
    const CERT_HORIZON: usize = 100_000;
    let j = cfg.j.expect("resolved");
    let spec = model_of(cfg)?;
    let seq = if spec.has_tail_model() && j < CERT_HORIZON {
        spec.build(CERT_HORIZON)?
    } else {
        build_seq(cfg)?
    };
    Ok(check_cs(&seq, dist)?)
}

fn sim_config(cfg: &RunConfig) -> SimConfig {
    let j = cfg.j.expect("resolved");
    let mut sim = SimConfig::new(cfg.n.expect("resolved"), j, cfg.a0.expect("resolved"), cfg.seed.expect("resolved"));
    sim.burn_in = cfg.burn_in.expect("resolved");
    sim.chaos_order = cfg.chaos_order.unwrap_or(30);
    sim
}

fn run_engine(
    engine: Engine,
    seq: &CoeffSequence,
    dist: &InnovationDist,
    sim: &SimConfig,
) -> Result<Path, CliError> {
    let result = match engine {
        Engine::Recursive => simulate_recursive(seq, dist, sim),
        Engine::Volterra => simulate_volterra(seq, dist, sim),
    };
    result.map_err(|e| match e {
        ArchError::Overflow { .. } => CliError::runtime(format!(
            "{e}; the path diverged — non-stationary input (no existence certificate applies \
             at this parameter set)"
        )),
        other => other.into(),
    })
}

fn cmd_simulate(cfg: &RunConfig, opts: &GlobalOpts) -> Result<i32, CliError> {
    require_format(cfg, OutputFormat::Csv, "simulate")?;
    let seq = build_seq(cfg)?;
    let dist = dist_of(cfg)?;
    let engine: Engine = cfg.engine.expect("resolved").into();
    let sim = sim_config(cfg);

    let verdict = certify(cfg, &dist)?;
    if !verdict.verdict.exists() {
        if opts.force {
            progress(
                opts,
                &format!(
                    "warning: existence not certified (verdict {}); simulating under --force",
                    verdict.verdict.as_str()
                ),
            );
        } else {
            return Err(CliError::inconclusive(format!(
                "existence not certified (verdict {}); pass --force to simulate anyway",
                verdict.verdict.as_str()
            )));
        }
    }

    progress(
        opts,
        &format!(
            "simulating n = {} (burn-in {}) with the {} engine",
            sim.n,
            sim.burn_in,
            engine.name()
        ),
    );
    let path = run_engine(engine, &seq, &dist, &sim)?;
    emit(cfg, &path_to_csv(&path.sigma2, &path.x))?;
    if cfg.out.is_some() && !opts.quiet {
        // provenance record on stdout once the series went to a file
        println!("{}", to_json(&SimulateMeta::new(engine.name(), &sim))?.trim_end());
    }
    Ok(EXIT_OK)
}

/// Deterministic parallel replicate generation: replicate `i` always uses
/// RNG substream `base.stream + i`, so scheduling cannot affect results.
fn parallel_replicates(
    seq: &CoeffSequence,
    dist: &InnovationDist,
    vcfg: &VerifyConfig,
) -> Result<Vec<Path>, CliError> {
    if vcfg.replicates == 0 {
        return Err(CliError::rejected("replicates must be >= 1"));
    }
    let paths: Result<Vec<Path>, ArchError> = (0..vcfg.replicates)
        .into_par_iter()
        .map(|i| {
            let sub = vcfg.base.with_stream(vcfg.base.stream + i as u64);
            match vcfg.engine {
                Engine::Recursive => simulate_recursive(seq, dist, &sub),
                Engine::Volterra => simulate_volterra(seq, dist, &sub),
            }
        })
        .collect();
    Ok(paths?)
}

fn cmd_verify(cfg: &RunConfig, opts: &GlobalOpts) -> Result<i32, CliError> {
    require_format(cfg, OutputFormat::Json, "verify")?;
    let suite = cfg
        .suite
        .ok_or_else(|| CliError::usage("verify requires --suite bounds|equivalence|divergence"))?;
    let seq = build_seq(cfg)?;
    let dist = dist_of(cfg)?;
    let seed = cfg.seed.expect("resolved");
    let seeds: Vec<u64> = (seed..seed + 10).collect();

    match suite {
        Suite::Bounds => {
            let report = check_cs(&seq, &dist)?;
            if !report.verdict.exists() {
                return Err(CliError::inconclusive(format!(
                    "bounds suite needs an existence certificate; verdict {}",
                    report.verdict.as_str()
                )));
            }
            let p = match cfg.p.or(report.p_star) {
                Some(p) => p,
                None => {
                    return Err(CliError::rejected(
                        "no interior contraction exponent was located for this input; \
                         pass --p explicitly",
                    ))
                }
            };
            let vcfg = VerifyConfig {
                base: sim_config(cfg),
                replicates: cfg.replicates.expect("resolved"),
                engine: cfg.engine.expect("resolved").into(),
            };
            progress(
                opts,
                &format!(
                    "bounds suite: {} replicates of n = {} at p = {p:.6}",
                    vcfg.replicates, vcfg.base.n
                ),
            );
            let paths = parallel_replicates(&seq, &dist, &vcfg)?;
            let check = evaluate_moment_bounds(&paths, &seq, &dist, p, report.verdict)?;
            emit(cfg, &to_json(&VerifyBoundsJson::from(&check))?)?;
            Ok(if check.passed() { EXIT_OK } else { EXIT_INCONCLUSIVE })
        }
        Suite::Equivalence => {
            let window = cfg.j.expect("resolved");
            progress(opts, &format!("engine equivalence on window {window}, 10 seeds"));
            let rep = check_engine_equivalence(&seq, &dist, window, &seeds)?;
            emit(cfg, &to_json(&VerifyEquivalenceJson::from(&rep))?)?;
            Ok(if rep.pass { EXIT_OK } else { EXIT_INCONCLUSIVE })
        }
        Suite::Divergence => {
            let n_large = cfg.n.expect("resolved");
            let n_small = (n_large / 100).max(200).min(n_large.saturating_sub(1).max(1));
            let base = sim_config(cfg);
            progress(
                opts,
                &format!("divergence probe: horizons {n_small} vs {n_large}, 10 seeds"),
            );
            let rep = check_divergence(&seq, &dist, &base, &seeds, n_small, n_large)?;
            emit(cfg, &to_json(&VerifyDivergenceJson::from(&rep))?)?;
            // pass = the probe confirmed growth (the expected finding for
            // uncertified inputs)
            Ok(if rep.pass { EXIT_OK } else { EXIT_INCONCLUSIVE })
        }
    }
}

fn cmd_coeffs(cfg: &RunConfig, opts: &GlobalOpts) -> Result<i32, CliError> {
    require_format(cfg, OutputFormat::Csv, "coeffs")?;
    let seq = build_seq(cfg)?;
    let j = cfg.j.expect("resolved").min(seq.j_max());
    progress(opts, &format!("writing {j} coefficients"));
    emit(cfg, &coeffs_to_csv(&seq, j))?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// Entry point.
// ---------------------------------------------------------------------------

fn thread_count(cli: &Cli) -> Option<usize> {
    cli.threads.or_else(|| {
        std::env::var("ARCHINF_THREADS").ok().and_then(|s| s.parse().ok())
    })
}

/// Parse argv, run, and map every outcome to an exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version print on stdout and exit 0; genuine grammar
            // violations print the usage text and exit 64
            let is_usage_error = e.use_stderr();
            let _ = e.print();
            return if is_usage_error { EXIT_USAGE } else { 0 };
        }
    };
    if let Some(k) = thread_count(&cli) {
        // A failure here means a pool already exists (tests); that only
        // affects speed, never results.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    let opts = GlobalOpts { quiet: cli.quiet, force: cli.force };
    let dump = cli.dump_config.clone();
    let cfg = match build_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return e.code;
        }
    };
    if let Some(target) = dump {
        let json = match to_json(&cfg) {
            Ok(j) => j,
            Err(e) => {
                eprintln!("error: {}", e.message);
                return e.code;
            }
        };
        if let Err(e) = atomic_write(&target, &json) {
            eprintln!("error: {e:#}");
            return EXIT_RUNTIME;
        }
        progress(&opts, &format!("wrote resolved config to {}", target.display()));
        return EXIT_OK;
    }
    match execute(&cfg, &opts) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

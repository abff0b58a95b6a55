//! Run configuration: one strict, serializable structure holding every knob
//! of every subcommand.
//!
//! Configuration files are JSON documents deserializing into [`RunConfig`]
//! with **unknown keys rejected** — a typo in a tolerance name must fail
//! loudly rather than silently fall back to a default. Command-line flags
//! override file values, which override the documented defaults. The
//! `--dump-config` flag writes the fully resolved configuration back out;
//! reparsing that dump reproduces an identical `RunConfig`.

use std::path::PathBuf;

use archinf_core::coeffs::CoeffSequence;
use archinf_core::innovations::InnovationDist;
use archinf_core::series::PowerSeries;
use archinf_core::simulate::Engine;
use serde::{Deserialize, Serialize};

/// Which subcommand a configuration drives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Existence verdict for a model/innovation pair.
    Check,
    /// Critical FIGARCH memory parameter for an innovation law.
    Dstar,
    /// Simulate one path.
    Simulate,
    /// Monte Carlo verification suites.
    Verify,
    /// Materialize coefficients as CSV.
    Coeffs,
}

/// Coefficient-family specification (kind plus parameters).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    /// `a_j = π_j(d)` — the pure fractional-differencing family.
    Figarch0d0 {
        /// Memory parameter `d ∈ (0,1)`.
        d: f64,
    },
    /// Coefficients of `1 − (1−z)^d θ(z)/φ(z)`.
    FigarchPq {
        /// Memory parameter `d ∈ (0,1)`.
        d: f64,
        /// Numerator lag polynomial, constant term 1.
        theta: Vec<f64>,
        /// Denominator lag polynomial, constant term 1, roots outside the
        /// closed unit disk.
        phi: Vec<f64>,
    },
    /// `a_j = c·r^j`.
    Geometric {
        /// Scale `c > 0`.
        c: f64,
        /// Ratio `r ∈ (0,1)`.
        r: f64,
    },
    /// A finite explicit list `a_1, …, a_J`.
    Explicit {
        /// The coefficients (all `≥ 0`).
        a: Vec<f64>,
    },
}

impl ModelSpec {
    /// Build the coefficient sequence, materializing `j` terms for the
    /// unbounded families (explicit lists carry their own length).
    pub fn build(&self, j: usize) -> archinf_core::Result<CoeffSequence> {
        match self {
            ModelSpec::Figarch0d0 { d } => CoeffSequence::figarch_0d0(*d, j),
            ModelSpec::FigarchPq { d, theta, phi } => {
                let theta = PowerSeries::new(theta.clone())?;
                let phi = PowerSeries::new(phi.clone())?;
                CoeffSequence::figarch_pq(*d, &theta, &phi, j)
            }
            ModelSpec::Geometric { c, r } => CoeffSequence::geometric(*c, *r, j),
            ModelSpec::Explicit { a } => CoeffSequence::explicit_list(a.clone()),
        }
    }

    /// Whether the family carries an analytic power-law tail model (used to
    /// default the `tail` knob).
    pub fn has_tail_model(&self) -> bool {
        matches!(self, ModelSpec::Figarch0d0 { .. } | ModelSpec::FigarchPq { .. })
    }
}

/// Verification suite selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// Moment estimates against the stationary bounds.
    Bounds,
    /// Recursive vs Volterra engines on exact windows.
    Equivalence,
    /// Growth probe for uncertified inputs.
    Divergence,
}

/// Simulation engine selector (mirrors [`Engine`] with serde/clap support).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum EngineSpec {
    /// Direct recursion on σ².
    Recursive,
    /// Truncated Volterra chaos expansion.
    Volterra,
}

impl From<EngineSpec> for Engine {
    fn from(e: EngineSpec) -> Self {
        match e {
            EngineSpec::Recursive => Engine::Recursive,
            EngineSpec::Volterra => Engine::Volterra,
        }
    }
}

/// Report/series output format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    /// JSON report (check, dstar, verify).
    Json,
    /// CSV series (simulate, coeffs).
    Csv,
}

/// The complete configuration of one run.
///
/// Every optional field has a documented default, resolved by
/// [`RunConfig::resolve`]; a dumped configuration always has the resolved
/// values filled in. The seed defaults to the fixed constant `0` — never
/// wall-clock time — so default runs are reproducible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Subcommand this configuration drives.
    pub command: Command,
    /// Coefficient family. Required by every subcommand except `dstar`.
    #[serde(default)]
    pub model: Option<ModelSpec>,
    /// Innovation law: `gaussian`, `student:NU`, `rademacher`, or
    /// `twopoint:V1,V2,W`. Default `gaussian`.
    #[serde(default)]
    pub dist: Option<String>,
    /// Coefficient horizon `J`. Defaults: `check`/`dstar` 10⁶,
    /// `simulate`/`verify(bounds)` 5 000, `verify(equivalence)` 20,
    /// `verify(divergence)` 200, `coeffs` 1 000, geometric families 2 000,
    /// explicit lists their own length.
    #[serde(default)]
    pub j: Option<usize>,
    /// Apply the analytic tail correction beyond `J`. Default: on for the
    /// FIGARCH families (which have a power-law tail model), off otherwise.
    #[serde(default)]
    pub tail: Option<bool>,
    /// Retained path length. Defaults: `simulate` 100 000,
    /// `verify(bounds)` 2 000 per replicate, `verify(divergence)` 20 000.
    #[serde(default)]
    pub n: Option<usize>,
    /// Discarded warm-up steps. Default `10·J`.
    #[serde(default)]
    pub burn_in: Option<usize>,
    /// RNG seed. Default 0 (fixed, reproducible).
    #[serde(default)]
    pub seed: Option<u64>,
    /// Baseline variance `a₀`. Default 1.
    #[serde(default)]
    pub a0: Option<f64>,
    /// Volterra chaos truncation order. Default 30.
    #[serde(default)]
    pub chaos_order: Option<usize>,
    /// Simulation engine. Default `recursive`.
    #[serde(default)]
    pub engine: Option<EngineSpec>,
    /// Verification suite (`verify` only; required there).
    #[serde(default)]
    pub suite: Option<Suite>,
    /// Moment order for the bounds suite. Default: the contraction exponent
    /// `p*` located by the existence check.
    #[serde(default)]
    pub p: Option<f64>,
    /// Replicate count for the bounds suite. Default 100.
    #[serde(default)]
    pub replicates: Option<usize>,
    /// Bisection tolerance for `dstar`. Default 10⁻⁴.
    #[serde(default)]
    pub tol: Option<f64>,
    /// Output file. Default: stdout.
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Output format. Default: `json` for reports (check, dstar, verify),
    /// `csv` for series (simulate, coeffs).
    #[serde(default)]
    pub format: Option<OutputFormat>,
}

impl RunConfig {
    /// A bare configuration for `command` with everything else unset.
    pub fn new(command: Command) -> Self {
        Self {
            command,
            model: None,
            dist: None,
            j: None,
            tail: None,
            n: None,
            burn_in: None,
            seed: None,
            a0: None,
            chaos_order: None,
            engine: None,
            suite: None,
            p: None,
            replicates: None,
            tol: None,
            out: None,
            format: None,
        }
    }

    /// Fill every defaultable field with its documented default, leaving
    /// only the semantically optional ones (`model` for `dstar`, `p` = auto,
    /// `suite` outside `verify`, `out` = stdout) possibly unset.
    pub fn resolve(mut self) -> Self {
        self.dist.get_or_insert_with(|| "gaussian".to_string());
        let j = self.j.unwrap_or_else(|| default_j(&self));
        self.j = Some(j);
        self.tail
            .get_or_insert_with(|| self.model.as_ref().is_some_and(ModelSpec::has_tail_model));
        self.n.get_or_insert_with(|| match (self.command, self.suite) {
            (Command::Simulate, _) => 100_000,
            (Command::Verify, Some(Suite::Divergence)) => 20_000,
            _ => 2_000,
        });
        self.burn_in.get_or_insert(10 * j);
        self.seed.get_or_insert(0);
        self.a0.get_or_insert(1.0);
        self.chaos_order.get_or_insert(30);
        self.engine.get_or_insert(EngineSpec::Recursive);
        self.replicates.get_or_insert(100);
        self.tol.get_or_insert(1e-4);
        self.format.get_or_insert(match self.command {
            Command::Simulate | Command::Coeffs => OutputFormat::Csv,
            _ => OutputFormat::Json,
        });
        self
    }
}

/// Per-command default coefficient horizon.
fn default_j(cfg: &RunConfig) -> usize {
    // Families with their own natural length win first.
    match &cfg.model {
        Some(ModelSpec::Explicit { a }) => return a.len().max(1),
        Some(ModelSpec::Geometric { .. }) => return 2_000,
        _ => {}
    }
    match (cfg.command, cfg.suite) {
        (Command::Check | Command::Dstar, _) => 1_000_000,
        (Command::Simulate, _) => 5_000,
        (Command::Verify, Some(Suite::Equivalence)) => 20,
        (Command::Verify, Some(Suite::Divergence)) => 200,
        (Command::Verify, _) => 5_000,
        (Command::Coeffs, _) => 1_000,
    }
}

/// Parse the compact distribution grammar:
/// `gaussian | student:NU | rademacher | twopoint:V1,V2,W`.
pub fn parse_dist(spec: &str) -> archinf_core::Result<InnovationDist> {
    let spec = spec.trim();
    if spec == "gaussian" {
        return Ok(InnovationDist::gaussian());
    }
    if spec == "rademacher" {
        return Ok(InnovationDist::rademacher());
    }
    if let Some(rest) = spec.strip_prefix("student:") {
        let nu = parse_f64(rest, "student degrees of freedom")?;
        return InnovationDist::student_t(nu);
    }
    if let Some(rest) = spec.strip_prefix("twopoint:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 3 {
            return Err(archinf_core::ArchError::UnsupportedKind(
                "twopoint takes exactly three parameters: twopoint:V1,V2,W",
            ));
        }
        let v1 = parse_f64(parts[0], "twopoint v1")?;
        let v2 = parse_f64(parts[1], "twopoint v2")?;
        let w = parse_f64(parts[2], "twopoint w")?;
        return InnovationDist::two_point(v1, v2, w);
    }
    Err(archinf_core::ArchError::UnsupportedKind(
        "distribution must be gaussian | student:NU | rademacher | twopoint:V1,V2,W",
    ))
}

fn parse_f64(s: &str, what: &'static str) -> archinf_core::Result<f64> {
    s.trim().parse::<f64>().map_err(|_| archinf_core::ArchError::Domain {
        name: what,
        value: f64::NAN,
        domain: "a finite decimal number",
    })
}

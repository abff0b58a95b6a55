//! Versioned JSON report types.
//!
//! Every report carries `format_version` so downstream tooling can detect
//! layout changes. Numeric fields serialize with full round-trip precision
//! (serde_json emits shortest-exact decimal forms).

use archinf_core::existence::{DStarReport, ExistenceReport, KlDiagnostic};
use archinf_core::simulate::SimConfig;
use archinf_core::verify::{BoundsCheck, DivergenceReport, EquivalenceReport, MomentEstimate};
use serde::{Deserialize, Serialize};

/// Current report layout version.
pub const FORMAT_VERSION: u32 = 1;

/// Output of `archinf check`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    /// Report layout version.
    pub format_version: u32,
    /// Canonical verdict string.
    pub verdict: String,
    /// Contraction exponent `p*` localized by the minimization, when the
    /// interior route succeeded.
    pub p_star: Option<f64>,
    /// `φ(p*) = ln(A_{p*} μ_{p*})` at the located minimum.
    pub phi: Option<f64>,
    /// Boundary-criterion left-hand side `Σ a_j ln a_j + E[z² ln z²]`, when
    /// the input is integrated.
    pub iarch_lhs: Option<f64>,
    /// Coefficient sum `A₁`.
    #[serde(rename = "A1")]
    pub a1: f64,
    /// Innovation second moment `μ₁`.
    pub mu1: f64,
    /// Human-readable notes accumulated by the check.
    pub diagnostics: Vec<String>,
    /// Classical geometric-decay route diagnostic.
    pub kl_diagnostic: KlDiagnosticReport,
}

/// JSON shape of the geometric-decay diagnostic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KlDiagnosticReport {
    /// Coefficients decay geometrically (or are eventually zero).
    pub geometric_rate: bool,
    /// The innovation entropy moment is finite.
    pub log_moment_finite: bool,
    /// Both hold, so the classical route applies.
    pub applies: bool,
}

impl From<KlDiagnostic> for KlDiagnosticReport {
    fn from(k: KlDiagnostic) -> Self {
        Self {
            geometric_rate: k.geometric_rate,
            log_moment_finite: k.log_moment_finite,
            applies: k.applies,
        }
    }
}

impl CheckReport {
    /// Assemble from the core existence report plus the side diagnostic.
    pub fn new(r: &ExistenceReport, kl: KlDiagnostic) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            verdict: r.verdict.as_str().to_string(),
            p_star: r.p_star,
            phi: r.phi_at_p_star,
            iarch_lhs: r.iarch_lhs,
            a1: r.a1,
            mu1: r.mu1,
            diagnostics: r.diagnostics.clone(),
            kl_diagnostic: kl.into(),
        }
    }
}

/// Output of `archinf dstar`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DstarJson {
    /// Report layout version.
    pub format_version: u32,
    /// Critical memory parameter.
    pub d_star: f64,
    /// Horizon-doubling sensitivity `|d*(J) − d*(2J)|`.
    pub uncertainty: f64,
    /// Innovation entropy moment `κ = E[z² ln z²]`.
    pub kappa: f64,
    /// The monotonicity scan found more than one sign change.
    pub non_monotone: bool,
    /// Human-readable notes.
    pub diagnostics: Vec<String>,
}

impl From<&DStarReport> for DstarJson {
    fn from(r: &DStarReport) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            d_star: r.d_star,
            uncertainty: r.uncertainty,
            kappa: r.kappa,
            non_monotone: r.non_monotone,
            diagnostics: r.diagnostics.clone(),
        }
    }
}

/// Provenance record emitted alongside a simulated path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateMeta {
    /// Report layout version.
    pub format_version: u32,
    /// Engine name (`recursive` or `volterra`).
    pub engine: String,
    /// Retained observations.
    pub n: usize,
    /// Discarded warm-up steps.
    pub burn_in: usize,
    /// Coefficient window.
    #[serde(rename = "J")]
    pub j: usize,
    /// Baseline variance.
    pub a0: f64,
    /// RNG seed.
    pub seed: u64,
    /// RNG substream.
    pub stream: u64,
    /// Volterra chaos truncation order.
    pub chaos_order: usize,
}

impl SimulateMeta {
    /// Assemble from the engine name and simulation configuration.
    pub fn new(engine: &str, cfg: &SimConfig) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            engine: engine.to_string(),
            n: cfg.n,
            burn_in: cfg.burn_in,
            j: cfg.j,
            a0: cfg.a0,
            seed: cfg.seed,
            stream: cfg.stream,
            chaos_order: cfg.chaos_order,
        }
    }
}

/// One Monte Carlo moment estimate with its bound comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateJson {
    /// Moment order.
    pub p: f64,
    /// Point estimate.
    pub estimate: f64,
    /// Batch-means standard error.
    pub std_error: f64,
    /// Observations entering the estimate.
    pub n_samples: usize,
    /// Theoretical bound, when attached.
    pub bound: Option<f64>,
    /// `estimate ≤ bound + 4·SE`, when a bound was attached.
    pub passed: Option<bool>,
}

impl From<&MomentEstimate> for EstimateJson {
    fn from(e: &MomentEstimate) -> Self {
        Self {
            p: e.p,
            estimate: e.estimate,
            std_error: e.std_error,
            n_samples: e.n_samples,
            bound: e.bound,
            passed: e.passed,
        }
    }
}

/// Output of `archinf verify --suite bounds`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyBoundsJson {
    /// Report layout version.
    pub format_version: u32,
    /// Suite name (`bounds`).
    pub suite: String,
    /// Existence verdict that authorized the comparison.
    pub verdict: String,
    /// Moment order used.
    pub p: f64,
    /// Contraction factor `A_p μ_p`.
    pub contraction: f64,
    /// σ²-moment estimate vs its bound.
    pub sigma2: EstimateJson,
    /// |X|^{2p}-moment estimate vs its bound.
    pub x: EstimateJson,
    /// Both estimates fell below their bounds.
    pub pass: bool,
}

impl From<&BoundsCheck> for VerifyBoundsJson {
    fn from(b: &BoundsCheck) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            suite: "bounds".to_string(),
            verdict: b.verdict.as_str().to_string(),
            p: b.p,
            contraction: b.contraction,
            sigma2: (&b.sigma2).into(),
            x: (&b.x).into(),
            pass: b.passed(),
        }
    }
}

/// Output of `archinf verify --suite equivalence`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyEquivalenceJson {
    /// Report layout version.
    pub format_version: u32,
    /// Suite name (`equivalence`).
    pub suite: String,
    /// Window length (chaos expansion exact up to here).
    pub window: usize,
    /// Seeds exercised.
    pub seeds: Vec<u64>,
    /// Largest relative discrepancy between the engines.
    pub max_rel_discrepancy: f64,
    /// Discrepancy stayed within tolerance.
    pub pass: bool,
}

impl From<&EquivalenceReport> for VerifyEquivalenceJson {
    fn from(r: &EquivalenceReport) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            suite: "equivalence".to_string(),
            window: r.window,
            seeds: r.seeds.clone(),
            max_rel_discrepancy: r.max_rel_discrepancy,
            pass: r.pass,
        }
    }
}

/// Output of `archinf verify --suite divergence`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyDivergenceJson {
    /// Report layout version.
    pub format_version: u32,
    /// Suite name (`divergence`).
    pub suite: String,
    /// Short horizon.
    pub n_small: usize,
    /// Long horizon.
    pub n_large: usize,
    /// Per-seed `(prefix mean, full mean)` of σ².
    pub prefix_means: Vec<(f64, f64)>,
    /// Seeds whose mean grew with the horizon.
    pub grew: usize,
    /// At least 90% of seeds grew (the probe fired).
    pub pass: bool,
}

impl From<&DivergenceReport> for VerifyDivergenceJson {
    fn from(r: &DivergenceReport) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            suite: "divergence".to_string(),
            n_small: r.n_small,
            n_large: r.n_large,
            prefix_means: r.prefix_means.clone(),
            grew: r.grew,
            pass: r.pass,
        }
    }
}

//! Simulation engines for ARCH(∞) paths.
//!
//! Both engines share the same innovation stream layout (one ChaCha
//! substream per replicate) and the same zero pre-sample convention:
//! `X_t = 0` for `t < 0`, so `σ_t² = a_0 + Σ_{j=1}^{min(J,t)} a_j X_{t−j}²`.
//! A burn-in prefix is simulated and discarded to wash out the pre-sample.
//!
//! * [`simulate_recursive`] iterates the defining recursion directly.
//! * [`simulate_volterra`] builds the Volterra chaos expansion
//!   `σ_t² = a_0 · (1 + Σ_{k≥1} Σ_{j_1,…,j_k ≤ J} a_{j_1}···a_{j_k}
//!   ξ_{t−j_1} ξ_{t−j_1−j_2} ··· )` truncated at chaos order `q`, via the
//!   dynamic program `T_0 ≡ a_0`,
//!   `T_k(t) = Σ_{j≤min(J,t)} a_j ξ_{t−j} T_{k−1}(t−j)`, at cost
//!   `O(n·J·q)`. On windows short enough that no chain can exceed the
//!   truncation (`q ≥ t` and `J ≥ t`), the two engines agree to rounding —
//!   the basis of the cross-validation in [`crate::verify`].
//!
//! Overflow policy: σ² above the configured cap aborts with
//! [`ArchError::Overflow`] (non-stationary parameter sets diverge
//! geometrically; capping keeps NaN/∞ out of downstream estimators).

#[allow(unused_imports)]
use num_traits::Float;

use crate::coeffs::CoeffSequence;
use crate::innovations::InnovationDist;
use crate::math::CompensatedSum;
use crate::tolerances::{COMPENSATED_SUM_THRESHOLD, OVERFLOW_CAP};
use crate::{ArchError, Result};
use alloc::vec;
use alloc::vec::Vec;

/// Which engine produced a path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    /// Direct recursion on σ².
    Recursive,
    /// Truncated Volterra chaos expansion.
    Volterra,
}

impl Engine {
    /// Canonical name used by configuration files and reports.
    pub fn name(&self) -> &'static str {
        match self {
            Engine::Recursive => "recursive",
            Engine::Volterra => "volterra",
        }
    }
}

/// Simulation configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    /// Number of retained observations (after burn-in).
    pub n: usize,
    /// Discarded warm-up steps (default `10·J`).
    pub burn_in: usize,
    /// Coefficient window: lags beyond `J` are dropped (`J ≤ J_max` of the
    /// sequence is enforced).
    pub j: usize,
    /// Baseline variance `a_0 > 0`.
    pub a0: f64,
    /// RNG seed.
    pub seed: u64,
    /// RNG substream (replicate index; default 0).
    pub stream: u64,
    /// Chaos truncation order for the Volterra engine (default 30).
    pub chaos_order: usize,
    /// Abort threshold for σ² (default [`OVERFLOW_CAP`]).
    pub overflow_cap: f64,
}

impl SimConfig {
    /// Configuration with defaults: `burn_in = 10·j`, `stream = 0`,
    /// `chaos_order = 30`, `overflow_cap = 1e300`.
    pub fn new(n: usize, j: usize, a0: f64, seed: u64) -> Self {
        Self {
            n,
            burn_in: 10 * j,
            j,
            a0,
            seed,
            stream: 0,
            chaos_order: 30,
            overflow_cap: OVERFLOW_CAP,
        }
    }

    /// Same configuration on a different RNG substream.
    pub fn with_stream(mut self, stream: u64) -> Self {
        self.stream = stream;
        self
    }

    fn validate(&self, seq: &CoeffSequence) -> Result<()> {
        if self.n == 0 {
            return Err(ArchError::Domain { name: "n", value: 0.0, domain: "n >= 1" });
        }
        if self.j == 0 {
            return Err(ArchError::Domain { name: "J", value: 0.0, domain: "J >= 1" });
        }
        if self.j > seq.j_max() {
            return Err(ArchError::HorizonExceeded { requested: self.j, cached: seq.j_max() });
        }
        if !(self.a0 > 0.0 && self.a0.is_finite()) {
            return Err(ArchError::Domain { name: "a0", value: self.a0, domain: "(0, inf)" });
        }
        if self.chaos_order == 0 {
            return Err(ArchError::Domain {
                name: "chaos_order",
                value: 0.0,
                domain: ">= 1",
            });
        }
        if !(self.overflow_cap > 0.0 && self.overflow_cap.is_finite()) {
            return Err(ArchError::Domain {
                name: "overflow_cap",
                value: self.overflow_cap,
                domain: "(0, inf)",
            });
        }
        Ok(())
    }
}

/// A simulated path: σ² and X series of length `n`, plus provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    /// Conditional variances `σ_t²` (post burn-in), every entry `≥ a_0`.
    pub sigma2: Vec<f64>,
    /// Observations `X_t = σ_t z_t` (post burn-in).
    pub x: Vec<f64>,
    /// Engine and configuration that produced the path.
    pub meta: PathMeta,
}

/// Provenance attached to a [`Path`].
#[derive(Clone, Debug, PartialEq)]
pub struct PathMeta {
    /// Producing engine.
    pub engine: Engine,
    /// Full configuration (including seed/stream, for reproducibility).
    pub config: SimConfig,
}

/// Windowed dot product `Σ_{jj=1..w} a[jj−1] · hist[t−jj]`, compensated when
/// the window is long enough for plain accumulation error to matter.
#[inline]
fn window_sum(a: &[f64], hist: &[f64], t: usize, w: usize) -> f64 {
    if w > COMPENSATED_SUM_THRESHOLD {
        let mut acc = CompensatedSum::new();
        for jj in 1..=w {
            acc.add(a[jj - 1] * hist[t - jj]);
        }
        acc.value()
    } else {
        let mut s = 0.0;
        for jj in 1..=w {
            s += a[jj - 1] * hist[t - jj];
        }
        s
    }
}

/// Simulate by direct recursion on the defining equation.
///
/// Draws `burn_in + n` innovations from the configured `(seed, stream)`
/// substream, iterates `σ_t² = a_0 + Σ_{j≤min(J,t)} a_j X_{t−j}²` from the
/// zero pre-sample, and returns the last `n` steps.
pub fn simulate_recursive(
    seq: &CoeffSequence,
    dist: &InnovationDist,
    cfg: &SimConfig,
) -> Result<Path> {
    cfg.validate(seq)?;
    let total = cfg.burn_in + cfg.n;
    let z = dist.sample_stream(total, cfg.seed, cfg.stream)?;
    let a = &seq.prefix()[..cfg.j];
    let mut x2 = vec![0.0; total];
    let mut sigma2 = vec![0.0; total];
    for t in 0..total {
        let w = cfg.j.min(t);
        let s = cfg.a0 + window_sum(a, &x2, t, w);
        if !(s <= cfg.overflow_cap) {
            return Err(ArchError::Overflow { index: t, cap: cfg.overflow_cap });
        }
        sigma2[t] = s;
        x2[t] = s * z[t] * z[t];
    }
    finish_path(sigma2, &z, cfg, Engine::Recursive)
}

/// Simulate by the truncated Volterra chaos expansion (dynamic program over
/// chaos levels; cost `O((burn_in + n) · J · chaos_order)`).
pub fn simulate_volterra(
    seq: &CoeffSequence,
    dist: &InnovationDist,
    cfg: &SimConfig,
) -> Result<Path> {
    let (sigma2, z, _) = volterra_dp(seq, dist, cfg, false)?;
    finish_path(sigma2, &z, cfg, Engine::Volterra)
}

/// Chaos-level decomposition from the Volterra engine.
///
/// `levels[k-1][i]` is `T_k(t)` at retained step `i` (post burn-in) for
/// chaos order `k = 1..=chaos_order`; `σ_t² = a_0 + Σ_k T_k(t)` up to the
/// truncation. Used to study the geometric decay of chaos contributions
/// against the theoretical `(A_p μ_p)^k` envelope.
#[derive(Clone, Debug, PartialEq)]
pub struct ChaosLevels {
    /// Per-order contributions, post burn-in.
    pub levels: Vec<Vec<f64>>,
    /// The reconstructed σ² (a_0 plus all levels), post burn-in.
    pub sigma2: Vec<f64>,
}

/// Run the Volterra dynamic program and return the per-order contributions.
pub fn volterra_chaos_levels(
    seq: &CoeffSequence,
    dist: &InnovationDist,
    cfg: &SimConfig,
) -> Result<ChaosLevels> {
    let (sigma2, _, levels) = volterra_dp(seq, dist, cfg, true)?;
    let burn = cfg.burn_in;
    Ok(ChaosLevels {
        levels: levels
            .into_iter()
            .map(|lv| lv[burn..].to_vec())
            .collect(),
        sigma2: sigma2[burn..].to_vec(),
    })
}

/// Shared Volterra dynamic program. Returns full-length σ², the innovation
/// draw, and (optionally) the full-length per-level arrays.
#[allow(clippy::type_complexity)]
fn volterra_dp(
    seq: &CoeffSequence,
    dist: &InnovationDist,
    cfg: &SimConfig,
    keep_levels: bool,
) -> Result<(Vec<f64>, Vec<f64>, Vec<Vec<f64>>)> {
    cfg.validate(seq)?;
    let total = cfg.burn_in + cfg.n;
    let z = dist.sample_stream(total, cfg.seed, cfg.stream)?;
    let xi: Vec<f64> = z.iter().map(|&v| v * v).collect();
    let a = &seq.prefix()[..cfg.j];

    // T_0(t) ≡ a_0; ξ-weighted level recursion confines every chain to the
    // zero pre-sample boundary automatically (j ≤ t keeps indices ≥ 0).
    let mut prev = vec![cfg.a0; total];
    let mut acc = vec![cfg.a0; total];
    let mut levels: Vec<Vec<f64>> = Vec::new();
    let mut weighted = vec![0.0; total]; // prev[t] · ξ_t, reused per level
    for _k in 1..=cfg.chaos_order {
        for t in 0..total {
            weighted[t] = prev[t] * xi[t];
        }
        let mut cur = vec![0.0; total];
        for (t, c) in cur.iter_mut().enumerate() {
            let w = cfg.j.min(t);
            *c = window_sum(a, &weighted, t, w);
        }
        for t in 0..total {
            acc[t] += cur[t];
            if !(acc[t] <= cfg.overflow_cap) {
                return Err(ArchError::Overflow { index: t, cap: cfg.overflow_cap });
            }
        }
        if keep_levels {
            levels.push(cur.clone());
        }
        prev = cur;
    }
    Ok((acc, z, levels))
}

/// Slice off the burn-in and assemble the output path.
fn finish_path(sigma2: Vec<f64>, z: &[f64], cfg: &SimConfig, engine: Engine) -> Result<Path> {
    let burn = cfg.burn_in;
    let n = cfg.n;
    let mut out_sigma2 = Vec::with_capacity(n);
    let mut out_x = Vec::with_capacity(n);
    for t in burn..burn + n {
        let s = sigma2[t];
        out_sigma2.push(s);
        out_x.push(s.sqrt() * z[t]);
    }
    Ok(Path {
        sigma2: out_sigma2,
        x: out_x,
        meta: PathMeta { engine, config: *cfg },
    })
}

/// Theoretical stationary moment bounds from the contraction criterion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentBounds {
    /// Moment order `p`.
    pub p: f64,
    /// Contraction factor `A_p μ_p` (strictly below 1 when bounds exist).
    pub contraction: f64,
    /// Bound on `E[(σ²)^p]`: `a_0^p / (1 − A_p μ_p)`.
    pub sigma2_bound: f64,
    /// Bound on `E[|X|^{2p}]`: `μ_p · a_0^p / (1 − A_p μ_p)`.
    pub x_bound: f64,
}

/// Compute the stationary moment bounds implied by the contraction
/// criterion at order `p` with baseline `a_0`.
///
/// Errors with [`ArchError::BoundUndefined`] when `A_p μ_p ≥ 1` (including
/// the `+∞` sentinel from a divergent `A_p`): no bound exists at that order.
pub fn theorem_moment_bounds(
    seq: &CoeffSequence,
    dist: &InnovationDist,
    p: f64,
    a0: f64,
) -> Result<MomentBounds> {
    if !(a0 > 0.0 && a0.is_finite()) {
        return Err(ArchError::Domain { name: "a0", value: a0, domain: "(0, inf)" });
    }
    let a_p = crate::coeffs::a_norm_p(seq, p, seq.j_max(), seq.has_tail_model())?;
    let contraction = a_p * dist.mu_p(p)?;
    if !(contraction < 1.0) {
        return Err(ArchError::BoundUndefined { p, value: contraction });
    }
    let sigma2_bound = a0.powf(p) / (1.0 - contraction);
    Ok(MomentBounds {
        p,
        contraction,
        sigma2_bound,
        x_bound: dist.mu_p(p)? * sigma2_bound,
    })
}

/// Chaos-remainder bound: the `p`-th moment of the tail beyond chaos order
/// `q` is controlled by `(A_p μ_p)^q · moment2p`, where `moment2p` bounds
/// `E[(σ²)^p]` (callers typically pass the [`theorem_moment_bounds`] value).
///
/// Errors with [`ArchError::BoundUndefined`] when `A_p μ_p ≥ 1` — the chaos
/// series has no geometric envelope at that order.
pub fn remainder_bound(
    seq: &CoeffSequence,
    dist: &InnovationDist,
    p: f64,
    q: usize,
    moment2p: f64,
) -> Result<f64> {
    if !(moment2p >= 0.0) {
        return Err(ArchError::Domain {
            name: "moment2p",
            value: moment2p,
            domain: "[0, inf)",
        });
    }
    let a_p = crate::coeffs::a_norm_p(seq, p, seq.j_max(), seq.has_tail_model())?;
    let r = a_p * dist.mu_p(p)?;
    if !(r < 1.0) {
        return Err(ArchError::BoundUndefined { p, value: r });
    }
    Ok(r.powi(q as i32) * moment2p)
}

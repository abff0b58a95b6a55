//! Innovation laws and their fractional moments.
//!
//! Every law is normalized to `E[z²] = 1` (the scale lives in the
//! coefficients, not the innovations). The existence theory consumes two
//! functionals: the fractional moments `μ_p = E[|z|^{2p}]` for `p ∈ (0,1]`
//! and the entropy-like moment `E[z² ln z²]`. All built-in kinds have closed
//! forms for both:
//!
//! | kind        | μ_p                                             | E[z² ln z²]                       |
//! |-------------|--------------------------------------------------|-----------------------------------|
//! | gaussian    | `2^p Γ(p+½)/Γ(½)`                                 | `2 − γ − ln 2`                    |
//! | studentT(ν) | `(ν−2)^p Γ(p+½)Γ(ν/2−p) / (Γ(½)Γ(ν/2))`          | `ln(ν−2) + ψ(3/2) − ψ(ν/2−1)`     |
//! | rademacher  | `1`                                               | `0`                               |
//! | twoPoint    | `w·v₁^p + (1−w)·v₂^p`                             | `w·v₁ ln v₁ + (1−w)·v₂ ln v₂`     |
//! | empirical   | sample mean of `(v²)^p`                           | sample mean of `v² ln v²`         |
//!
//! Student's t is rescaled by `√((ν−2)/ν)` so its variance is exactly 1;
//! `ν > 2` is required. A sixth, library-only kind `HeavyTailDeclared`
//! represents a law known only through the declarations `μ₁ = 1` and
//! `E[z² ln z²] = +∞`; it cannot be sampled and supports exactly the
//! boundary-criterion code paths that consume those two facts.

#[allow(unused_imports)]
use num_traits::Float;

use crate::math::{digamma, xlogx};
use crate::tolerances::UNIT_VARIANCE_TOL;
use crate::{ArchError, Result};
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};

/// Which innovation law, with its parameters.
#[derive(Clone, Debug, PartialEq)]
#[non_exhaustive]
pub enum InnovationKind {
    /// Standard normal.
    Gaussian,
    /// Student's t with `ν > 2` degrees of freedom, rescaled to unit variance.
    StudentT {
        /// Degrees of freedom.
        nu: f64,
    },
    /// `z = ±1` with equal probability (`z² ≡ 1`).
    Rademacher,
    /// `z² = v₁` with probability `w`, `z² = v₂` with probability `1−w`;
    /// the sign of `z` is symmetric and independent.
    TwoPoint {
        /// First value of `z²`.
        v1: f64,
        /// Second value of `z²`.
        v2: f64,
        /// Probability of `v1`.
        w: f64,
    },
    /// Resampling from a finite list (rescaled to unit second moment).
    Empirical {
        /// The rescaled sample values.
        values: Vec<f64>,
    },
    /// A law declared (not constructed) to satisfy `E[z²] = 1` and
    /// `E[z² ln z²] = +∞`. Not samplable.
    HeavyTailDeclared,
}

impl InnovationKind {
    /// Canonical distribution name used by configuration files and reports.
    pub fn name(&self) -> &'static str {
        match self {
            InnovationKind::Gaussian => "gaussian",
            InnovationKind::StudentT { .. } => "studentT",
            InnovationKind::Rademacher => "rademacher",
            InnovationKind::TwoPoint { .. } => "twoPoint",
            InnovationKind::Empirical { .. } => "empiricalSample",
            InnovationKind::HeavyTailDeclared => "heavyTailDeclared",
        }
    }
}

/// An innovation law with unit second moment.
///
/// `μ₁` is computed once at construction (the only moment consulted on hot
/// paths); other fractional moments are cheap closed forms evaluated on
/// demand.
#[derive(Clone, Debug, PartialEq)]
pub struct InnovationDist {
    kind: InnovationKind,
    mu1: f64,
}

impl InnovationDist {
    /// Standard normal innovations.
    pub fn gaussian() -> Self {
        Self { kind: InnovationKind::Gaussian, mu1: 1.0 }
    }

    /// Student's t innovations with `ν > 2`, rescaled to unit variance.
    pub fn student_t(nu: f64) -> Result<Self> {
        if !(nu > 2.0 && nu.is_finite()) {
            return Err(ArchError::Domain { name: "nu", value: nu, domain: "(2, inf)" });
        }
        Ok(Self { kind: InnovationKind::StudentT { nu }, mu1: 1.0 })
    }

    /// Rademacher innovations (`z = ±1`).
    pub fn rademacher() -> Self {
        Self { kind: InnovationKind::Rademacher, mu1: 1.0 }
    }

    /// Two-point law for `z²` (symmetric sign): requires
    /// `w ∈ [0,1]`, `v₁, v₂ ≥ 0`, and `w·v₁ + (1−w)·v₂ = 1` within
    /// [`UNIT_VARIANCE_TOL`].
    pub fn two_point(v1: f64, v2: f64, w: f64) -> Result<Self> {
        for (name, v) in [("v1", v1), ("v2", v2)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(ArchError::Domain { name, value: v, domain: "[0, inf)" });
            }
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(ArchError::Domain { name: "w", value: w, domain: "[0, 1]" });
        }
        let mu1 = w * v1 + (1.0 - w) * v2;
        if (mu1 - 1.0).abs() > UNIT_VARIANCE_TOL {
            return Err(ArchError::NormalizationViolated {
                name: "mu_1",
                value: mu1,
                tol: UNIT_VARIANCE_TOL,
            });
        }
        Ok(Self { kind: InnovationKind::TwoPoint { v1, v2, w }, mu1 })
    }

    /// Empirical law resampling from `values`, rescaled at construction so
    /// the second moment is exactly 1 (up to rounding).
    pub fn empirical(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(ArchError::Domain {
                name: "values.len()",
                value: 0.0,
                domain: "nonempty",
            });
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(ArchError::Domain { name: "values[i]", value: bad, domain: "finite" });
        }
        let ms = values.iter().map(|&v| v * v).sum::<f64>() / values.len() as f64;
        if !(ms > 0.0) {
            return Err(ArchError::Domain {
                name: "mean(values^2)",
                value: ms,
                domain: "(0, inf)",
            });
        }
        let scale = ms.sqrt();
        let values: Vec<f64> = values.into_iter().map(|v| v / scale).collect();
        let mu1 = values.iter().map(|&v| v * v).sum::<f64>() / values.len() as f64;
        Ok(Self { kind: InnovationKind::Empirical { values }, mu1 })
    }

    /// A law declared to have `μ₁ = 1` and `E[z² ln z²] = +∞`; supports only
    /// the operations that consume those two declarations.
    pub fn heavy_tail_declared() -> Self {
        Self { kind: InnovationKind::HeavyTailDeclared, mu1: 1.0 }
    }

    /// The law's kind and parameters.
    pub fn kind(&self) -> &InnovationKind {
        &self.kind
    }

    /// Second moment `μ₁ = E[z²]` (cached; 1 up to rounding by construction).
    pub fn mu1(&self) -> f64 {
        self.mu1
    }

    /// Fractional moment `μ_p = E[|z|^{2p}]` for `p ∈ (0, 1]`.
    ///
    /// Closed forms throughout; `p = 1` returns the cached `μ₁`. The
    /// declared-tail kind supports only `p = 1`.
    pub fn mu_p(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(ArchError::Domain { name: "p", value: p, domain: "(0, 1]" });
        }
        if p == 1.0 {
            return Ok(self.mu1);
        }
        let v = match &self.kind {
            InnovationKind::Gaussian => {
                // E[|z|^{2p}] = 2^p Γ(p + 1/2) / Γ(1/2)
                libm::exp(
                    p * core::f64::consts::LN_2 + libm::lgamma(p + 0.5) - libm::lgamma(0.5),
                )
            }
            InnovationKind::StudentT { nu } => {
                // E[|z|^{2p}] = (ν−2)^p Γ(p+1/2) Γ(ν/2−p) / (Γ(1/2) Γ(ν/2))
                libm::exp(
                    p * (nu - 2.0).ln() + libm::lgamma(p + 0.5) + libm::lgamma(nu / 2.0 - p)
                        - libm::lgamma(0.5)
                        - libm::lgamma(nu / 2.0),
                )
            }
            InnovationKind::Rademacher => 1.0,
            InnovationKind::TwoPoint { v1, v2, w } => {
                w * v1.powf(p) + (1.0 - w) * v2.powf(p)
            }
            InnovationKind::Empirical { values } => {
                values.iter().map(|&v| (v * v).powf(p)).sum::<f64>() / values.len() as f64
            }
            InnovationKind::HeavyTailDeclared => {
                return Err(ArchError::UnsupportedKind(
                    "mu_p for p < 1 is not declared for heavyTailDeclared",
                ))
            }
        };
        Ok(v)
    }

    /// Entropy-like moment `E[z² ln z²]` (closed form for every kind; `+∞`
    /// for the declared heavy-tail kind).
    ///
    /// This is the innovation half of the boundary (IARCH) criterion, and —
    /// by differentiation under the expectation — the innovation term of the
    /// one-sided derivative of `p ↦ ln μ_p` at `p = 1`.
    pub fn z2_log_z2(&self) -> f64 {
        match &self.kind {
            InnovationKind::Gaussian => {
                2.0 - crate::math::EULER_MASCHERONI - core::f64::consts::LN_2
            }
            InnovationKind::StudentT { nu } => {
                (nu - 2.0).ln() + digamma(1.5) - digamma(nu / 2.0 - 1.0)
            }
            InnovationKind::Rademacher => 0.0,
            InnovationKind::TwoPoint { v1, v2, w } => {
                w * xlogx(*v1) + (1.0 - w) * xlogx(*v2)
            }
            InnovationKind::Empirical { values } => {
                values.iter().map(|&v| xlogx(v * v)).sum::<f64>() / values.len() as f64
            }
            InnovationKind::HeavyTailDeclared => f64::INFINITY,
        }
    }

    /// Whether `E[z² ln z²]` is finite (false only for the declared kind).
    pub fn log_moment_finite(&self) -> bool {
        self.z2_log_z2().is_finite()
    }

    /// Draw `n` innovations with the default stream 0.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        self.sample_stream(n, seed, 0)
    }

    /// Draw `n` innovations from an independent `(seed, stream)` substream.
    ///
    /// Streams with the same seed are statistically independent (distinct
    /// ChaCha streams), so replicated simulations use `stream = replicate
    /// index` and stay reproducible under any parallel schedule.
    pub fn sample_stream(&self, n: usize, seed: u64, stream: u64) -> Result<Vec<f64>> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let mut out = Vec::with_capacity(n);
        match &self.kind {
            InnovationKind::Gaussian => {
                for _ in 0..n {
                    out.push(StandardNormal.sample(&mut rng));
                }
            }
            InnovationKind::StudentT { nu } => {
                let t = StudentT::new(*nu).expect("nu > 2 validated at construction");
                let scale = ((nu - 2.0) / nu).sqrt();
                for _ in 0..n {
                    let draw: f64 = t.sample(&mut rng);
                    out.push(scale * draw);
                }
            }
            InnovationKind::Rademacher => {
                for _ in 0..n {
                    out.push(if rng.random::<bool>() { 1.0 } else { -1.0 });
                }
            }
            InnovationKind::TwoPoint { v1, v2, w } => {
                let (s1, s2) = (v1.sqrt(), v2.sqrt());
                for _ in 0..n {
                    let mag = if rng.random::<f64>() < *w { s1 } else { s2 };
                    out.push(if rng.random::<bool>() { mag } else { -mag });
                }
            }
            InnovationKind::Empirical { values } => {
                for _ in 0..n {
                    out.push(values[rng.random_range(0..values.len())]);
                }
            }
            InnovationKind::HeavyTailDeclared => {
                return Err(ArchError::UnsupportedKind(
                    "heavyTailDeclared cannot be sampled",
                ))
            }
        }
        Ok(out)
    }
}

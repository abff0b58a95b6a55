//! Numerics for ARCH(∞) volatility models.
//!
//! An ARCH(∞) process is a real sequence `X_n = σ_n z_n` where the `z_n` are
//! i.i.d. innovations with `E[z²] = 1` and the conditional variance solves
//!
//! ```text
//! σ_n² = a_0 + Σ_{j≥1} a_j X_{n−j}²,        a_0 > 0, a_j ≥ 0.
//! ```
//!
//! The classical contraction argument needs `Σ a_j · E[z²] < 1` and breaks
//! down exactly on the *integrated* boundary `Σ a_j = 1` (IARCH), which
//! contains the widely fitted FIGARCH family. This crate implements the
//! fractional-moment existence theory that covers that boundary:
//!
//! * [`coeffs`] — coefficient sequences: FIGARCH(0,d,0) and FIGARCH(p,d,q)
//!   expansions, geometric and explicit sequences, the fractional norms
//!   `A_p = Σ a_j^p` and the entropy-like sum `Σ a_j ln a_j`, both with
//!   analytic corrections for the truncated power-law tail.
//! * [`innovations`] — innovation laws with unit second moment, their
//!   fractional moments `μ_p = E[|z|^{2p}]` and `E[z² ln z²]`.
//! * [`existence`] — the contraction criterion `A_p μ_p < 1` for some
//!   `p ∈ (0,1]`, the boundary (IARCH) criterion
//!   `Σ a_j ln a_j + E[z² ln z²] > 0`, and the critical FIGARCH memory
//!   parameter `d*` below which no stationary solution exists.
//! * [`simulate`] — exact-recursion and Volterra-chaos simulation engines.
//! * [`verify`] — Monte Carlo verification of the theoretical moment bounds,
//!   engine cross-validation, and divergence probes for rejected inputs.
//!
//! The crate is `no_std`-compatible (`alloc` required); the default `std`
//! feature only switches float intrinsics and error-trait integration.
//!
//! # Example
//!
//! ```
//! use archinf_core::{coeffs::CoeffSequence, existence, innovations::InnovationDist};
//!
//! // FIGARCH(0, d, 0) with d = 0.9 and gaussian innovations: an IARCH
//! // process (Σ a_j = 1) that nevertheless has a stationary solution.
//! let seq = CoeffSequence::figarch_0d0(0.9, 100_000).unwrap();
//! let dist = InnovationDist::gaussian();
//! let report = existence::check_cs(&seq, &dist).unwrap();
//! assert_eq!(report.verdict, existence::Verdict::ExistsByCs);
//! assert!(report.p_star.unwrap() < 1.0);
//! ```

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]
#![warn(missing_docs)]
// Validation deliberately writes `!(x > 0.0)` instead of `x <= 0.0`: the
// negated form is false for NaN, so non-finite garbage is rejected by the
// same branch as out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod coeffs;
pub mod existence;
pub mod innovations;
pub mod math;
pub mod quad;
pub mod series;
pub mod simulate;
pub mod tolerances;
pub mod verify;

use alloc::string::String;

/// Crate-wide error type.
///
/// Variants are grouped by the module that raises them; all carry enough
/// context to be reported verbatim by a CLI.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum ArchError {
    /// A scalar parameter lies outside its documented domain.
    #[error("parameter {name} = {value} outside its domain {domain}")]
    Domain {
        /// Parameter name as written in the API.
        name: &'static str,
        /// Offending value.
        value: f64,
        /// Human-readable domain, e.g. `"(0, 1)"`.
        domain: &'static str,
    },

    /// A coefficient expansion produced a negative value beyond tolerance.
    #[error("coefficient a_{index} = {value:e} is negative beyond tolerance")]
    NegativeCoefficient {
        /// 1-based lag index of the offending coefficient.
        index: usize,
        /// The negative value.
        value: f64,
    },

    /// A lag-polynomial root lies inside or on the closed unit disk.
    #[error("lag polynomial root of modulus {modulus} lies inside the closed unit disk")]
    RootInUnitDisk {
        /// Modulus of the offending root.
        modulus: f64,
    },

    /// Power-series division by a series with zero constant term.
    #[error("series division requires a nonzero constant term")]
    ZeroConstantTerm,

    /// An operation asked for more terms than the sequence caches.
    #[error("requested J = {requested} exceeds the cached horizon J_max = {cached}")]
    HorizonExceeded {
        /// Number of terms requested.
        requested: usize,
        /// Number of terms available.
        cached: usize,
    },

    /// A tail correction was requested but the sequence has no tail model.
    #[error("tail correction requested but the sequence declares no tail exponent")]
    TailUnavailable,

    /// The operation is not defined for this innovation kind.
    #[error("operation not supported for this innovation kind: {0}")]
    UnsupportedKind(&'static str),

    /// An IARCH-only operation was applied to a non-IARCH input.
    #[error("IARCH normalization violated: {name} = {value} differs from 1 by more than {tol:e}")]
    NormalizationViolated {
        /// Which normalization failed (`"A_1"` or `"mu_1"`).
        name: &'static str,
        /// The offending value.
        value: f64,
        /// Tolerance that was applied.
        tol: f64,
    },

    /// A root/threshold search could not bracket a sign change.
    #[error("bracketing failure: {0}")]
    BracketFailure(String),

    /// σ² exceeded the configured overflow cap during simulation.
    #[error(
        "sigma^2 exceeded the overflow cap {cap:e} at step {index}; \
         the parameter set is likely non-stationary"
    )]
    Overflow {
        /// 0-based step (including burn-in) at which the cap was exceeded.
        index: usize,
        /// The configured cap.
        cap: f64,
    },

    /// The theoretical moment bound does not exist because `A_p μ_p ≥ 1`.
    #[error("moment bound undefined: A_p mu_p = {value} >= 1 at p = {p}")]
    BoundUndefined {
        /// Moment order at which the bound was requested.
        p: f64,
        /// Value of `A_p μ_p` (may be `+∞`).
        value: f64,
    },

    /// A verification routine requires an existence verdict first.
    #[error("existence not established: {0}")]
    ExistenceNotEstablished(String),

    /// Too few batches/samples for a meaningful standard error.
    #[error("insufficient samples: {got} batches, need at least {need}")]
    InsufficientSamples {
        /// Batches available.
        got: usize,
        /// Batches required.
        need: usize,
    },

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    QuadratureNonconvergence(&'static str),

    /// Estimator inputs come from incompatible simulation runs.
    #[error("estimator inputs come from mismatched simulation configurations")]
    MismatchedPaths,
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, ArchError>;

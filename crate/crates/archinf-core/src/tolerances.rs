//! Centralized numeric tolerances.
//!
//! Every magic threshold used by the library lives here with a justification,
//! so reviews and reproductions have a single place to audit. Functions take
//! tolerances from this module unless the caller supplies one explicitly.

/// Magnitude below which a negative expansion coefficient is treated as
/// floating-point noise and clamped to zero. FIGARCH(p,d,q) coefficients are
/// produced by power-series division whose rounding error per term is a few
/// ulps of the running partial sums; 1e-12 is orders of magnitude above that
/// noise floor yet far below any genuine violation of nonnegativity.
pub const NEGATIVITY_TOL: f64 = 1e-12;

/// Lag-polynomial roots must have modulus strictly greater than `1 + MARGIN`.
/// The margin absorbs root-finder error (well under 1e-12 for the low-degree
/// polynomials used here) while rejecting genuinely non-invertible inputs.
pub const UNIT_DISK_MARGIN: f64 = 1e-9;

/// Acceptance window for the integrated normalizations `|A_1 − 1|` and
/// `|μ_1 − 1|` required by the boundary (IARCH) criterion. The window must
/// dominate series-truncation error at the default horizon: for FIGARCH the
/// tail-corrected `A_1` at `J = 10⁶` is exact to ~1e-8, so 1e-4 accepts every
/// intended IARCH input and rejects anything meaningfully off the boundary.
pub const IARCH_NORM_TOL: f64 = 1e-4;

/// Innovation laws must have unit second moment to this accuracy at
/// construction time. Closed-form kinds satisfy it to a few ulps; the
/// two-point kind is validated against it, and empirical samples are
/// rescaled so it holds exactly up to rounding.
pub const UNIT_VARIANCE_TOL: f64 = 1e-9;

/// Existence margin: a verdict of "exists" requires the minimized objective
/// `φ(p) = ln A_p + ln μ_p` to fall below `−EXISTENCE_MARGIN`, keeping the
/// conclusion stable under summation rounding (~1e-12 relative) and
/// golden-section placement error.
pub const EXISTENCE_MARGIN: f64 = 1e-8;

/// The φ search domain starts this far above `q_min = 1/(1+d)`, the order at
/// which `A_q` diverges for a power-law tail. At `q_min` itself the tail
/// correction has a pole; the offset keeps the search inside the domain where
/// `A_q` is finite and the objective is smooth.
pub const Q_MIN_OFFSET: f64 = 1e-3;

/// Interval tolerance for the golden-section minimization of φ. The objective
/// is evaluated to ~1e-12 relative accuracy, and curvature near the minimum
/// is O(1), so 1e-6 placement gives φ-values accurate to ~1e-12 — far inside
/// [`EXISTENCE_MARGIN`].
pub const GOLDEN_SECTION_TOL: f64 = 1e-6;

/// Default overflow cap on σ² during simulation. At 1e300 the square root and
/// the multiplication by z² still cannot reach `f64::MAX` (~1.8e308) in one
/// step for any plausible innovation draw, so the cap fires before infinities
/// or NaNs can propagate into output arrays.
pub const OVERFLOW_CAP: f64 = 1e300;

/// Absolute tolerance for adaptive Gauss–Kronrod quadrature.
pub const QUAD_ABS_TOL: f64 = 1e-10;

/// Inner sums longer than this use Neumaier-compensated accumulation.
/// Below it, plain summation error (n·ε per term magnitude) stays under
/// ~1e-12 relative and the branch-free loop is measurably faster.
pub const COMPENSATED_SUM_THRESHOLD: usize = 10_000;

/// Monte Carlo acceptance margin, in standard errors: an estimate passes a
/// theoretical bound when `estimate ≤ bound + MC_SE_MARGIN · SE`. Four
/// standard errors keep the false-failure probability per comparison below
/// ~3e-5 under the CLT.
pub const MC_SE_MARGIN: f64 = 4.0;

/// Minimum number of batches for a batch-means standard error. With fewer
/// than 30 roughly independent batches the SE itself is too noisy to support
/// the ±4·SE acceptance rule.
pub const MIN_BATCHES: usize = 30;

/// Engine-equivalence check: recursive and Volterra σ² paths must agree to
/// this relative tolerance on short windows, where the chaos expansion is
/// exact and only summation-order rounding differs.
pub const ENGINE_EQUIV_REL_TOL: f64 = 1e-9;

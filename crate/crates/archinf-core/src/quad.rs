//! Adaptive Gauss–Kronrod quadrature (7-point Gauss / 15-point Kronrod).
//!
//! All built-in innovation laws have closed-form fractional moments, so the
//! library itself never integrates numerically; this module is the designated
//! fallback for density-backed innovation kinds and is exercised against the
//! closed forms in tests. The half-line variant applies the rational
//! substitution `x = a + t/(1−t)`, which composes well with integrands that
//! decay at least exponentially (all moment integrands here do).

#[allow(unused_imports)]
use num_traits::Float;

use crate::{ArchError, Result};
use alloc::vec::Vec;

/// Kronrod abscissae for the positive half interval (K15), center last.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

/// Kronrod weights matching [`XGK`].
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

/// Gauss-7 weights for the odd-index abscissae of [`XGK`], center last.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    /// Integral estimate.
    pub value: f64,
    /// Accumulated error estimate (sum of per-interval `|K15 − G7|`).
    pub error: f64,
    /// Number of integrand evaluations.
    pub evaluations: usize,
}

/// One K15/G7 evaluation on `[a, b]`: returns `(kronrod, |kronrod − gauss|)`.
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let fsum = f(c - x) + f(c + x);
        resk += WGK[i] * fsum;
        if i % 2 == 1 {
            resg += WG[i / 2] * fsum;
        }
    }
    (resk * h, (resk - resg).abs() * h)
}

/// Adaptive integration of `f` over the finite interval `[a, b]` to absolute
/// tolerance `abs_tol`.
///
/// Bisects the interval with the largest error estimate until the total
/// estimate falls below the tolerance. Fails with
/// [`ArchError::QuadratureNonconvergence`] if the subdivision budget is
/// exhausted or an interval collapses to rounding width while still over
/// tolerance (a symptom of a non-integrable singularity).
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(ArchError::Domain {
            name: "interval",
            value: b - a,
            domain: "finite, a < b",
        });
    }
    const MAX_INTERVALS: usize = 4_096;
    let (v, e) = gk15(&mut f, a, b);
    let mut parts: Vec<(f64, f64, f64, f64)> = alloc::vec![(a, b, v, e)];
    let mut evals = 15usize;
    loop {
        let total_err: f64 = parts.iter().map(|p| p.3).sum();
        if total_err <= abs_tol {
            let value = crate::math::sum_compensated(
                &parts.iter().map(|p| p.2).collect::<Vec<_>>(),
            );
            return Ok(Quadrature { value, error: total_err, evaluations: evals });
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(ArchError::QuadratureNonconvergence(
                "subdivision budget exhausted before reaching tolerance",
            ));
        }
        // Split the worst interval.
        let (idx, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap_or(core::cmp::Ordering::Equal))
            .expect("parts nonempty");
        let (pa, pb, _, perr) = parts.swap_remove(idx);
        let mid = 0.5 * (pa + pb);
        if !(mid > pa && mid < pb) {
            return Err(ArchError::QuadratureNonconvergence(
                "interval collapsed to rounding width while over tolerance",
            ));
        }
        let (v1, e1) = gk15(&mut f, pa, mid);
        let (v2, e2) = gk15(&mut f, mid, pb);
        evals += 30;
        // Guard against error estimates that refuse to shrink (oscillatory
        // or pathological integrands).
        if e1 + e2 > 4.0 * perr && perr > 0.0 && parts.len() > 64 {
            return Err(ArchError::QuadratureNonconvergence(
                "error estimate diverging under refinement",
            ));
        }
        parts.push((pa, mid, v1, e1));
        parts.push((mid, pb, v2, e2));
    }
}

/// Adaptive integration of `f` over `[a, +∞)` via `x = a + t/(1−t)`.
///
/// The integrand must decay fast enough that `f(x)·(x−a+1)²` is integrable —
/// true for every moment integrand against sub-exponential or polynomial-tail
/// densities handled here with `p < ν/2`.
pub fn integrate_half_line<F: FnMut(f64) -> f64>(mut f: F, a: f64, abs_tol: f64) -> Result<Quadrature> {
    // t = 1 is never evaluated: Kronrod nodes are interior, and the collapse
    // guard in `integrate` stops runaway refinement near the endpoint.
    integrate(
        move |t: f64| {
            let om = 1.0 - t;
            let x = a + t / om;
            f(x) / (om * om)
        },
        0.0,
        1.0 - 1e-14,
        abs_tol,
    )
}

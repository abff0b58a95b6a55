//! Scalar numerics shared across the crate: compensated summation, the
//! digamma function, golden-section minimization, and bisection.

#[allow(unused_imports)]
use num_traits::Float;

use crate::{ArchError, Result};
use alloc::format;

/// Euler–Mascheroni constant γ.
pub const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;

/// Neumaier-compensated accumulator (Kahan summation with the improved
/// branch that also captures error when the addend dominates the sum).
///
/// Worst-case error is O(ε) independent of the number of terms, versus
/// O(n·ε) for plain summation — required for the 10⁶–10⁷-term series sums
/// whose downstream tolerances are 1e-8 and tighter.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    /// New accumulator at zero.
    pub fn new() -> Self {
        Self::default()
    }

    /// Add one term.
    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    /// Current compensated value.
    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of a slice in index order.
pub fn sum_compensated(xs: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for &x in xs {
        acc.add(x);
    }
    acc.value()
}

/// `x · ln x` extended continuously by 0 at `x = 0`.
///
/// Used for entropy-like sums `Σ a_j ln a_j` where zero coefficients
/// contribute nothing.
#[inline]
pub fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Digamma function ψ(x) = d/dx ln Γ(x).
///
/// Upward recurrence `ψ(x) = ψ(x+1) − 1/x` shifts the argument to `x ≥ 10`,
/// where the Bernoulli asymptotic series through `x⁻¹⁴` is accurate to well
/// under 1e-15 relative. Non-positive integers (the poles) return NaN;
/// other non-positive arguments use the reflection formula.
pub fn digamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 {
        if x == x.floor() {
            return f64::NAN;
        }
        // ψ(1−x) − ψ(x) = π·cot(πx)
        let pi = core::f64::consts::PI;
        return digamma(1.0 - x) - pi / libm::tan(pi * x);
    }
    let mut acc = 0.0;
    let mut x = x;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let t = inv * inv;
    // ψ(x) ≈ ln x − 1/(2x) − Σ_{n≥1} B_{2n}/(2n·x^{2n})
    let series = t
        * (1.0 / 12.0
            - t * (1.0 / 120.0
                - t * (1.0 / 252.0
                    - t * (1.0 / 240.0
                        - t * (1.0 / 132.0 - t * (691.0 / 32760.0 - t * (1.0 / 12.0)))))));
    acc + x.ln() - 0.5 * inv - series
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
///
/// Returns the best evaluated point and its value once the bracketing
/// interval has shrunk below `tol`. `+∞` objective values are handled (the
/// search moves away from them), so callers may use an infinite sentinel for
/// out-of-domain regions at the interval edge.
pub fn golden_section_min<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> (f64, f64) {
    debug_assert!(b > a && tol > 0.0);
    const INVPHI: f64 = 0.618_033_988_749_894_8; // (√5 − 1)/2
    const INVPHI2: f64 = 1.0 - INVPHI;
    let (mut a, mut b) = (a, b);
    let mut h = b - a;
    let mut c = a + INVPHI2 * h;
    let mut d = a + INVPHI * h;
    let mut fc = f(c);
    let mut fd = f(d);
    while h > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            h = b - a;
            c = a + INVPHI2 * h;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            h = b - a;
            d = a + INVPHI * h;
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Bisection on a sign change: `f(lo)` and `f(hi)` must have opposite signs.
///
/// Returns the midpoint of the final bracket once its width is below `tol`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let mut flo = f(lo);
    let fhi = f(hi);
    if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() {
        return Err(ArchError::BracketFailure(format!(
            "no sign change on [{lo}, {hi}]: f(lo) = {flo}, f(hi) = {fhi}"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::{LN_2, PI};

    #[test]
    fn compensated_sum_beats_plain_on_cancellation() {
        // 1 followed by 1e16 copies of 1e-16 sums to 2 exactly under
        // compensation; plain summation loses every small term.
        let mut acc = CompensatedSum::new();
        acc.add(1.0);
        for _ in 0..10_000 {
            acc.add(1e-16);
        }
        assert_relative_eq!(acc.value(), 1.0 + 1e-12, max_relative = 1e-15);
    }

    #[test]
    fn compensated_sum_handles_large_addend() {
        let mut acc = CompensatedSum::new();
        acc.add(1e-16);
        acc.add(1.0);
        acc.add(-1.0);
        assert_eq!(acc.value(), 1e-16);
    }

    #[test]
    fn xlogx_at_zero_and_one() {
        assert_eq!(xlogx(0.0), 0.0);
        assert_eq!(xlogx(1.0), 0.0);
        assert_relative_eq!(xlogx(0.5), -0.5 * LN_2, max_relative = 1e-15);
    }

    #[test]
    fn digamma_known_values() {
        // ψ(1) = −γ, ψ(1/2) = −γ − 2 ln 2, ψ(3/2) = 2 − γ − 2 ln 2,
        // ψ(3) = 3/2 − γ, ψ(1/4) = −γ − 3 ln 2 − π/2, ψ(3/4) = −γ − 3 ln 2 + π/2.
        let g = EULER_MASCHERONI;
        assert_relative_eq!(digamma(1.0), -g, max_relative = 1e-14);
        assert_relative_eq!(digamma(0.5), -g - 2.0 * LN_2, max_relative = 1e-14);
        assert_relative_eq!(digamma(1.5), 2.0 - g - 2.0 * LN_2, max_relative = 1e-13);
        assert_relative_eq!(digamma(3.0), 1.5 - g, max_relative = 1e-14);
        assert_relative_eq!(digamma(0.25), -g - 3.0 * LN_2 - PI / 2.0, max_relative = 1e-14);
        assert_relative_eq!(digamma(0.75), -g - 3.0 * LN_2 + PI / 2.0, max_relative = 1e-13);
    }

    #[test]
    fn digamma_recurrence_and_reflection() {
        for i in 1..200 {
            let x = 0.05 * i as f64 + 0.013;
            assert_relative_eq!(
                digamma(x + 1.0),
                digamma(x) + 1.0 / x,
                max_relative = 1e-12,
                epsilon = 1e-12
            );
        }
        // reflection at a negative non-integer argument
        let x = -1.3;
        assert_relative_eq!(
            digamma(1.0 - x) - digamma(x),
            PI / libm::tan(PI * x),
            max_relative = 1e-12
        );
    }

    #[test]
    fn digamma_poles_are_nan() {
        assert!(digamma(0.0).is_nan());
        assert!(digamma(-3.0).is_nan());
    }

    #[test]
    fn golden_section_finds_quadratic_minimum() {
        let (x, fx) = golden_section_min(|x| (x - 0.3) * (x - 0.3) + 2.0, 0.0, 1.0, 1e-9);
        assert_relative_eq!(x, 0.3, epsilon = 1e-7);
        assert_relative_eq!(fx, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn golden_section_with_boundary_minimum() {
        // Monotone decreasing: minimum at the right endpoint.
        let (x, _) = golden_section_min(|x| -x, 0.0, 1.0, 1e-9);
        assert!(x > 1.0 - 1e-6);
    }

    #[test]
    fn golden_section_escapes_infinite_edge() {
        let f = |x: f64| if x < 0.2 { f64::INFINITY } else { (x - 0.5) * (x - 0.5) };
        let (x, fx) = golden_section_min(f, 0.0, 1.0, 1e-9);
        assert_relative_eq!(x, 0.5, epsilon = 1e-6);
        assert!(fx < 1e-12);
    }

    #[test]
    fn bisect_finds_root() {
        let x = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-12).unwrap();
        assert_relative_eq!(x, core::f64::consts::SQRT_2, epsilon = 1e-11);
    }

    #[test]
    fn bisect_rejects_same_sign() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-9),
            Err(crate::ArchError::BracketFailure(_))
        ));
    }
}

//! Truncated power series over `f64` and polynomial root location.
//!
//! FIGARCH(p,d,q) coefficient expansions are quotients of short lag
//! polynomials against a fractional-difference series; this module supplies
//! the arithmetic (truncated Cauchy product and long division) and the
//! Durand–Kerner root finder used to verify invertibility of the lag
//! polynomials (all roots strictly outside the closed unit disk).

#[allow(unused_imports)]
use num_traits::Float;

use crate::{ArchError, Result};
use alloc::vec::Vec;
use num_complex::Complex64;

/// A power series `c₀ + c₁ z + c₂ z² + …` truncated after finitely many
/// coefficients. `coeffs[k]` is the coefficient of `z^k`; signs are stored
/// as written (e.g. `[1.0, -2.0]` is `1 − 2z`).
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<f64>,
}

impl PowerSeries {
    /// Build a series from its coefficients (constant term first).
    ///
    /// Errors if the list is empty or contains a non-finite value.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(ArchError::Domain {
                name: "coeffs.len()",
                value: 0.0,
                domain: "nonempty",
            });
        }
        if let Some(&bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(ArchError::Domain {
                name: "coeffs[k]",
                value: bad,
                domain: "finite",
            });
        }
        Ok(Self { coeffs })
    }

    /// The constant series `1`.
    pub fn one() -> Self {
        Self { coeffs: alloc::vec![1.0] }
    }

    /// Number of stored coefficients (truncation length).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Always false: construction rejects empty coefficient lists.
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `z^k`, zero beyond the stored length.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// All stored coefficients, constant term first.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Cauchy product truncated to `len` coefficients.
    pub fn mul_trunc(&self, other: &Self, len: usize) -> Self {
        let mut out = alloc::vec![0.0; len];
        for (i, &a) in self.coeffs.iter().enumerate().take(len) {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Long division `self / other` truncated to `len` coefficients.
    ///
    /// Errors with [`ArchError::ZeroConstantTerm`] when `other` has a zero
    /// constant term (the quotient is then not a power series).
    pub fn div_trunc(&self, other: &Self, len: usize) -> Result<Self> {
        let b0 = other.coeff(0);
        if b0 == 0.0 {
            return Err(ArchError::ZeroConstantTerm);
        }
        let mut q = alloc::vec![0.0; len];
        for k in 0..len {
            let mut acc = self.coeff(k);
            // subtract Σ_{i=1..k} b_i · q_{k−i}
            let imax = k.min(other.coeffs.len().saturating_sub(1));
            for i in 1..=imax {
                let b = other.coeffs[i];
                if b != 0.0 {
                    acc -= b * q[k - i];
                }
            }
            q[k] = acc / b0;
        }
        Ok(Self { coeffs: q })
    }

    /// Evaluate at a real point by Horner's rule.
    pub fn eval(&self, z: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Roots of the polynomial formed by the stored coefficients (trailing
    /// zeros trimmed). Empty when the trimmed degree is zero.
    pub fn roots(&self) -> Vec<Complex64> {
        polynomial_roots(&self.coeffs)
    }

    /// Smallest root modulus, or `None` for a (trimmed) constant polynomial.
    pub fn min_root_modulus(&self) -> Option<f64> {
        self.roots()
            .into_iter()
            .map(|r| r.norm())
            .min_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal))
    }
}

/// All complex roots of `c₀ + c₁ z + … + c_n z^n` by the Durand–Kerner
/// simultaneous iteration.
///
/// Trailing zero coefficients are trimmed first; a constant polynomial has
/// no roots. Convergence is quadratic for simple roots; clustered roots
/// still resolve to the ~1e-10 accuracy needed for unit-disk checks on the
/// low-degree lag polynomials this crate handles.
pub fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut n = coeffs.len();
    while n > 0 && coeffs[n - 1] == 0.0 {
        n -= 1;
    }
    if n <= 1 {
        return Vec::new();
    }
    let deg = n - 1;
    let lead = coeffs[n - 1];
    let monic: Vec<f64> = coeffs[..n].iter().map(|&c| c / lead).collect();

    // Cauchy bound: every root has modulus < 1 + max |mᵢ|.
    let bound = 1.0 + monic[..deg].iter().fold(0.0_f64, |m, &c| m.max(c.abs()));
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0); // monic leading coefficient
        for &c in monic[..deg].iter().rev() {
            acc = acc * z + c;
        }
        acc
    };

    // Initial guesses on a circle inside the Cauchy bound, rotated off the
    // real axis so real-coefficient symmetry cannot trap the iteration.
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let ang = 2.0 * core::f64::consts::PI * (k as f64 + 0.354) / deg as f64;
            Complex64::from_polar(0.65 * bound + 0.05, ang)
        })
        .collect();

    for _ in 0..500 {
        let mut worst = 0.0_f64;
        for k in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != k {
                    denom *= z[k] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                // coincident iterates: nudge apart and retry next sweep
                z[k] += Complex64::new(1e-8, 2e-8);
                worst = f64::MAX;
                continue;
            }
            let dz = eval(z[k]) / denom;
            z[k] -= dz;
            worst = worst.max(dz.norm() / (1.0 + z[k].norm()));
        }
        if worst < 1e-14 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn construction_rejects_empty_and_nonfinite() {
        assert!(PowerSeries::new(alloc::vec![]).is_err());
        assert!(PowerSeries::new(alloc::vec![1.0, f64::NAN]).is_err());
        assert!(PowerSeries::new(alloc::vec![1.0, -2.0]).is_ok());
    }

    #[test]
    fn geometric_series_by_division() {
        // 1 / (1 − z) = 1 + z + z² + …
        let one = PowerSeries::one();
        let denom = PowerSeries::new(alloc::vec![1.0, -1.0]).unwrap();
        let q = one.div_trunc(&denom, 6).unwrap();
        assert_eq!(q.coeffs(), &[1.0; 6]);
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = PowerSeries::new(alloc::vec![2.0, -0.3, 0.07, 1.5]).unwrap();
        let b = PowerSeries::new(alloc::vec![1.0, 0.4, -0.9]).unwrap();
        let prod = a.mul_trunc(&b, 10);
        let back = prod.div_trunc(&b, 10).unwrap();
        for k in 0..10 {
            assert_relative_eq!(back.coeff(k), a.coeff(k), epsilon = 1e-12);
        }
    }

    #[test]
    fn division_by_zero_constant_term_fails() {
        let a = PowerSeries::one();
        let b = PowerSeries::new(alloc::vec![0.0, 1.0]).unwrap();
        assert_eq!(a.div_trunc(&b, 4), Err(ArchError::ZeroConstantTerm));
    }

    #[test]
    fn eval_horner() {
        let s = PowerSeries::new(alloc::vec![1.0, -2.0, 3.0]).unwrap();
        assert_relative_eq!(s.eval(0.5), 1.0 - 1.0 + 0.75, epsilon = 1e-15);
    }

    #[test]
    fn coeff_beyond_length_is_zero() {
        let s = PowerSeries::one();
        assert_eq!(s.coeff(7), 0.0);
    }

    #[test]
    fn linear_root() {
        // 1 − 2z has its root at z = 0.5.
        let r = polynomial_roots(&[1.0, -2.0]);
        assert_eq!(r.len(), 1);
        assert_relative_eq!(r[0].re, 0.5, epsilon = 1e-12);
        assert!(r[0].im.abs() < 1e-12);
    }

    #[test]
    fn complex_pair_on_unit_circle() {
        // 1 + z + z²: primitive cube roots of unity, modulus exactly 1.
        let s = PowerSeries::new(alloc::vec![1.0, 1.0, 1.0]).unwrap();
        let m = s.min_root_modulus().unwrap();
        assert_relative_eq!(m, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn factored_quadratic() {
        // (1 − z/2)(1 − z/4) = 1 − 0.75 z + 0.125 z²: roots 2 and 4.
        let mut mods: Vec<f64> = polynomial_roots(&[1.0, -0.75, 0.125])
            .into_iter()
            .map(|r| r.norm())
            .collect();
        mods.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_relative_eq!(mods[0], 2.0, epsilon = 1e-9);
        assert_relative_eq!(mods[1], 4.0, epsilon = 1e-9);
    }

    #[test]
    fn quintic_recovers_known_roots() {
        // ∏ (1 − z/r) for r in {1.5, −2, 3, 5, −8}, expanded.
        let roots = [1.5, -2.0, 3.0, 5.0, -8.0];
        let mut poly = PowerSeries::one();
        for &r in &roots {
            let f = PowerSeries::new(alloc::vec![1.0, -1.0 / r]).unwrap();
            poly = poly.mul_trunc(&f, 6);
        }
        let mut found: Vec<f64> = poly.roots().iter().map(|z| z.re).collect();
        found.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut expect = roots;
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (f, e) in found.iter().zip(expect.iter()) {
            assert_relative_eq!(f, e, epsilon = 1e-8);
        }
    }

    #[test]
    fn trailing_zeros_trimmed_and_constant_has_no_roots() {
        assert_eq!(polynomial_roots(&[1.0, -2.0, 0.0, 0.0]).len(), 1);
        assert!(polynomial_roots(&[3.0]).is_empty());
        assert!(polynomial_roots(&[3.0, 0.0]).is_empty());
    }
}

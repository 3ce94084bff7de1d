//! Special functions: complex log-gamma, Hurwitz zeta, Stieltjes constants.
//!
//! Log-gamma uses the Lanczos approximation (g = 7, 9 coefficients, the GSL
//! set) with the reflection formula for Re z < 1/2. Branch cuts are of no
//! concern downstream: ratios of gamma factors are always re-exponentiated,
//! so 2πi ambiguities cancel.
//!
//! Hurwitz zeta `ζ(s, a)` uses Euler–Maclaurin with 12 explicit terms and
//! Bernoulli corrections through B₁₂, accurate to ~1e−13 for the moderate
//! |s| this crate needs (contours near s = 1 and s = −1).

use num_complex::Complex64;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// First Stieltjes constant γ₁.
pub const STIELTJES_1: f64 = -0.072_815_845_483_676_72;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Principal-branch log-gamma for complex arguments.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Reflection: ln Γ(z) = ln(π / sin(πz)) − ln Γ(1−z).
        let pi = std::f64::consts::PI;
        let s = (Complex64::new(pi, 0.0) * z).sin();
        return Complex64::new(pi, 0.0).ln() - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let zm1 = z - 1.0;
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (zm1 + i as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    let half_ln_two_pi = 0.918_938_533_204_672_7;
    (zm1 + 0.5) * t.ln() - t + half_ln_two_pi + acc.ln()
}

/// Γ(z) through [`ln_gamma`].
pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

// B₂, B₄, …, B₁₂.
const BERNOULLI_EVEN: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

/// Hurwitz zeta `ζ(s, a) = Σ_{k≥0} (k+a)^{-s}` for a > 0, s ≠ 1.
///
/// Euler–Maclaurin with M = 12 explicit terms.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Complex64 {
    assert!(a > 0.0, "hurwitz_zeta requires a > 0, got {a}");
    const M: usize = 12;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..M {
        acc += (-s * (a + k as f64).ln()).exp();
    }
    let am = a + M as f64;
    let ln_am = am.ln();
    // Tail integral + half correction.
    acc += ((1.0 - s) * ln_am).exp() / (s - 1.0);
    acc += (-s * ln_am).exp() * 0.5;
    // Bernoulli corrections: B_{2j}/(2j)! · s(s+1)…(s+2j−2) · am^{-s-2j+1}.
    let mut poch = s; // rising factorial with 2j−1 factors
    let mut fact = 1.0f64; // (2j)!
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let two_j = 2 * (j + 1);
        fact *= ((two_j - 1) * two_j) as f64;
        let term = (b / fact) * poch * ((-s - (two_j as f64 - 1.0)) * ln_am).exp();
        acc += term;
        poch *= (s + (two_j as f64 - 1.0)) * (s + two_j as f64);
    }
    acc
}

/// Riemann zeta on the same footing (`ζ(s) = ζ(s, 1)`).
pub fn riemann_zeta(s: Complex64) -> Complex64 {
    hurwitz_zeta(s, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_on_reals() {
        assert_relative_eq!(
            gamma(Complex64::new(5.0, 0.0)).re,
            24.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            gamma(Complex64::new(0.5, 0.0)).re,
            std::f64::consts::PI.sqrt(),
            max_relative = 1e-12
        );
        // Reflection path.
        assert_relative_eq!(
            gamma(Complex64::new(-0.5, 0.0)).re,
            -2.0 * std::f64::consts::PI.sqrt(),
            max_relative = 1e-11
        );
    }

    #[test]
    fn gamma_recurrence_complex() {
        // Γ(z+1) = z Γ(z) along a vertical line.
        for k in 0..20 {
            let z = Complex64::new(0.75, -30.0 + 3.0 * k as f64);
            let lhs = ln_gamma(z + 1.0);
            let rhs = ln_gamma(z) + z.ln();
            // Compare exponentials (branch-insensitive).
            assert!((lhs.exp() - rhs.exp()).norm() / rhs.exp().norm() < 1e-10);
        }
    }

    #[test]
    fn gamma_modulus_large_imaginary() {
        // |Γ(1/2 + iτ)|² = π / cosh(πτ).
        let tau = 40.0;
        let g = gamma(Complex64::new(0.5, tau));
        let expect = (std::f64::consts::PI / (std::f64::consts::PI * tau).cosh()).sqrt();
        assert_relative_eq!(g.norm(), expect, max_relative = 1e-10);
    }

    #[test]
    fn hurwitz_known_values() {
        assert_relative_eq!(
            riemann_zeta(Complex64::new(2.0, 0.0)).re,
            std::f64::consts::PI * std::f64::consts::PI / 6.0,
            max_relative = 1e-12
        );
        // ζ(s, 1/2) = (2^s − 1) ζ(s) at s = 2.
        assert_relative_eq!(
            hurwitz_zeta(Complex64::new(2.0, 0.0), 0.5).re,
            3.0 * std::f64::consts::PI * std::f64::consts::PI / 6.0,
            max_relative = 1e-12
        );
        // ζ(s, a) − ζ(s, a+1) = a^{-s}.
        let s = Complex64::new(1.3, 2.2);
        let d = hurwitz_zeta(s, 0.4) - hurwitz_zeta(s, 1.4);
        let expect = (-s * 0.4f64.ln()).exp();
        assert!((d - expect).norm() < 1e-12);
    }

    #[test]
    fn zeta_laurent_matches_stieltjes() {
        // ζ(1+ε) = 1/ε + γ − γ₁ε + O(ε²).
        for &eps in &[0.01, 0.003] {
            let s = Complex64::new(1.0 + eps, 0.0);
            let z = riemann_zeta(s).re;
            let expect = 1.0 / eps + EULER_GAMMA - STIELTJES_1 * eps;
            assert!((z - expect).abs() < 1e-3 * eps, "eps={eps}: {z} vs {expect}");
        }
    }
}

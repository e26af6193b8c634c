//! Gamma function via the Lanczos approximation (g = 7, 9 coefficients).
//!
//! All closed-form integrals in this crate reduce to
//! `∫ t^β e^{-σt} dt = Γ(β+1)/σ^{β+1}`, so a fast, ~15-digit Γ for real
//! arguments is the only special function needed.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for real x (poles at non-positive integers return NaN/∞ naturally).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_COEFFS[0];
        for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// n! as f64. Saturates to ∞ above 170 like `f64` itself.
pub fn factorial(n: u32) -> f64 {
    let mut acc = 1.0f64;
    for k in 2..=n.min(171) {
        acc *= k as f64;
    }
    if n > 170 {
        f64::INFINITY
    } else {
        acc
    }
}

/// Binomial coefficient C(n, k) as f64.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn integer_values() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
        for n in 1..12u32 {
            assert!(rel_err(gamma(n as f64), factorial(n - 1)) < 1e-13, "Γ({n})");
        }
    }

    #[test]
    fn half_integer_values() {
        assert!(rel_err(gamma(0.5), PI.sqrt()) < 1e-14);
        assert!(rel_err(gamma(1.5), PI.sqrt() / 2.0) < 1e-14);
        assert!(rel_err(gamma(2.5), 3.0 * PI.sqrt() / 4.0) < 1e-14);
    }

    #[test]
    fn reflection_branch() {
        // Γ(-1/2) = -2√π
        assert!(rel_err(gamma(-0.5), -2.0 * PI.sqrt()) < 1e-13);
    }

    #[test]
    fn recurrence() {
        for &x in &[0.1, 0.37, 1.9, 4.25, 9.5] {
            assert!(rel_err(gamma(x + 1.0), x * gamma(x)) < 1e-13);
        }
    }

    #[test]
    fn binomial_rows() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(5, 0), 1.0);
        assert_eq!(binomial(5, 5), 1.0);
        assert_eq!(binomial(3, 7), 0.0);
    }
}

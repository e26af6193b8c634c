//! Exact algebra of exponential polynomials `Σ c · t^k · e^{-at}` and of
//! positive weight expressions `Σ c · t^β · e^{-ρt}`.
//!
//! The class is closed under pointwise product, Laplace convolution and
//! differentiation, and integrates in closed form against any weight term via
//! `∫₀^∞ t^β e^{-σt} dt = Γ(β+1)/σ^{β+1}`. That exactness is what every norm
//! identity in this crate is checked against.
//!
//! Terms whose rates differ by less than [`RATE_MERGE_TOL`] are merged during
//! canonicalisation; this is a representational tolerance that keeps the
//! distinct-rate convolution formula away from its `1/(a-b)^k` blow-up.

use crate::gamma::{binomial, factorial, gamma};
use num_complex::Complex64;
use thiserror::Error;

/// Rates closer than this are treated as equal.
pub const RATE_MERGE_TOL: f64 = 1e-12;

/// Relative magnitude below which a coefficient is dropped as zero.
const COEFF_DROP_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm {
    pub coeff: Complex64,
    /// Exponent of t (nonnegative integer).
    pub power: u32,
    /// Decay rate a in e^{-at}; Re a ≥ 0.
    pub rate: Complex64,
}

/// Canonical finite sum of terms `coeff · t^power · e^{-rate·t}`.
///
/// The term list is kept sorted by (rate, power) with like terms merged and
/// zero coefficients removed, so equality of canonical lists is equality of
/// functions (up to the documented rate-merge tolerance).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExpPoly {
    terms: Vec<ExpTerm>,
}

#[derive(Debug, Error, PartialEq)]
pub enum ExpPolyError {
    #[error("term has rate {rate} with negative real part")]
    InvalidRate { rate: Complex64 },
    #[error("term has non-finite coefficient or rate")]
    NonFinite,
}

/// A combined integrand term `t^power · e^{-rate·t}` fails to be integrable
/// on (0, ∞); carried by [`MomentError::Divergent`].
#[derive(Debug, Error, PartialEq)]
pub enum MomentError {
    #[error("divergent moment: term t^{power} e^{{-({rate})t}} is not integrable")]
    Divergent { power: f64, rate: Complex64 },
}

fn term_sort_key(t: &ExpTerm) -> (f64, f64, u32, f64, f64) {
    (t.rate.re, t.rate.im, t.power, t.coeff.re, t.coeff.im)
}

/// Sort, merge like terms (equal power, rates within tolerance), drop zeros.
fn canonicalize(mut raw: Vec<ExpTerm>) -> Vec<ExpTerm> {
    raw.retain(|t| t.coeff != Complex64::ZERO);
    raw.sort_by(|a, b| term_sort_key(a).partial_cmp(&term_sort_key(b)).unwrap());
    let mut out: Vec<ExpTerm> = Vec::with_capacity(raw.len());
    for t in raw {
        match out.last_mut() {
            Some(prev)
                if prev.power == t.power && (prev.rate - t.rate).norm() < RATE_MERGE_TOL =>
            {
                prev.coeff += t.coeff;
            }
            _ => out.push(t),
        }
    }
    let max_mag = out.iter().map(|t| t.coeff.norm()).fold(0.0f64, f64::max);
    out.retain(|t| t.coeff.norm() > COEFF_DROP_TOL * max_mag);
    out
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly { terms: vec![] }
    }

    /// Single term `coeff · t^power · e^{-rate·t}`.
    pub fn term(coeff: Complex64, power: u32, rate: Complex64) -> Result<Self, ExpPolyError> {
        Self::from_terms(vec![ExpTerm { coeff, power, rate }])
    }

    /// Real-coefficient, real-rate convenience for the common test shape.
    pub fn real_term(coeff: f64, power: u32, rate: f64) -> Self {
        Self::term(Complex64::new(coeff, 0.0), power, Complex64::new(rate, 0.0)).unwrap()
    }

    pub fn constant(c: f64) -> Self {
        Self::real_term(c, 0, 0.0)
    }

    pub fn from_terms(terms: Vec<ExpTerm>) -> Result<Self, ExpPolyError> {
        for t in &terms {
            if !t.coeff.is_finite() || !t.rate.is_finite() {
                return Err(ExpPolyError::NonFinite);
            }
            if t.rate.re < 0.0 {
                return Err(ExpPolyError::InvalidRate { rate: t.rate });
            }
        }
        Ok(ExpPoly {
            terms: canonicalize(terms),
        })
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ExpPoly {
            terms: canonicalize(
                self.terms
                    .iter()
                    .map(|t| ExpTerm { coeff: c * t.coeff, ..*t })
                    .collect(),
            ),
        }
    }

    pub fn add(&self, other: &ExpPoly) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        ExpPoly { terms: canonicalize(terms) }
    }

    pub fn sub(&self, other: &ExpPoly) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Complex conjugate: conj(f)(t) for real t.
    pub fn conj(&self) -> Self {
        ExpPoly {
            terms: canonicalize(
                self.terms
                    .iter()
                    .map(|t| ExpTerm { coeff: t.coeff.conj(), power: t.power, rate: t.rate.conj() })
                    .collect(),
            ),
        }
    }

    /// Multiply by t^n.
    pub fn mul_power(&self, n: u32) -> Self {
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm { power: t.power + n, ..*t })
                .collect(),
        }
    }

    /// d/dt, term by term: `c t^k e^{-at} ↦ ck t^{k-1} e^{-at} - ca t^k e^{-at}`.
    pub fn derivative(&self) -> Self {
        let mut raw = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            if t.power > 0 {
                raw.push(ExpTerm {
                    coeff: t.coeff * t.power as f64,
                    power: t.power - 1,
                    rate: t.rate,
                });
            }
            raw.push(ExpTerm {
                coeff: -t.coeff * t.rate,
                power: t.power,
                rate: t.rate,
            });
        }
        ExpPoly { terms: canonicalize(raw) }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|term| term.coeff * t.powi(term.power as i32) * (-term.rate * t).exp())
            .sum()
    }

    /// Pointwise product in the time domain.
    pub fn multiply(&self, other: &ExpPoly) -> Self {
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                raw.push(ExpTerm {
                    coeff: a.coeff * b.coeff,
                    power: a.power + b.power,
                    rate: a.rate + b.rate,
                });
            }
        }
        ExpPoly { terms: canonicalize(raw) }
    }

    /// Laplace convolution `(f ∗ g)(t) = ∫₀ᵗ f(τ) g(t-τ) dτ`, exactly.
    ///
    /// Equal rates raise the power through a Beta integral; distinct rates
    /// split by partial fractions. Each term pair is oriented canonically
    /// before expansion, so `f.convolve(g)` and `g.convolve(f)` produce
    /// bitwise-identical canonical term lists.
    pub fn convolve(&self, other: &ExpPoly) -> Self {
        let mut raw = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let (s, t) = if term_sort_key(a) <= term_sort_key(b) { (a, b) } else { (b, a) };
                pair_convolve(s, t, &mut raw);
            }
        }
        ExpPoly { terms: canonicalize(raw) }
    }

    /// Term-list equality up to `tol` on coefficients (same powers/rates).
    pub fn approx_eq(&self, other: &ExpPoly, tol: f64) -> bool {
        self.sub(other)
            .terms
            .iter()
            .all(|t| t.coeff.norm() <= tol)
    }

    /// Largest power appearing (None for the zero function).
    pub fn max_power(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.power).max()
    }
}

/// Convolution of a single ordered term pair, results appended to `out`.
///
/// For rates a = b (within tolerance):
///   (t^p e^{-at}) ∗ (t^q e^{-at}) = B(p+1, q+1) t^{p+q+1} e^{-at}.
/// For distinct rates, with λ = a - b and M = p + j:
///   ∫₀ᵗ τ^M e^{-λτ} dτ = M!/λ^{M+1} - e^{-λt} Σ_{i=0}^{M} M!/(M-i)! · t^{M-i}/λ^{i+1},
/// summed over the binomial expansion of (t-τ)^q.
fn pair_convolve(s: &ExpTerm, t: &ExpTerm, out: &mut Vec<ExpTerm>) {
    let (c1, p, a) = (s.coeff, s.power, s.rate);
    let (c2, q, b) = (t.coeff, t.power, t.rate);
    let c = c1 * c2;
    if (a - b).norm() < RATE_MERGE_TOL {
        let beta = factorial(p) * factorial(q) / factorial(p + q + 1);
        out.push(ExpTerm { coeff: c * beta, power: p + q + 1, rate: a });
        return;
    }
    let lambda = a - b;
    for j in 0..=q {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let cc = c * binomial(q, j) * sign;
        let m = p + j;
        // completed integral: t^{q-j} e^{-bt} · M!/λ^{M+1}
        out.push(ExpTerm {
            coeff: cc * factorial(m) / lambda.powu(m + 1),
            power: q - j,
            rate: b,
        });
        // boundary terms: t^{q-j+M-i} e^{-at}
        for i in 0..=m {
            out.push(ExpTerm {
                coeff: -cc * (factorial(m) / factorial(m - i)) / lambda.powu(i + 1),
                power: q - j + m - i,
                rate: a,
            });
        }
    }
}

// ---------------------------------------------------------------------------
// Weight expressions

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightTerm {
    /// Strictly positive coefficient.
    pub coeff: f64,
    /// Real exponent of t (any sign; integrability is checked where the term
    /// is integrated).
    pub power: f64,
    /// Nonnegative decay rate ρ in e^{-ρt}.
    pub rate: f64,
}

/// Positive weight `Σ coeff · t^power · e^{-rate·t}` on (0, ∞).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightExpr {
    terms: Vec<WeightTerm>,
}

#[derive(Debug, Error, PartialEq)]
pub enum WeightError {
    #[error("weight term has coeff {coeff} ≤ 0, non-finite fields, or rate {rate} < 0")]
    InvalidTerm { coeff: f64, rate: f64 },
    #[error("weight must have at least one term")]
    Empty,
    #[error("weight evaluated at non-positive argument {t}")]
    NonPositiveArgument { t: f64 },
}

/// Convergence classification of `∫₀^∞ e^{-shift·t} / w(t) dt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvIntegrability {
    Convergent,
    DivergentAtZero,
    DivergentAtInfinity,
}

impl WeightExpr {
    pub fn new(mut terms: Vec<WeightTerm>) -> Result<Self, WeightError> {
        if terms.is_empty() {
            return Err(WeightError::Empty);
        }
        for t in &terms {
            if !(t.coeff > 0.0)
                || !(t.rate >= 0.0)
                || !t.coeff.is_finite()
                || !t.power.is_finite()
                || !t.rate.is_finite()
            {
                return Err(WeightError::InvalidTerm { coeff: t.coeff, rate: t.rate });
            }
        }
        terms.sort_by(|a, b| {
            (a.rate, a.power, a.coeff)
                .partial_cmp(&(b.rate, b.power, b.coeff))
                .unwrap()
        });
        // merge terms with equal (rate, power)
        let mut merged: Vec<WeightTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(prev)
                    if (prev.rate - t.rate).abs() < RATE_MERGE_TOL
                        && (prev.power - t.power).abs() < RATE_MERGE_TOL =>
                {
                    prev.coeff += t.coeff;
                }
                _ => merged.push(t),
            }
        }
        Ok(WeightExpr { terms: merged })
    }

    pub fn term(coeff: f64, power: f64, rate: f64) -> Result<Self, WeightError> {
        Self::new(vec![WeightTerm { coeff, power, rate }])
    }

    pub fn constant(c: f64) -> Result<Self, WeightError> {
        Self::term(c, 0.0, 0.0)
    }

    pub fn terms(&self) -> &[WeightTerm] {
        &self.terms
    }

    /// Term-level sum.
    pub fn add(&self, other: &WeightExpr) -> WeightExpr {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        WeightExpr::new(terms).unwrap()
    }

    pub fn scale(&self, k: f64) -> WeightExpr {
        assert!(k > 0.0);
        WeightExpr::new(
            self.terms
                .iter()
                .map(|t| WeightTerm { coeff: k * t.coeff, ..*t })
                .collect(),
        )
        .unwrap()
    }

    /// Pointwise value at t > 0 (positive by construction).
    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!(t > 0.0);
        self.terms
            .iter()
            .map(|term| term.coeff * t.powf(term.power) * (-term.rate * t).exp())
            .sum()
    }

    /// Smallest power among all terms; governs the t → 0 behaviour.
    pub fn min_power(&self) -> f64 {
        self.terms.iter().map(|t| t.power).fold(f64::INFINITY, f64::min)
    }

    /// The dominant term as t → ∞: minimal rate, then maximal power.
    pub fn dominant_at_infinity(&self) -> WeightTerm {
        let min_rate = self.terms.iter().map(|t| t.rate).fold(f64::INFINITY, f64::min);
        *self
            .terms
            .iter()
            .filter(|t| t.rate < min_rate + RATE_MERGE_TOL)
            .max_by(|a, b| a.power.partial_cmp(&b.power).unwrap())
            .unwrap()
    }

    /// Symbolic convergence test for `∫₀^∞ e^{-shift·t}/w(t) dt`, read off
    /// the dominant terms: at ∞ the integrand behaves like
    /// `e^{(ρ*-shift)t} t^{-β*}`, at 0 like `t^{-β_min}`.
    pub fn inv_integrability(&self, shift: f64) -> InvIntegrability {
        let dom = self.dominant_at_infinity();
        let eq_tol = 1e-14 * shift.abs().max(1.0);
        if dom.rate > shift + eq_tol {
            return InvIntegrability::DivergentAtInfinity;
        }
        if (dom.rate - shift).abs() <= eq_tol && dom.power <= 1.0 + 1e-12 {
            return InvIntegrability::DivergentAtInfinity;
        }
        if self.min_power() >= 1.0 - 1e-12 {
            return InvIntegrability::DivergentAtZero;
        }
        InvIntegrability::Convergent
    }
}

// ---------------------------------------------------------------------------
// Weighted moments

/// `Γ(μ+1)/σ^{μ+1}` — the elementary integral `∫₀^∞ t^μ e^{-σt} dt`
/// for μ > -1, Re σ > 0 (principal branch of the complex power).
pub fn gamma_integral(mu: f64, sigma: Complex64) -> Complex64 {
    gamma(mu + 1.0) * sigma.powf(-(mu + 1.0))
}

/// The sesquilinear weighted moment `∫₀^∞ f(t) · conj(g(t)) · w(t) dt`,
/// evaluated exactly via Gamma identities.
///
/// Combined terms are merged (coefficients summed) before the divergence
/// test, so exact cancellations do not trigger spurious errors; a surviving
/// term with total power ≤ -1 or total rate with Re ≤ 0 yields
/// [`MomentError::Divergent`] carrying the offending term.
pub fn weighted_moment(
    f: &ExpPoly,
    g: &ExpPoly,
    w: &WeightExpr,
) -> Result<Complex64, MomentError> {
    // (coeff, mu, sigma) triples
    let mut combined: Vec<(Complex64, f64, Complex64)> = Vec::new();
    for tf in f.terms() {
        for tg in g.terms() {
            for tw in w.terms() {
                let coeff = tf.coeff * tg.coeff.conj() * tw.coeff;
                let mu = tf.power as f64 + tg.power as f64 + tw.power;
                let sigma = tf.rate + tg.rate.conj() + Complex64::new(tw.rate, 0.0);
                combined.push((coeff, mu, sigma));
            }
        }
    }
    combined.sort_by(|a, b| {
        (a.2.re, a.2.im, a.1, a.0.re, a.0.im)
            .partial_cmp(&(b.2.re, b.2.im, b.1, b.0.re, b.0.im))
            .unwrap()
    });
    let mut merged: Vec<(Complex64, f64, Complex64)> = Vec::with_capacity(combined.len());
    for (c, mu, sigma) in combined {
        match merged.last_mut() {
            Some((pc, pmu, psigma))
                if (*pmu - mu).abs() < RATE_MERGE_TOL && (*psigma - sigma).norm() < RATE_MERGE_TOL =>
            {
                *pc += c;
            }
            _ => merged.push((c, mu, sigma)),
        }
    }
    let max_mag = merged.iter().map(|(c, _, _)| c.norm()).fold(0.0f64, f64::max);
    merged.retain(|(c, _, _)| c.norm() > COEFF_DROP_TOL * max_mag);

    let mut acc = Complex64::ZERO;
    for (c, mu, sigma) in merged {
        if mu <= -1.0 || sigma.re <= 0.0 {
            return Err(MomentError::Divergent { power: mu, rate: sigma });
        }
        acc += c * gamma_integral(mu, sigma);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn multiply_adds_exponents() {
        let f = ExpPoly::real_term(1.0, 1, 1.0); // t e^{-t}
        let g = ExpPoly::real_term(1.0, 0, 2.0); // e^{-2t}
        let expect = ExpPoly::real_term(1.0, 1, 3.0);
        assert_eq!(f.multiply(&g), expect);
    }

    #[test]
    fn multiply_identity() {
        let one = ExpPoly::constant(1.0);
        let f = ExpPoly::real_term(2.5, 3, 1.25).add(&ExpPoly::real_term(-1.0, 0, 0.5));
        assert_eq!(one.multiply(&f), f);
    }

    #[test]
    fn multiply_squares() {
        let f = ExpPoly::real_term(1.0, 1, 1.0);
        assert_eq!(f.multiply(&f), ExpPoly::real_term(1.0, 2, 2.0));
    }

    #[test]
    fn convolve_equal_rates() {
        // e^{-t} ∗ e^{-t} = t e^{-t}
        let f = ExpPoly::real_term(1.0, 0, 1.0);
        assert_eq!(f.convolve(&f), ExpPoly::real_term(1.0, 1, 1.0));
    }

    #[test]
    fn convolve_distinct_rates() {
        // oracle (direct integral): e^{-t} ∗ e^{-2t} = e^{-t} - e^{-2t}
        let f = ExpPoly::real_term(1.0, 0, 1.0);
        let g = ExpPoly::real_term(1.0, 0, 2.0);
        let expect = ExpPoly::real_term(1.0, 0, 1.0).add(&ExpPoly::real_term(-1.0, 0, 2.0));
        assert!(f.convolve(&g).approx_eq(&expect, 1e-14));
    }

    #[test]
    fn convolve_with_constant() {
        // oracle (direct integral): 1 ∗ e^{-t} = 1 - e^{-t}
        let one = ExpPoly::constant(1.0);
        let g = ExpPoly::real_term(1.0, 0, 1.0);
        let expect = ExpPoly::constant(1.0).add(&ExpPoly::real_term(-1.0, 0, 1.0));
        assert!(one.convolve(&g).approx_eq(&expect, 1e-14));
    }

    #[test]
    fn convolve_commutes_bitwise() {
        let f = ExpPoly::real_term(1.5, 2, 0.7).add(&ExpPoly::real_term(-0.25, 0, 1.9));
        let g = ExpPoly::real_term(2.0, 1, 0.3).add(&ExpPoly::real_term(1.0, 0, 2.4));
        assert_eq!(f.convolve(&g), g.convolve(&f));
    }

    #[test]
    fn derivative_product_rule_shape() {
        // d/dt (t e^{-2t}) = e^{-2t} - 2 t e^{-2t}
        let f = ExpPoly::real_term(1.0, 1, 2.0);
        let expect = ExpPoly::real_term(1.0, 0, 2.0).add(&ExpPoly::real_term(-2.0, 1, 2.0));
        assert_eq!(f.derivative(), expect);
    }

    #[test]
    fn rejects_negative_rate() {
        assert!(matches!(
            ExpPoly::term(c(1.0, 0.0), 0, c(-0.5, 0.0)),
            Err(ExpPolyError::InvalidRate { .. })
        ));
    }

    #[test]
    fn weighted_moment_dirichlet() {
        // ∫ e^{-2t}(1+t) dt = 1/2 + 1/4 = 3/4
        let f = ExpPoly::real_term(1.0, 0, 1.0);
        let w = WeightExpr::new(vec![
            WeightTerm { coeff: 1.0, power: 0.0, rate: 0.0 },
            WeightTerm { coeff: 1.0, power: 1.0, rate: 0.0 },
        ])
        .unwrap();
        let v = weighted_moment(&f, &f, &w).unwrap();
        assert!((v.re - 0.75).abs() < 1e-14 && v.im.abs() < 1e-16);
    }

    #[test]
    fn weighted_moment_hardy_sobolev() {
        // ∫ e^{-2t} 2π(1+t²) dt = 2π(1/2 + 2/8) = 3π/2
        let f = ExpPoly::real_term(1.0, 0, 1.0);
        let w = WeightExpr::new(vec![
            WeightTerm { coeff: 2.0 * PI, power: 0.0, rate: 0.0 },
            WeightTerm { coeff: 2.0 * PI, power: 2.0, rate: 0.0 },
        ])
        .unwrap();
        let v = weighted_moment(&f, &f, &w).unwrap();
        assert!((v.re - 1.5 * PI).abs() < 1e-13);
    }

    #[test]
    fn weighted_moment_divergent_constant() {
        let one = ExpPoly::constant(1.0);
        let w = WeightExpr::constant(1.0).unwrap();
        assert!(matches!(
            weighted_moment(&one, &one, &w),
            Err(MomentError::Divergent { .. })
        ));
    }

    #[test]
    fn weighted_moment_merges_cancellation_before_divergence_test() {
        // f = 1 - 1 (as two raw terms through add of opposite constants plus
        // one convergent term): divergent pieces cancel exactly.
        let f = ExpPoly::constant(1.0)
            .add(&ExpPoly::constant(-1.0))
            .add(&ExpPoly::real_term(1.0, 0, 1.0));
        let w = WeightExpr::constant(1.0).unwrap();
        let v = weighted_moment(&f, &f, &w).unwrap();
        assert!((v.re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn inv_integrability_classification() {
        // w = 1 (Hardy): divergent tail
        let hardy = WeightExpr::constant(1.0).unwrap();
        assert_eq!(hardy.inv_integrability(0.0), InvIntegrability::DivergentAtInfinity);
        // w = 1 + t (Dirichlet): log-divergent tail
        let dir = WeightExpr::new(vec![
            WeightTerm { coeff: 1.0, power: 0.0, rate: 0.0 },
            WeightTerm { coeff: 1.0, power: 1.0, rate: 0.0 },
        ])
        .unwrap();
        assert_eq!(dir.inv_integrability(0.0), InvIntegrability::DivergentAtInfinity);
        // w = 2π(1+t²): convergent
        let hs = WeightExpr::new(vec![
            WeightTerm { coeff: 2.0 * PI, power: 0.0, rate: 0.0 },
            WeightTerm { coeff: 2.0 * PI, power: 2.0, rate: 0.0 },
        ])
        .unwrap();
        assert_eq!(hs.inv_integrability(0.0), InvIntegrability::Convergent);
        // w = t² alone: divergent at the origin
        let t2 = WeightExpr::term(1.0, 2.0, 0.0).unwrap();
        assert_eq!(t2.inv_integrability(0.0), InvIntegrability::DivergentAtZero);
        // w = e^{-t} (decaying): divergent tail unless shift ≥ rate
        let dec = WeightExpr::term(1.0, 0.0, 1.0).unwrap();
        assert_eq!(dec.inv_integrability(0.0), InvIntegrability::DivergentAtInfinity);
        assert_eq!(dec.inv_integrability(2.0), InvIntegrability::Convergent);
    }

    #[test]
    fn weight_eval_and_invariants() {
        let w = WeightExpr::new(vec![
            WeightTerm { coeff: 1.0, power: 0.0, rate: 0.0 },
            WeightTerm { coeff: 1.0, power: 1.0, rate: 0.0 },
        ])
        .unwrap();
        assert!((w.eval(3.0) - 4.0).abs() < 1e-15);
        assert!(WeightExpr::term(-1.0, 0.0, 0.0).is_err());
        assert!(WeightExpr::term(1.0, 0.0, -0.5).is_err());
        assert!(WeightExpr::new(vec![]).is_err());
    }
}

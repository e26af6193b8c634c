//! Norms and inner products on L²_w(0, ∞) and on the transform side, the
//! isometry checker between them, and resolvent norms.
//!
//! The time-domain side is exact (Gamma identities through
//! [`weighted_moment`]); the half-plane side is quadrature over vertical
//! lines against the declared measures. The isometry check compares the two.

use crate::exppoly::{weighted_moment, ExpPoly, MomentError, WeightExpr};
use crate::gamma::factorial;
use crate::measure::MeasureSpec;
use crate::quad::{integrate_halfline, integrate_vertical, QuadConfig, QuadError, QuadOutcome};
use crate::report::{CheckReport, Method, Verdict, Witness};
use crate::weight::SpaceSpec;
use num_complex::Complex64;
use std::cell::Cell;
use thiserror::Error;

/// Default relative tolerance for the isometry verdict.
pub const DEFAULT_ISOMETRY_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error("function is not in the space: {0}")]
    NotInSpace(#[from] MomentError),
    #[error("function has a non-zero constant offset, so it cannot lie in the space")]
    OffsetNotZero,
    #[error("evaluation at z = {z} violates Re(z + a) > 0 for rate a = {rate}")]
    DomainViolation { z: Complex64, rate: Complex64 },
    #[error("quadrature did not reach the requested tolerance (best estimate {best}, error {error})")]
    ToleranceNotMet { best: f64, error: f64 },
    #[error("quadrature failed: {0}")]
    Quad(#[from] QuadError),
}

/// A function `F(z) = offset + ∫₀^∞ f(t) e^{-tz} dt` on the right half-plane:
/// a constant plus the Laplace transform of an exponential polynomial.
///
/// Membership in the Hilbert space requires `offset = 0`; non-zero offsets
/// are permitted for multiplier candidates.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticFn {
    offset: Complex64,
    transform: ExpPoly,
}

impl AnalyticFn {
    pub fn new(offset: Complex64, transform: ExpPoly) -> Self {
        AnalyticFn { offset, transform }
    }

    /// The Laplace transform of `f`: z ↦ Σ c·k!/(z+a)^{k+1}.
    pub fn laplace(f: ExpPoly) -> Self {
        AnalyticFn { offset: Complex64::ZERO, transform: f }
    }

    pub fn constant(c: Complex64) -> Self {
        AnalyticFn { offset: c, transform: ExpPoly::zero() }
    }

    /// The resolvent 1/(z+α) = L[e^{-αt}], for Re α > 0.
    pub fn resolvent(alpha: Complex64) -> Self {
        assert!(alpha.re > 0.0, "resolvent pole must lie in the left half-plane");
        Self::laplace(ExpPoly::term(Complex64::ONE, 0, alpha).unwrap())
    }

    pub fn offset(&self) -> Complex64 {
        self.offset
    }

    pub fn transform_part(&self) -> &ExpPoly {
        &self.transform
    }

    pub fn is_zero(&self) -> bool {
        self.offset == Complex64::ZERO && self.transform.is_zero()
    }

    /// Evaluate at z. Errors unless Re(z + a) > 0 for every rate a.
    pub fn eval(&self, z: Complex64) -> Result<Complex64, SpaceError> {
        let mut acc = self.offset;
        for term in self.transform.terms() {
            let den = z + term.rate;
            if den.re <= 0.0 {
                return Err(SpaceError::DomainViolation { z, rate: term.rate });
            }
            acc += term.coeff * factorial(term.power) * den.powi(-(term.power as i32) - 1);
        }
        Ok(acc)
    }

    /// The n-th derivative, exactly: `F⁽ⁿ⁾ = L[(-t)ⁿ f]` (offset drops for
    /// n ≥ 1).
    pub fn derivative(&self, order: u32) -> AnalyticFn {
        if order == 0 {
            return self.clone();
        }
        let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
        AnalyticFn {
            offset: Complex64::ZERO,
            transform: self.transform.mul_power(order).scale(Complex64::new(sign, 0.0)),
        }
    }
}

/// `‖f‖_{L²_w} = sqrt(∫ |f|² w dt)`, exactly.
pub fn l2w_norm(f: &ExpPoly, w: &WeightExpr) -> Result<f64, SpaceError> {
    let sq = weighted_moment(f, f, w)?;
    Ok(sq.re.max(0.0).sqrt())
}

/// The L²_w inner product `⟨f, g⟩ = ∫ f ḡ w dt`, exactly. By the isometry
/// this equals the inner product of the transforms on the half-plane side.
pub fn inner_product(
    f: &ExpPoly,
    g: &ExpPoly,
    space: &SpaceSpec,
) -> Result<Complex64, SpaceError> {
    let w = space.total_weight();
    Ok(weighted_moment(f, g, &w)?)
}

/// `∫_{C₊} |G|² d(ν̃ ⊗ λ)`: vertical-line integrals at atom locations plus
/// halfline quadrature in r against power densities. Shared by the norm
/// computation and the quasi-Carleson integral.
pub(crate) fn halfplane_sq_integral<G>(
    g: G,
    measure: &MeasureSpec,
    cfg: &QuadConfig,
) -> Result<QuadOutcome, SpaceError>
where
    G: Fn(Complex64) -> Complex64,
{
    let mut value = 0.0;
    let mut error = 0.0;
    let mut converged = true;

    for atom in measure.atoms() {
        let out = integrate_vertical(&g, atom.location, cfg)?;
        value += atom.mass * out.value;
        error += atom.mass * out.error;
        converged &= out.converged;
    }

    if !measure.powers().is_empty() {
        let inner_cfg = cfg.inner();
        let inner_failed = Cell::new(false);
        let inner_err = Cell::new(0.0f64);
        let radial = |r: f64| -> f64 {
            let density: f64 = measure
                .powers()
                .iter()
                .map(|p| p.coeff * r.powf(p.exponent))
                .sum();
            match integrate_vertical(&g, r, &inner_cfg) {
                Ok(out) => {
                    if !out.converged {
                        inner_failed.set(true);
                    }
                    inner_err.set(inner_err.get().max(out.error));
                    density * out.value
                }
                Err(_) => f64::NAN,
            }
        };
        let out = integrate_halfline(radial, cfg)?;
        value += out.value;
        error += out.error;
        converged &= out.converged && !inner_failed.get();
    }

    Ok(QuadOutcome { value, error, converged })
}

/// The half-plane norm `sqrt(Σₙ ∫∫ |F⁽ⁿ⁾(r+is)|² ds dν̃ₙ(r))`, by
/// quadrature. The supremum over ε-shifts is attained in the ε → 0 limit
/// for Laplace transforms, so the integrals are evaluated at ε = 0.
pub fn a2m_norm_numeric(
    f: &AnalyticFn,
    space: &SpaceSpec,
    cfg: &QuadConfig,
) -> Result<f64, SpaceError> {
    if f.offset() != Complex64::ZERO {
        return Err(SpaceError::OffsetNotZero);
    }
    // membership gate: the exact moment must be finite
    let w = space.total_weight();
    weighted_moment(f.transform_part(), f.transform_part(), &w)?;

    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut converged = true;
    for (n, measure) in space.measures().iter().enumerate() {
        let deriv = f.derivative(n as u32);
        let eval_failed = Cell::new(false);
        let g = |z: Complex64| {
            deriv.eval(z).unwrap_or_else(|_| {
                eval_failed.set(true);
                Complex64::new(f64::NAN, 0.0)
            })
        };
        let out = halfplane_sq_integral(g, measure, cfg)?;
        total += out.value;
        total_err += out.error;
        converged &= out.converged;
    }
    if !converged {
        return Err(SpaceError::ToleranceNotMet { best: total.sqrt(), error: total_err });
    }
    Ok(total.max(0.0).sqrt())
}

/// Compare the exact L²_w norm of `f` with the quadrature norm of its
/// Laplace transform; holds iff the relative discrepancy is below `rel_tol`.
pub fn isometry_check(
    f: &ExpPoly,
    space: &SpaceSpec,
    cfg: &QuadConfig,
    rel_tol: f64,
) -> Result<CheckReport, SpaceError> {
    let w = space.total_weight();
    let exact = l2w_norm(f, &w)?;
    let numeric = a2m_norm_numeric(&AnalyticFn::laplace(f.clone()), space, cfg)?;
    let scale = exact.abs().max(1e-30);
    let rel = (exact - numeric).abs() / scale;
    let name = "isometry";
    let report = if rel < rel_tol {
        CheckReport::holds(name, Method::Quadrature)
            .with_value(rel)
            .with_margin(rel_tol - rel)
    } else {
        CheckReport::fails(
            name,
            Method::Quadrature,
            Witness::Discrepancy { lhs: exact, rhs: numeric },
        )
        .with_value(rel)
        .with_margin(rel_tol - rel)
    };
    Ok(report)
}

/// Exact norm of the resolvent 1/(z+α): `sqrt(∫ e^{-2 Re(α) t} w(t) dt)`.
///
/// Errors with `NotInSpace` when the integral diverges (which happens for
/// weights unbounded at the origin faster than t^{-1}, e.g. Bergman α ≥ 0).
pub fn resolvent_norm(alpha: Complex64, space: &SpaceSpec) -> Result<f64, SpaceError> {
    assert!(alpha.re > 0.0, "resolvent pole must satisfy Re α > 0");
    let f = ExpPoly::term(Complex64::ONE, 0, alpha).unwrap();
    l2w_norm(&f, &space.total_weight())
}

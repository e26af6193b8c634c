//! Certification and refutation of the Banach-algebra conditions: the
//! necessary integral `∫ dt/w ≤ 1`, the sufficient convolution inequality
//! `(1/w ∗ 1/w)(t) ≤ 1/w(t)`, pairwise measure domination, the truncated
//! two-weight bound, submultiplicativity trials, and the auxiliary algebra
//! norms.
//!
//! Divergence of `∫ dt/w` is detected symbolically from the dominant weight
//! term before any quadrature (method = exact); grid verdicts are labelled
//! method = grid and never claim more than the grid.

use crate::exppoly::{ExpPoly, InvIntegrability, MomentError, WeightExpr};
use crate::gamma::factorial;
use crate::multiplier::{self, MultiplierError};
use crate::quad::{convolve_numeric, integrate_halfline, QuadConfig};
use crate::report::{CheckReport, Method, Witness};
use crate::spaces::{l2w_norm, AnalyticFn, SpaceError};
use crate::weight::{derive_weights, SpaceSpec};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("grid is empty")]
    EmptyGrid,
    #[error("test function {index} is not in the space: {source}")]
    NotInSpace { index: usize, source: MomentError },
    #[error("H∞ estimate of derivative order {order} diverged on the grid")]
    UnboundedDerivative { order: u32 },
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Shared engine for `∫₀^∞ e^{0·t} dt/w' ≤ 1`-shaped conditions.
fn bounded_inverse_integral(name: &str, w: &WeightExpr, cfg: &QuadConfig) -> CheckReport {
    match w.inv_integrability(0.0) {
        InvIntegrability::DivergentAtInfinity => {
            CheckReport::fails(name, Method::Exact, Witness::DivergentAtInfinity)
        }
        InvIntegrability::DivergentAtZero => {
            CheckReport::fails(name, Method::Exact, Witness::DivergentAtZero)
        }
        InvIntegrability::Convergent => {
            match integrate_halfline(|t| 1.0 / w.eval(t), cfg) {
                Ok(out) if out.converged => {
                    let margin = 1.0 - out.value;
                    if out.value <= 1.0 {
                        CheckReport::holds(name, Method::Quadrature)
                            .with_value(out.value)
                            .with_margin(margin)
                    } else {
                        CheckReport::fails(
                            name,
                            Method::Quadrature,
                            Witness::Exceeds { value: out.value, bound: 1.0 },
                        )
                        .with_value(out.value)
                        .with_margin(margin)
                    }
                }
                Ok(out) => CheckReport::inconclusive(name, Method::Quadrature)
                    .with_value(out.value),
                Err(_) => CheckReport::inconclusive(name, Method::Quadrature),
            }
        }
    }
}

/// Necessary condition: if the space is a Banach algebra then
/// `∫₀^∞ dt/w_(m) ≤ 1`. Fails with an exact divergence witness for every
/// Zen-type weight.
pub fn necessary_condition(space: &SpaceSpec, cfg: &QuadConfig) -> CheckReport {
    bounded_inverse_integral("necessary_condition", &space.total_weight(), cfg)
}

/// Truncated bound: `∫₀^∞ dt/(w_{m-1} + w_m) ≤ 1` (requires m ≥ 1).
pub fn truncated_bound(space: &SpaceSpec, cfg: &QuadConfig) -> CheckReport {
    let m = space.m();
    assert!(m >= 1, "truncated bound needs at least two measures");
    let dw = derive_weights(space);
    let w = dw.per_index[m - 1].add(&dw.per_index[m]);
    bounded_inverse_integral("truncated_bound", &w, cfg)
}

/// Grid check of `(φ ∗ φ)(t) ≤ φ(t)` for an arbitrary positive integrand φ
/// (used with φ = 1/w, but also directly testable on synthetic weights that
/// no measure derives).
pub fn convolution_condition_on_grid<F>(
    inv_w: F,
    t_grid: &[f64],
    cfg: &QuadConfig,
) -> Result<CheckReport, AlgebraError>
where
    F: Fn(f64) -> f64,
{
    if t_grid.is_empty() {
        return Err(AlgebraError::EmptyGrid);
    }
    let name = "sufficient_convolution";
    let mut min_slack = f64::INFINITY;
    let mut worst_ratio = 0.0f64;
    let mut witness: Option<f64> = None;
    for &t in t_grid {
        let lhs = match convolve_numeric(&inv_w, &inv_w, t, cfg) {
            Ok(out) if out.converged => out,
            _ => return Ok(CheckReport::inconclusive(name, Method::Grid).with_witness(Witness::T { t })),
        };
        let rhs = inv_w(t);
        let slack = rhs - lhs.value;
        if slack < min_slack {
            min_slack = slack;
        }
        worst_ratio = worst_ratio.max(lhs.value / rhs);
        if lhs.value > rhs + lhs.error + 1e-14 * rhs && witness.is_none() {
            witness = Some(t);
        }
    }
    let report = match witness {
        Some(t) => CheckReport::fails(name, Method::Grid, Witness::T { t })
            .with_value(worst_ratio)
            .with_margin(min_slack),
        None => CheckReport::holds(name, Method::Grid)
            .with_value(worst_ratio)
            .with_margin(min_slack),
    };
    Ok(report)
}

/// Sufficient condition on a grid: `(1/w ∗ 1/w)(t) ≤ 1/w(t)` at every grid
/// point. A grid pass certifies nothing beyond the grid and is labelled so.
pub fn sufficient_convolution(
    space: &SpaceSpec,
    t_grid: &[f64],
    cfg: &QuadConfig,
) -> Result<CheckReport, AlgebraError> {
    let w = space.total_weight();
    convolution_condition_on_grid(move |t| 1.0 / w.eval(t), t_grid, cfg)
}

/// Pairwise domination of the Laplace–Stieltjes transforms:
/// `∫ e^{-2rt} dν̃_n ≤ ∫ e^{-2rt} dν̃_{n-k}` on the grid, over all pairs
/// 1 ≤ k < n ≤ m. Also reports the smallest constant K that makes
/// `K·ν̃_{n-k}` dominate on the grid (the "up to a constant" relaxation).
/// Vacuously holds for m ≤ 1.
pub fn measure_domination(space: &SpaceSpec, t_grid: &[f64]) -> CheckReport {
    let name = "measure_domination";
    let m = space.m();
    if m <= 1 {
        return CheckReport::holds(name, Method::Exact).with_value(1.0);
    }
    let mut k_const = 0.0f64;
    let mut min_slack = f64::INFINITY;
    let mut worst: Option<f64> = None;
    for n in 2..=m {
        for k in 1..n {
            for &t in t_grid {
                let upper = space.measures()[n].laplace_stieltjes(t);
                let lower = space.measures()[n - k].laplace_stieltjes(t);
                let ratio = upper / lower;
                if ratio > k_const {
                    k_const = ratio;
                    if ratio > 1.0 + 1e-12 {
                        worst = Some(t);
                    }
                }
                min_slack = min_slack.min(lower - upper);
            }
        }
    }
    if let Some(t) = worst {
        CheckReport::fails(name, Method::Grid, Witness::T { t })
            .with_value(k_const)
            .with_margin(min_slack)
    } else {
        CheckReport::holds(name, Method::Grid)
            .with_value(k_const)
            .with_margin(min_slack)
    }
}

/// Exact submultiplicativity trial: for each pair computes
/// `‖f∗g‖ / (‖f‖·‖g‖)` via Gamma arithmetic and reports the worst ratio.
/// A pass on finitely many pairs certifies nothing (method = grid).
pub fn submultiplicativity_trial(
    space: &SpaceSpec,
    pairs: &[(ExpPoly, ExpPoly)],
) -> Result<CheckReport, AlgebraError> {
    let name = "submultiplicativity";
    let w = space.total_weight();
    let mut worst = 0.0f64;
    let mut witness: Option<usize> = None;
    for (index, (f, g)) in pairs.iter().enumerate() {
        let nf = l2w_norm(f, &w).map_err(|e| as_not_in_space(index, e))?;
        let ng = l2w_norm(g, &w).map_err(|e| as_not_in_space(index, e))?;
        if nf == 0.0 || ng == 0.0 {
            continue; // ratio defined as 0
        }
        let ratio = match l2w_norm(&f.convolve(g), &w) {
            Ok(nc) => nc / (nf * ng),
            // f, g in the space but f∗g not: submultiplicativity fails outright
            Err(_) => {
                return Ok(CheckReport::fails(name, Method::Grid, Witness::Index { index })
                    .with_value(f64::MAX));
            }
        };
        if ratio > worst {
            worst = ratio;
            if ratio > 1.0 + 1e-12 {
                witness = Some(index);
            }
        }
    }
    let report = match witness {
        Some(index) => CheckReport::fails(name, Method::Grid, Witness::Index { index })
            .with_value(worst)
            .with_margin(1.0 - worst),
        None => CheckReport::holds(name, Method::Grid)
            .with_value(worst)
            .with_margin(1.0 - worst),
    };
    Ok(report)
}

fn as_not_in_space(index: usize, e: SpaceError) -> AlgebraError {
    match e {
        SpaceError::NotInSpace(source) => AlgebraError::NotInSpace { index, source },
        other => AlgebraError::Space(other),
    }
}

/// Which auxiliary Banach-algebra norm to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraNormVariant {
    /// `‖F‖_{H∞} + ‖F‖_{A²_ν₀}` — the intersection algebra of a single
    /// measure.
    IntersectionHInf,
    /// `Σ_{n<m} ‖F⁽ⁿ⁾‖_{H∞}/n! + Σ_{n≤m} ‖F⁽ⁿ⁾‖_{A²_νₙ}/n!` — the truncated
    /// derivative algebra.
    AlgM,
}

/// The auxiliary algebra norm of `F = L[f]`. The `A²_{ν_n}` parts are exact
/// (`‖F⁽ⁿ⁾‖_{A²_νₙ} = ‖f‖_{L²_{w_n}}`); the H∞ parts are grid estimates.
pub fn auxiliary_algebra_norm(
    f: &AnalyticFn,
    space: &SpaceSpec,
    variant: AlgebraNormVariant,
    _cfg: &QuadConfig,
) -> Result<f64, AlgebraError> {
    if f.offset() != num_complex::Complex64::ZERO {
        return Err(AlgebraError::NotInSpace {
            index: 0,
            source: MomentError::Divergent {
                power: 0.0,
                rate: num_complex::Complex64::ZERO,
            },
        });
    }
    let dw = derive_weights(space);
    let time_side = f.transform_part();
    let hinf_of = |order: u32| -> Result<f64, AlgebraError> {
        multiplier::hinf_norm(&f.derivative(order)).map_err(|e| match e {
            MultiplierError::UnboundedDetected { .. } => {
                AlgebraError::UnboundedDerivative { order }
            }
            _ => AlgebraError::UnboundedDerivative { order },
        })
    };
    match variant {
        AlgebraNormVariant::IntersectionHInf => {
            let a2 = l2w_norm(time_side, &dw.per_index[0]).map_err(|e| as_not_in_space(0, e))?;
            Ok(hinf_of(0)? + a2)
        }
        AlgebraNormVariant::AlgM => {
            let m = space.m();
            let mut total = 0.0;
            for n in 0..m {
                total += hinf_of(n as u32)? / factorial(n as u32);
            }
            for n in 0..=m {
                let a2 = l2w_norm(time_side, &dw.per_index[n])
                    .map_err(|e| as_not_in_space(n, e))?;
                total += a2 / factorial(n as u32);
            }
            Ok(total)
        }
    }
}

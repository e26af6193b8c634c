//! The reproducing kernel `k_z(ζ) = ∫₀^∞ e^{-t(ζ + z̄)} / w(t) dt`, its
//! norms, the supremum estimate behind the Banach-algebra necessary
//! condition, and the reproducing-property check.
//!
//! 1/w is not an exponential polynomial, so every kernel value here is
//! numeric. The supremum of ‖k_z‖² over the half-plane is the a → 0⁺ limit
//! of `∫ e^{-2at}/w dt` (the integrand is monotone in a); it is estimated by
//! evaluating on a geometric a-grid and extrapolating with the leading
//! small-a expansion `I(a) ≈ I₀ + c·a + d·a·ln a`.

use crate::exppoly::{weighted_moment, ExpPoly, InvIntegrability, WeightExpr};
use crate::quad::{integrate_halfline_complex, QuadConfig, QuadError};
use crate::report::{CheckReport, Method, Witness};
use crate::spaces::AnalyticFn;
use crate::weight::SpaceSpec;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("kernel integral diverges for this weight at shift {shift} ({reason})")]
    DivergentKernel { shift: f64, reason: &'static str },
    #[error("kernel quadrature did not meet tolerance (best estimate {best}, error {error})")]
    ToleranceNotMet { best: f64, error: f64 },
    #[error("function is not in the space")]
    NotInSpace,
    #[error("quadrature failed: {0}")]
    Quad(#[from] QuadError),
}

fn check_convergence(w: &WeightExpr, shift: f64) -> Result<(), KernelError> {
    match w.inv_integrability(shift) {
        InvIntegrability::Convergent => Ok(()),
        InvIntegrability::DivergentAtZero => Err(KernelError::DivergentKernel {
            shift,
            reason: "weight blows up too slowly at 0",
        }),
        InvIntegrability::DivergentAtInfinity => Err(KernelError::DivergentKernel {
            shift,
            reason: "weight decays too fast at infinity",
        }),
    }
}

/// Evaluate `k_z(ζ)` for z, ζ in the open right half-plane.
pub fn kernel_eval(
    space: &SpaceSpec,
    z: Complex64,
    zeta: Complex64,
    cfg: &QuadConfig,
) -> Result<Complex64, KernelError> {
    assert!(z.re > 0.0 && zeta.re > 0.0, "kernel points must lie in C₊");
    let w = space.total_weight();
    kernel_eval_weight(&w, z, zeta, cfg)
}

pub(crate) fn kernel_eval_weight(
    w: &WeightExpr,
    z: Complex64,
    zeta: Complex64,
    cfg: &QuadConfig,
) -> Result<Complex64, KernelError> {
    let sigma = zeta + z.conj();
    check_convergence(w, sigma.re)?;
    let out = integrate_halfline_complex(|t| (-sigma * t).exp() / w.eval(t), cfg)?;
    if !out.converged {
        return Err(KernelError::ToleranceNotMet { best: out.value.norm(), error: out.error });
    }
    Ok(out.value)
}

/// `‖k_z‖² = k_z(z) = ∫ e^{-2at}/w dt` for any z with Re z = a; monotone
/// nonincreasing in a.
pub fn kernel_norm_sq(space: &SpaceSpec, a: f64, cfg: &QuadConfig) -> Result<f64, KernelError> {
    assert!(a > 0.0, "kernel norm needs a > 0");
    let w = space.total_weight();
    kernel_norm_sq_weight(&w, a, cfg)
}

pub(crate) fn kernel_norm_sq_weight(
    w: &WeightExpr,
    a: f64,
    cfg: &QuadConfig,
) -> Result<f64, KernelError> {
    let sigma = Complex64::new(2.0 * a, 0.0);
    check_convergence(w, sigma.re)?;
    let out = integrate_halfline_complex(|t| (-sigma * t).exp() / w.eval(t), cfg)?;
    if !out.converged {
        return Err(KernelError::ToleranceNotMet { best: out.value.re, error: out.error });
    }
    Ok(out.value.re)
}

/// Estimated supremum of ‖k_z‖² over the half-plane, with the sampled grid.
#[derive(Debug, Clone)]
pub struct SupEstimate {
    /// Extrapolated a → 0⁺ value of `∫ e^{-2at}/w dt`.
    pub extrapolated: f64,
    /// (a, ‖k_z‖² at Re z = a) samples, ascending in a.
    pub samples: Vec<(f64, f64)>,
}

/// Extrapolated supremum of the squared kernel norm: geometric a-grid from
/// 1e-6 up, fit of {1, a, a·ln a} on the three smallest points.
pub fn kernel_sup_estimate(
    space: &SpaceSpec,
    cfg: &QuadConfig,
) -> Result<SupEstimate, KernelError> {
    let w = space.total_weight();
    check_convergence(&w, 0.0).map_err(|_| KernelError::DivergentKernel {
        shift: 0.0,
        reason: "sup of kernel norms is infinite",
    })?;
    let grid: Vec<f64> = (0..10).map(|k| 1e-6 * 2f64.powi(k)).collect();
    let mut samples = Vec::with_capacity(grid.len());
    for &a in &grid {
        samples.push((a, kernel_norm_sq_weight(&w, a, cfg)?));
    }
    let extrapolated = extrapolate_to_zero(&samples[..3]);
    Ok(SupEstimate { extrapolated, samples })
}

/// Solve the 3×3 fit I(a) = x₀ + x₁·a + x₂·a·ln a and return x₀.
fn extrapolate_to_zero(samples: &[(f64, f64)]) -> f64 {
    assert!(samples.len() >= 3);
    let mut m = [[0.0f64; 4]; 3];
    for (row, &(a, v)) in m.iter_mut().zip(samples.iter().take(3)) {
        row[0] = 1.0;
        row[1] = a;
        row[2] = a * a.ln();
        row[3] = v;
    }
    // Gaussian elimination with partial pivoting
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs())).unwrap();
        m.swap(col, pivot);
        for row in (col + 1)..3 {
            let factor = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    let x2 = m[2][3] / m[2][2];
    let x1 = (m[1][3] - m[1][2] * x2) / m[1][1];
    (m[0][3] - m[0][1] * x1 - m[0][2] * x2) / m[0][0]
}

/// Verify the reproducing identity in its time-domain form:
/// `⟨f, e^{-t z̄}/w⟩_{L²_w}` (by quadrature) against `F(z)` (exact Laplace
/// evaluation).
pub fn reproducing_check(
    space: &SpaceSpec,
    f: &ExpPoly,
    z: Complex64,
    cfg: &QuadConfig,
    tol: f64,
) -> Result<CheckReport, KernelError> {
    assert!(z.re > 0.0, "reproducing point must lie in C₊");
    let w = space.total_weight();
    weighted_moment(f, f, &w).map_err(|_| KernelError::NotInSpace)?;

    // ∫ f(t) · conj(e^{-t z̄}/w(t)) · w(t) dt, left in its inner-product form
    let lhs_out = integrate_halfline_complex(
        |t| {
            let wt = w.eval(t);
            let test_fn = (-z.conj() * t).exp() / wt;
            f.eval(t) * test_fn.conj() * wt
        },
        cfg,
    )?;
    if !lhs_out.converged {
        return Err(KernelError::ToleranceNotMet {
            best: lhs_out.value.norm(),
            error: lhs_out.error,
        });
    }
    let rhs = AnalyticFn::laplace(f.clone())
        .eval(z)
        .map_err(|_| KernelError::NotInSpace)?;
    let diff = (lhs_out.value - rhs).norm();
    let name = "reproducing_property";
    let report = if diff < tol {
        CheckReport::holds(name, Method::Quadrature).with_value(diff).with_margin(tol - diff)
    } else {
        CheckReport::fails(name, Method::Quadrature, Witness::Z { re: z.re, im: z.im })
            .with_value(diff)
            .with_margin(tol - diff)
    };
    Ok(report)
}

/// Smallest eigenvalue of the kernel Gram matrix `[⟨k_{z_i}, k_{z_j}⟩]` of
/// the given points; nonnegative (up to quadrature noise) by positive
/// semidefiniteness of reproducing kernels.
pub fn gram_min_eigenvalue(
    space: &SpaceSpec,
    points: &[Complex64],
    cfg: &QuadConfig,
) -> Result<f64, KernelError> {
    let n = points.len();
    assert!(n > 0);
    let w = space.total_weight();
    let mut gram = vec![vec![Complex64::ZERO; n]; n];
    for i in 0..n {
        for j in i..n {
            // ⟨k_{z_i}, k_{z_j}⟩ = k_{z_i}(z_j)
            let v = kernel_eval_weight(&w, points[i], points[j], cfg)?;
            gram[i][j] = v;
            gram[j][i] = v.conj();
        }
    }
    // Embed the Hermitian matrix into a real symmetric one of twice the
    // size: [[Re, -Im], [Im, Re]] has the same spectrum (doubled).
    let dim = 2 * n;
    let mut m = vec![vec![0.0f64; dim]; dim];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = gram[i][j].re;
            m[i][j + n] = -gram[i][j].im;
            m[i + n][j] = gram[i][j].im;
            m[i + n][j + n] = gram[i][j].re;
        }
    }
    // symmetrise away quadrature noise
    for i in 0..dim {
        for j in (i + 1)..dim {
            let avg = 0.5 * (m[i][j] + m[j][i]);
            m[i][j] = avg;
            m[j][i] = avg;
        }
    }
    Ok(jacobi_min_eigenvalue(&mut m))
}

/// Cyclic Jacobi iteration for a small real symmetric matrix; returns the
/// smallest eigenvalue.
fn jacobi_min_eigenvalue(m: &mut [Vec<f64>]) -> f64 {
    let n = m.len();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[i][j] * m[i][j];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = 0.5 * (m[q][q] - m[p][p]) / m[p][q];
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i][i]).fold(f64::INFINITY, f64::min)
}

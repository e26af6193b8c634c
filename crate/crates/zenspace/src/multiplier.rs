//! Multiplier-norm lower bounds, grid H∞ estimates, the quasi-Carleson
//! integral, and Carleson-embedding constant estimation.
//!
//! Multiplier norms are never claimed exactly: test functions give certified
//! lower bounds, and the quasi-Carleson machinery gives conditional upper
//! bounds. Multiplier candidates are restricted to the offset + transform
//! form so that products `hF` stay exactly representable
//! (`hF = L[c·f + g∗f]`).

use crate::exppoly::{weighted_moment, ExpPoly};
use crate::gamma::binomial;
use crate::kernel::{kernel_eval_weight, kernel_norm_sq_weight, KernelError};
use crate::quad::QuadConfig;
use crate::spaces::{halfplane_sq_integral, l2w_norm, AnalyticFn, SpaceError};
use crate::weight::SpaceSpec;
use num_complex::Complex64;
use std::cell::Cell;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MultiplierError {
    #[error("test function {index} is not in the space")]
    NotInSpace { index: usize },
    #[error("h is not a multiplier: the product with test function {witness_index} leaves the space")]
    NotMultiplier { witness_index: usize },
    #[error("|h| grows without bound on the evaluation grid (sup estimate {sup})")]
    UnboundedDetected { sup: f64 },
    #[error("quadrature did not meet tolerance")]
    ToleranceNotMet,
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Grid-sup estimate of `‖h‖_{H∞(C₊)}`: the maximum of |h| over boundary
/// points is + log-spaced s, plus small interior offsets. Justified by the
/// maximum principle for the rational-type functions in scope; this is an
/// estimate, not a proof.
pub fn hinf_norm(h: &AnalyticFn) -> Result<f64, MultiplierError> {
    // A transform term with Re(rate) = 0 has a pole on the boundary.
    for term in h.transform_part().terms() {
        if term.rate.re < 1e-12 {
            return Err(MultiplierError::UnboundedDetected { sup: f64::INFINITY });
        }
    }
    let mut s_values = vec![0.0f64];
    let per_decade = 8;
    for i in 0..=(8 * per_decade) {
        let s = 1e-4 * 10f64.powf(i as f64 / per_decade as f64);
        s_values.push(s);
        s_values.push(-s);
    }
    let mut sup = 0.0f64;
    for &r in &[0.0, 1e-3, 1e-2, 1e-1] {
        for &s in &s_values {
            let z = Complex64::new(r, s);
            let v = match h.eval(z) {
                Ok(v) => v.norm(),
                Err(_) => f64::INFINITY,
            };
            if !v.is_finite() || v > 1e12 {
                return Err(MultiplierError::UnboundedDetected { sup: v });
            }
            sup = sup.max(v);
        }
    }
    Ok(sup)
}

/// The product `h·F` pulled back to the time domain:
/// `h = c + L[g]`, `F = L[f]  ⟹  hF = L[c·f + g∗f]`.
pub fn apply_multiplier(h: &AnalyticFn, f: &ExpPoly) -> ExpPoly {
    f.scale(h.offset()).add(&h.transform_part().convolve(f))
}

/// Certified lower bound for the multiplier norm: the maximum of
/// `‖hF‖/‖F‖` over the finite test set. Errors with `NotMultiplier` if some
/// product leaves the space.
pub fn multiplier_lower_bound(
    h: &AnalyticFn,
    space: &SpaceSpec,
    testset: &[ExpPoly],
) -> Result<f64, MultiplierError> {
    let w = space.total_weight();
    let mut best = 0.0f64;
    for (index, f) in testset.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let nf = l2w_norm(f, &w).map_err(|_| MultiplierError::NotInSpace { index })?;
        let product = apply_multiplier(h, f);
        let np = l2w_norm(&product, &w)
            .map_err(|_| MultiplierError::NotMultiplier { witness_index: index })?;
        best = best.max(np / nf);
    }
    Ok(best)
}

/// The quasi-Carleson integral
/// `∫_{C₊} |Σ_{k=1}^n C(n,k) F^{(n-k)} h^{(k)}|² dν_n` for 1 ≤ n ≤ m.
///
/// For m = 1, n = 1 this is exactly the `|h'|²`-Carleson integrand test.
pub fn quasi_carleson_integral(
    h: &AnalyticFn,
    f: &AnalyticFn,
    space: &SpaceSpec,
    n: usize,
    cfg: &QuadConfig,
) -> Result<f64, MultiplierError> {
    assert!(n >= 1 && n <= space.m(), "need 1 ≤ n ≤ m");
    let f_derivs: Vec<AnalyticFn> = (0..n).map(|k| f.derivative((n - 1 - k) as u32)).collect();
    let h_derivs: Vec<AnalyticFn> = (1..=n).map(|k| h.derivative(k as u32)).collect();
    let coeffs: Vec<f64> = (1..=n).map(|k| binomial(n as u32, k as u32)).collect();
    let eval_failed = Cell::new(false);
    let g = |z: Complex64| {
        let mut acc = Complex64::ZERO;
        for k in 1..=n {
            let fv = f_derivs[k - 1].eval(z);
            let hv = h_derivs[k - 1].eval(z);
            match (fv, hv) {
                (Ok(fv), Ok(hv)) => acc += coeffs[k - 1] * fv * hv,
                _ => {
                    eval_failed.set(true);
                    return Complex64::new(f64::NAN, 0.0);
                }
            }
        }
        acc
    };
    let out = halfplane_sq_integral(g, &space.measures()[n], cfg)?;
    if !out.converged || eval_failed.get() {
        return Err(MultiplierError::ToleranceNotMet);
    }
    Ok(out.value)
}

/// A measure `μ = |h^{(k)}|² dν_n + Σ mass_j · δ_{z_j}` on the half-plane,
/// to be tested as a Carleson measure for a target space.
///
/// The point atoms cover measures (zero, point masses) that the density form
/// cannot express.
#[derive(Debug, Clone)]
pub struct CarlesonMeasureSpec {
    /// Index n of the base measure ν_n = ν̃_n ⊗ λ.
    pub index: usize,
    /// Derivative order k applied to the density factor (0 ≤ k ≤ n).
    pub derivative_order: u32,
    /// The analytic density factor h.
    pub density_factor: AnalyticFn,
    /// Extra point masses (location in C₊, mass).
    pub point_atoms: Vec<(Complex64, f64)>,
}

impl CarlesonMeasureSpec {
    /// μ = ν_n itself (density factor ≡ 1).
    pub fn base_measure(index: usize) -> Self {
        CarlesonMeasureSpec {
            index,
            derivative_order: 0,
            density_factor: AnalyticFn::constant(Complex64::ONE),
            point_atoms: vec![],
        }
    }

    /// A single point mass.
    pub fn point_mass(z: Complex64, mass: f64) -> Self {
        CarlesonMeasureSpec {
            index: 0,
            derivative_order: 0,
            density_factor: AnalyticFn::constant(Complex64::ZERO),
            point_atoms: vec![(z, mass)],
        }
    }
}

/// Lower-bound estimate of the Carleson embedding constant of μ for the
/// target space: `max_z ∫ |k_z|² dμ / ‖k_z‖²` over the grid of kernel test
/// functions. A lower bound only — the true constant ranges over the whole
/// unit ball.
pub fn carleson_constant_estimate(
    mu: &CarlesonMeasureSpec,
    target: &SpaceSpec,
    z_grid: &[Complex64],
    cfg: &QuadConfig,
) -> Result<f64, MultiplierError> {
    assert!(
        (mu.derivative_order as usize) <= mu.index || mu.density_factor.is_zero(),
        "need k ≤ n"
    );
    assert!(mu.index <= target.m(), "base index exceeds the measure sequence");
    let w = target.total_weight();
    let hk = mu.density_factor.derivative(mu.derivative_order);
    let inner_cfg = cfg.inner();
    let mut best = 0.0f64;
    for &z in z_grid {
        let denom = kernel_norm_sq_weight(&w, z.re, cfg)?;
        let mut numer = 0.0f64;
        if !hk.is_zero() {
            let eval_failed = Cell::new(false);
            let g = |zeta: Complex64| {
                let kv = kernel_eval_weight(&w, z, zeta, &inner_cfg);
                let hv = hk.eval(zeta);
                match (kv, hv) {
                    (Ok(kv), Ok(hv)) => kv * hv,
                    _ => {
                        eval_failed.set(true);
                        Complex64::new(f64::NAN, 0.0)
                    }
                }
            };
            let out = halfplane_sq_integral(g, &target.measures()[mu.index], cfg)?;
            if eval_failed.get() {
                return Err(MultiplierError::ToleranceNotMet);
            }
            numer += out.value;
        }
        for &(zj, mass) in &mu.point_atoms {
            let kv = kernel_eval_weight(&w, z, zj, cfg)?;
            numer += mass * kv.norm_sqr();
        }
        best = best.max(numer / denom);
    }
    Ok(best)
}

/// The multiplier-side reproducing identity `⟨hF, k_z⟩ = h(z)·F(z)`:
/// left side by quadrature of the time-domain product, right side exact.
/// Returns |lhs - rhs|.
pub fn adjoint_identity_residual(
    h: &AnalyticFn,
    f: &ExpPoly,
    space: &SpaceSpec,
    z: Complex64,
    cfg: &QuadConfig,
) -> Result<f64, MultiplierError> {
    let product = apply_multiplier(h, f);
    let w = space.total_weight();
    weighted_moment(&product, &product, &w).map_err(|_| MultiplierError::NotMultiplier {
        witness_index: 0,
    })?;
    let rep = crate::kernel::reproducing_check(space, &product, z, cfg, f64::INFINITY)?;
    // reproducing_check's value is |⟨P, k_z⟩ - P(z)|; we need ⟨hF,k_z⟩ vs
    // h(z)F(z), and P(z) = h(z)F(z) holds exactly by the convolution
    // theorem, so the residual is the same number.
    let residual = rep.value.expect("reproducing_check always records a value");
    let exact_lhs = AnalyticFn::laplace(product).eval(z)?;
    let exact_rhs = h.eval(z)? * AnalyticFn::laplace(f.clone()).eval(z)?;
    Ok(residual.max((exact_lhs - exact_rhs).norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::presets;

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn resolvent1() -> AnalyticFn {
        AnalyticFn::resolvent(Complex64::ONE)
    }

    #[test]
    fn hinf_constant() {
        let h = AnalyticFn::constant(c(3.0, -4.0));
        assert!((hinf_norm(&h).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn hinf_resolvent_peaks_at_origin() {
        let v = hinf_norm(&resolvent1()).unwrap();
        assert!((v - 1.0).abs() < 1e-6, "got {v}");
    }

    #[test]
    fn hinf_cayley_is_one() {
        // (1-z)/(1+z) = 2/(1+z) - 1 is inner: |h| = 1 on the boundary
        let h = AnalyticFn::new(
            c(-1.0, 0.0),
            ExpPoly::real_term(2.0, 0, 1.0),
        );
        let v = hinf_norm(&h).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn hinf_detects_boundary_pole() {
        // L[1] = 1/z is unbounded near the origin
        let h = AnalyticFn::laplace(ExpPoly::constant(1.0));
        assert!(matches!(hinf_norm(&h), Err(MultiplierError::UnboundedDetected { .. })));
    }

    #[test]
    fn lower_bound_constant_multiplier() {
        let h = AnalyticFn::constant(c(2.0, 0.0));
        let tests = vec![
            ExpPoly::real_term(1.0, 0, 1.0),
            ExpPoly::real_term(0.5, 1, 2.0),
        ];
        let v = multiplier_lower_bound(&h, &presets::hardy(), &tests).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn lower_bound_resolvent_on_hardy() {
        // hF = L[e^{-t} ∗ e^{-t}] = L[t e^{-t}]: ratio = (1/2)/√(1/2) = √(1/2)
        let v = multiplier_lower_bound(
            &resolvent1(),
            &presets::hardy(),
            &[ExpPoly::real_term(1.0, 0, 1.0)],
        )
        .unwrap();
        assert!((v - 0.5f64.sqrt()).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn not_multiplier_detected() {
        // h = 1/z = L[1]: product with e^{-t} contains a constant term,
        // which is in no weighted space here.
        let h = AnalyticFn::laplace(ExpPoly::constant(1.0));
        let err = multiplier_lower_bound(
            &h,
            &presets::hardy(),
            &[ExpPoly::real_term(1.0, 0, 1.0)],
        );
        assert!(matches!(err, Err(MultiplierError::NotMultiplier { witness_index: 0 })));
    }

    #[test]
    fn adjoint_identity_on_dirichlet() {
        let h = resolvent1();
        let f = ExpPoly::real_term(1.0, 0, 2.0);
        for z in [c(1.0, 0.0), c(0.5, 1.5), c(2.0, -0.3)] {
            let res =
                adjoint_identity_residual(&h, &f, &presets::dirichlet(), z, &cfg()).unwrap();
            assert!(res < 1e-8, "residual {res} at {z}");
        }
    }

    #[test]
    fn quasi_carleson_worked_dirichlet_value() {
        // h = F = 1/(z+1), n = 1 on the Dirichlet preset: 3/32
        let h = resolvent1();
        let v = quasi_carleson_integral(&h, &h, &presets::dirichlet(), 1, &cfg()).unwrap();
        assert!((v - 3.0 / 32.0).abs() < 1e-8, "got {v}");
    }

    #[test]
    fn quasi_carleson_constant_h_vanishes() {
        let h = AnalyticFn::constant(c(5.0, 0.0));
        let f = resolvent1();
        let v = quasi_carleson_integral(&h, &f, &presets::dirichlet(), 1, &cfg()).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn quasi_carleson_zero_f_vanishes() {
        let h = resolvent1();
        let f = AnalyticFn::laplace(ExpPoly::zero());
        let v = quasi_carleson_integral(&h, &f, &presets::dirichlet(), 1, &cfg()).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn carleson_self_embedding_of_hardy_is_one() {
        // μ = ν₀: ∫|k_z|² dν₀ = ‖k_z‖², so the ratio is 1 at every z
        let mu = CarlesonMeasureSpec::base_measure(0);
        let grid = [c(0.5, 0.0), c(1.0, 1.0)];
        let v = carleson_constant_estimate(&mu, &presets::hardy(), &grid, &cfg()).unwrap();
        assert!((v - 1.0).abs() < 1e-6, "got {v}");
    }

    #[test]
    fn carleson_zero_measure() {
        let mu = CarlesonMeasureSpec {
            index: 0,
            derivative_order: 0,
            density_factor: AnalyticFn::constant(Complex64::ZERO),
            point_atoms: vec![],
        };
        let v = carleson_constant_estimate(
            &mu,
            &presets::hardy(),
            &[c(1.0, 0.0)],
            &cfg(),
        )
        .unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn carleson_point_mass_value() {
        // μ = δ_{z₀}: at z = z₀ the ratio is k_{z₀}(z₀) = 1/(2 Re z₀)
        let z0 = c(0.75, 0.4);
        let mu = CarlesonMeasureSpec::point_mass(z0, 1.0);
        let v = carleson_constant_estimate(&mu, &presets::hardy(), &[z0], &cfg()).unwrap();
        assert!((v - 1.0 / (2.0 * z0.re)).abs() < 1e-8, "got {v}");
    }

    #[test]
    fn quasi_carleson_uniformity_implies_finite_bound() {
        // desk-scale version of the sufficiency direction: with
        // c₁ = sup ∫|F h'|²/‖F‖², the bound 2(‖h‖²_∞ + Σcₙ)^{1/2} dominates
        // every observed ratio ‖hF‖/‖F‖.
        let space = presets::dirichlet();
        let w = space.total_weight();
        let h = resolvent1();
        let tests = vec![
            ExpPoly::real_term(1.0, 0, 1.0),
            ExpPoly::real_term(1.0, 1, 1.5),
            ExpPoly::real_term(0.7, 0, 0.6),
            ExpPoly::real_term(1.0, 2, 2.0),
        ];
        let mut c1 = 0.0f64;
        for f in &tests {
            let ff = AnalyticFn::laplace(f.clone());
            let qc = quasi_carleson_integral(&h, &ff, &space, 1, &cfg()).unwrap();
            let norm_sq = weighted_moment(f, f, &w).unwrap().re;
            c1 = c1.max(qc / norm_sq);
        }
        let hinf = hinf_norm(&h).unwrap();
        let predicted = 2.0 * (hinf * hinf + c1).sqrt();
        let observed = multiplier_lower_bound(&h, &space, &tests).unwrap();
        assert!(
            observed <= predicted + 1e-9,
            "observed {observed} exceeds predicted {predicted}"
        );
    }
}

//! Seeded random test corpora: exponential polynomials constrained to lie in
//! a given weighted space, and random half-plane points.
//!
//! Membership is arranged up front: a weight whose smallest power is β_min
//! needs every term power k to satisfy 2k + β_min > -1, so draws respect a
//! per-space minimum power instead of being filtered after the fact.

use crate::exppoly::{ExpPoly, ExpTerm, WeightExpr};
use num_complex::Complex64;
use rand::Rng;

#[derive(Debug, Clone, Copy)]
pub struct ExpPolyConstraints {
    pub max_terms: usize,
    pub min_power: u32,
    pub max_power: u32,
    pub rate_min: f64,
    pub rate_max: f64,
}

impl Default for ExpPolyConstraints {
    fn default() -> Self {
        ExpPolyConstraints { max_terms: 4, min_power: 0, max_power: 3, rate_min: 0.3, rate_max: 3.0 }
    }
}

impl ExpPolyConstraints {
    /// Constraints guaranteeing membership in L²_w for the given weight.
    pub fn for_weight(w: &WeightExpr) -> Self {
        ExpPolyConstraints { min_power: membership_min_power(w), ..Default::default() }
    }
}

/// Smallest term power k with 2k + β_min > -1.
pub fn membership_min_power(w: &WeightExpr) -> u32 {
    let beta_min = w.min_power();
    let bound = (-1.0 - beta_min) / 2.0;
    if bound < 0.0 {
        0
    } else {
        bound.floor() as u32 + 1
    }
}

/// A random exponential polynomial within the constraints: 1..=max_terms
/// terms, complex coefficients in the unit box scaled by 2, real rates.
pub fn random_exppoly<R: Rng>(rng: &mut R, c: &ExpPolyConstraints) -> ExpPoly {
    let n_terms = rng.random_range(1..=c.max_terms);
    let terms: Vec<ExpTerm> = (0..n_terms)
        .map(|_| ExpTerm {
            coeff: Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
            power: rng.random_range(c.min_power..=c.max_power),
            rate: Complex64::new(rng.random_range(c.rate_min..c.rate_max), 0.0),
        })
        .collect();
    ExpPoly::from_terms(terms).expect("constraint-respecting terms are valid")
}

/// A random point of the open right half-plane.
pub fn random_point<R: Rng>(rng: &mut R, re_max: f64, im_max: f64) -> Complex64 {
    Complex64::new(rng.random_range(0.1..re_max), rng.random_range(-im_max..im_max))
}

//! Derivation of the weights `w_n(t) = 2π t^{2n} ∫₀^∞ e^{-2rt} dν̃_n(r)` and
//! their sum `w_(m) = Σ w_n`, in closed form from a measure sequence.
//!
//! An atom (r₀, mass) at index n contributes `2π·mass·t^{2n}·e^{-2r₀t}`; a
//! density c·r^α dr contributes `2π·c·Γ(α+1)·2^{-(α+1)}·t^{2n-α-1}`.

use crate::exppoly::{WeightError, WeightExpr, WeightTerm};
use crate::gamma::gamma;
use crate::measure::{MeasureError, MeasureSpec};
use std::f64::consts::PI;

/// An ordered sequence of measures (ν̃₀, …, ν̃_m); m = length - 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSpec {
    measures: Vec<MeasureSpec>,
}

impl SpaceSpec {
    pub fn new(measures: Vec<MeasureSpec>) -> Result<Self, MeasureError> {
        if measures.is_empty() {
            return Err(MeasureError::EmptyMeasure);
        }
        Ok(SpaceSpec { measures })
    }

    pub fn m(&self) -> usize {
        self.measures.len() - 1
    }

    pub fn measures(&self) -> &[MeasureSpec] {
        &self.measures
    }

    pub fn derive_weights(&self) -> DerivedWeights {
        derive_weights(self)
    }

    /// The total weight w_(m); shorthand for `derive_weights().total`.
    pub fn total_weight(&self) -> WeightExpr {
        derive_weights(self).total
    }
}

/// The per-index weights w₀, …, w_m and their term-level sum w_(m).
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedWeights {
    pub per_index: Vec<WeightExpr>,
    pub total: WeightExpr,
}

pub fn derive_weights(space: &SpaceSpec) -> DerivedWeights {
    let per_index: Vec<WeightExpr> = space
        .measures()
        .iter()
        .enumerate()
        .map(|(n, measure)| {
            let mut terms = Vec::new();
            for a in measure.atoms() {
                terms.push(WeightTerm {
                    coeff: 2.0 * PI * a.mass,
                    power: 2.0 * n as f64,
                    rate: 2.0 * a.location,
                });
            }
            for p in measure.powers() {
                terms.push(WeightTerm {
                    coeff: 2.0 * PI * p.coeff * gamma(p.exponent + 1.0)
                        * 2f64.powf(-(p.exponent + 1.0)),
                    power: 2.0 * n as f64 - p.exponent - 1.0,
                    rate: 0.0,
                });
            }
            WeightExpr::new(terms).expect("nonempty measure yields nonempty weight")
        })
        .collect();
    let total = per_index
        .iter()
        .skip(1)
        .fold(per_index[0].clone(), |acc, w| acc.add(w));
    DerivedWeights { per_index, total }
}

/// Checked pointwise evaluation of a weight at t > 0.
pub fn eval_weight(w: &WeightExpr, t: f64) -> Result<f64, WeightError> {
    if !(t > 0.0) {
        return Err(WeightError::NonPositiveArgument { t });
    }
    Ok(w.eval(t))
}

/// Named measure-sequence presets covering the classical spaces.
///
/// Normalisation constants are explicit, never implicit: `hardy` uses mass
/// 1/2π so that w ≡ 1, `bergman(α)` uses density coefficient 1/π so that
/// α = 0 gives w(t) = 1/t, and `bergman_literal(α)` keeps coefficient 1
/// (the raw dν̃ = r^α dr). `dirichlet` is δ₀/2π plus Lebesgue/π (w = 1 + t);
/// `hardy_sobolev` is two unit atoms at the origin (w = 2π(1+t²)).
pub mod presets {
    use super::*;

    pub fn hardy() -> SpaceSpec {
        SpaceSpec::new(vec![MeasureSpec::atom(0.0, 0.5 / PI).unwrap()]).unwrap()
    }

    pub fn bergman(alpha: f64) -> Result<SpaceSpec, MeasureError> {
        Ok(SpaceSpec::new(vec![MeasureSpec::power(1.0 / PI, alpha)?]).unwrap())
    }

    pub fn bergman_literal(alpha: f64) -> Result<SpaceSpec, MeasureError> {
        Ok(SpaceSpec::new(vec![MeasureSpec::power(1.0, alpha)?]).unwrap())
    }

    pub fn dirichlet() -> SpaceSpec {
        SpaceSpec::new(vec![
            MeasureSpec::atom(0.0, 0.5 / PI).unwrap(),
            MeasureSpec::power(1.0 / PI, 0.0).unwrap(),
        ])
        .unwrap()
    }

    pub fn hardy_sobolev() -> SpaceSpec {
        SpaceSpec::new(vec![
            MeasureSpec::atom(0.0, 1.0).unwrap(),
            MeasureSpec::atom(0.0, 1.0).unwrap(),
        ])
        .unwrap()
    }

    /// Parse a preset name: `hardy`, `dirichlet`, `hardy_sobolev`,
    /// `bergman(α)`, `bergman_literal(α)`.
    pub fn by_name(name: &str) -> Option<SpaceSpec> {
        let name = name.trim();
        match name {
            "hardy" => return Some(hardy()),
            "dirichlet" => return Some(dirichlet()),
            "hardy_sobolev" => return Some(hardy_sobolev()),
            _ => {}
        }
        for (prefix, build) in [
            ("bergman_literal", bergman_literal as fn(f64) -> Result<SpaceSpec, MeasureError>),
            ("bergman", bergman as fn(f64) -> Result<SpaceSpec, MeasureError>),
        ] {
            if let Some(rest) = name.strip_prefix(prefix) {
                let inner = rest.strip_prefix('(')?.strip_suffix(')')?;
                let alpha: f64 = inner.trim().parse().ok()?;
                return build(alpha).ok();
            }
        }
        None
    }

    pub const NAMES: [&str; 5] =
        ["hardy", "bergman(alpha)", "bergman_literal(alpha)", "dirichlet", "hardy_sobolev"];
}

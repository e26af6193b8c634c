//! JSON configuration: measure sequences (or preset names), quadrature
//! tolerances, evaluation grids and named function corpora, with a SHA-256
//! hash of the effective configuration embedded in every report.

use crate::exppoly::{ExpPoly, ExpTerm};
use crate::measure::{log_grid, Atom, MeasureSpec, PowerDensity};
use crate::quad::QuadConfig;
use crate::weight::{presets, SpaceSpec};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable overriding the default quadrature relative
/// tolerance (only consulted when the config file does not set one).
pub const TOL_ENV_VAR: &str = "ZENSPACE_REL_TOL";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("config {path} is not valid JSON: {source}")]
    Parse { path: String, source: serde_json::Error },
    #[error("config field `{field}`: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field: field.into(), message: message.into() }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub schema_version: Option<u32>,
    /// Preset name overriding `measures`: hardy | bergman(α) |
    /// bergman_literal(α) | dirichlet | hardy_sobolev.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// Redundant declaration of m; validated against `measures` when both
    /// are present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measures: Option<Vec<MeasureConfig>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad: Option<QuadTolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grids: Option<GridsConfig>,
    /// Named function lists as term arrays.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corpus: Option<BTreeMap<String, Vec<Vec<TermConfig>>>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureConfig {
    #[serde(default)]
    pub atoms: Vec<AtomConfig>,
    #[serde(default)]
    pub powers: Vec<PowerConfig>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomConfig {
    pub r: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerConfig {
    pub c: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadTolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_subdivisions: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridsConfig {
    /// Time-domain grid for the convolution and domination conditions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<f64>>,
    /// Shift grid for kernel norms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<f64>>,
    /// Δ₂ grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<f64>>,
}

/// One exponential-polynomial term `coeff · t^power · e^{-rate·t}` in the
/// wire format.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub coeff_re: f64,
    #[serde(default)]
    pub coeff_im: f64,
    pub power: u32,
    pub rate_re: f64,
    #[serde(default)]
    pub rate_im: f64,
}

impl TermConfig {
    pub fn to_term(self) -> ExpTerm {
        ExpTerm {
            coeff: Complex64::new(self.coeff_re, self.coeff_im),
            power: self.power,
            rate: Complex64::new(self.rate_re, self.rate_im),
        }
    }
}

/// Parse a term array into an exponential polynomial.
pub fn exppoly_from_terms(field: &str, terms: &[TermConfig]) -> Result<ExpPoly, ConfigError> {
    ExpPoly::from_terms(terms.iter().map(|t| t.to_term()).collect())
        .map_err(|e| invalid(field, e.to_string()))
}

/// Wire format for a multiplier candidate `offset + L[terms]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticFnConfig {
    #[serde(default)]
    pub offset_re: f64,
    #[serde(default)]
    pub offset_im: f64,
    #[serde(default)]
    pub terms: Vec<TermConfig>,
}

impl AnalyticFnConfig {
    pub fn to_analytic(&self, field: &str) -> Result<crate::spaces::AnalyticFn, ConfigError> {
        Ok(crate::spaces::AnalyticFn::new(
            Complex64::new(self.offset_re, self.offset_im),
            exppoly_from_terms(field, &self.terms)?,
        ))
    }
}

/// Wire format for a half-plane point.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointConfig {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// Wire format for a Carleson measure `|h^{(k)}|² dν_n + Σ mass·δ_z`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarlesonMuConfig {
    #[serde(default)]
    pub index: usize,
    #[serde(default)]
    pub derivative_order: u32,
    pub h: AnalyticFnConfig,
    #[serde(default)]
    pub atoms: Vec<PointMassConfig>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointMassConfig {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
    pub mass: f64,
}

impl CarlesonMuConfig {
    pub fn to_spec(&self) -> Result<crate::multiplier::CarlesonMeasureSpec, ConfigError> {
        for (i, a) in self.atoms.iter().enumerate() {
            if !(a.re > 0.0) || !(a.mass > 0.0) {
                return Err(invalid(
                    &format!("mu.atoms[{i}]"),
                    "point masses need re > 0 and mass > 0",
                ));
            }
        }
        Ok(crate::multiplier::CarlesonMeasureSpec {
            index: self.index,
            derivative_order: self.derivative_order,
            density_factor: self.h.to_analytic("mu.h")?,
            point_atoms: self
                .atoms
                .iter()
                .map(|a| (Complex64::new(a.re, a.im), a.mass))
                .collect(),
        })
    }
}

/// A fully validated configuration ready for the runners.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub space: SpaceSpec,
    pub quad: QuadConfig,
    pub t_grid: Vec<f64>,
    pub a_grid: Vec<f64>,
    pub r_grid: Vec<f64>,
    pub corpus: BTreeMap<String, Vec<ExpPoly>>,
    /// SHA-256 of the canonical serialized effective config.
    pub config_hash: String,
    pub preset_name: Option<String>,
}

pub fn load_file(path: &Path) -> Result<ConfigFile, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// Resolve a config file (possibly empty) plus an optional command-line
/// preset override into a validated configuration.
pub fn resolve(
    mut file: ConfigFile,
    preset_flag: Option<&str>,
) -> Result<ResolvedConfig, ConfigError> {
    if let Some(v) = file.schema_version {
        if v != SCHEMA_VERSION {
            return Err(invalid(
                "schema_version",
                format!("unsupported version {v}, expected {SCHEMA_VERSION}"),
            ));
        }
    }
    if let Some(p) = preset_flag {
        file.preset = Some(p.to_string());
    }

    let space = match (&file.preset, &file.measures) {
        (Some(name), _) => presets::by_name(name).ok_or_else(|| {
            invalid(
                "preset",
                format!("unknown preset `{name}`; known: {:?}", presets::NAMES),
            )
        })?,
        (None, Some(measures)) => {
            if measures.is_empty() {
                return Err(invalid("measures", "must be nonempty"));
            }
            let mut specs = Vec::with_capacity(measures.len());
            for (i, mc) in measures.iter().enumerate() {
                let spec = MeasureSpec::new(
                    mc.atoms.iter().map(|a| Atom { location: a.r, mass: a.mass }).collect(),
                    mc.powers
                        .iter()
                        .map(|p| PowerDensity { coeff: p.c, exponent: p.alpha })
                        .collect(),
                )
                .map_err(|e| invalid(&format!("measures[{i}]"), e.to_string()))?;
                specs.push(spec);
            }
            SpaceSpec::new(specs).map_err(|e| invalid("measures", e.to_string()))?
        }
        (None, None) => {
            return Err(invalid("preset", "either `preset` or `measures` is required"));
        }
    };
    if let Some(m) = file.m {
        if m != space.m() {
            return Err(invalid(
                "m",
                format!("declared m = {m} but the measure sequence has m = {}", space.m()),
            ));
        }
    }

    let defaults = QuadConfig::default();
    let env_rel = std::env::var(TOL_ENV_VAR).ok().and_then(|s| s.parse::<f64>().ok());
    let q = file.quad.unwrap_or(QuadTolerances { rel_tol: None, abs_tol: None, max_subdivisions: None });
    let quad = QuadConfig::new(
        q.rel_tol.or(env_rel).unwrap_or(defaults.rel_tol),
        q.abs_tol.unwrap_or(defaults.abs_tol),
        q.max_subdivisions.unwrap_or(defaults.max_subdivisions),
    )
    .ok_or_else(|| invalid("quad", "tolerances must be positive and max_subdivisions ≥ 1"))?;

    let grids = file.grids.clone().unwrap_or_default();
    let t_grid = match grids.t {
        Some(t) => {
            if t.is_empty() || t.iter().any(|&x| !(x > 0.0)) {
                return Err(invalid("grids.t", "must be nonempty and strictly positive"));
            }
            t
        }
        None => log_grid(0.01, 100.0, 6),
    };
    let a_grid = match grids.a {
        Some(a) => {
            if a.is_empty() || a.iter().any(|&x| !(x > 0.0)) {
                return Err(invalid("grids.a", "must be nonempty and strictly positive"));
            }
            a
        }
        None => (0..=12).map(|k| 1e-6 * 4f64.powi(k)).collect(),
    };
    let r_grid = match grids.r {
        Some(r) => {
            if r.is_empty() || r.iter().any(|&x| !(x > 0.0)) {
                return Err(invalid("grids.r", "must be nonempty and strictly positive"));
            }
            r
        }
        None => log_grid(0.1, 100.0, 8),
    };

    let mut corpus = BTreeMap::new();
    if let Some(named) = &file.corpus {
        for (name, fns) in named {
            let mut polys = Vec::with_capacity(fns.len());
            for (i, terms) in fns.iter().enumerate() {
                polys.push(exppoly_from_terms(&format!("corpus.{name}[{i}]"), terms)?);
            }
            corpus.insert(name.clone(), polys);
        }
    }

    // canonical serialization of the effective config is what gets hashed
    let canonical = serde_json::to_vec(&file).expect("config serializes");
    let config_hash = hex_digest(&canonical);

    Ok(ResolvedConfig {
        space,
        quad,
        t_grid,
        a_grid,
        r_grid,
        corpus,
        config_hash,
        preset_name: file.preset,
    })
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_only_config() {
        let rc = resolve(ConfigFile::default(), Some("hardy_sobolev")).unwrap();
        assert_eq!(rc.space.m(), 1);
        assert_eq!(rc.quad, QuadConfig::default());
        assert_eq!(rc.preset_name.as_deref(), Some("hardy_sobolev"));
    }

    #[test]
    fn measures_config_parses() {
        let json = r#"{
            "schema_version": 1,
            "m": 1,
            "measures": [
                {"atoms": [{"r": 0.0, "mass": 1.0}], "powers": []},
                {"atoms": [], "powers": [{"c": 1.0, "alpha": -0.5}]}
            ],
            "quad": {"rel_tol": 1e-9},
            "grids": {"t": [0.5, 1.0, 2.0]},
            "corpus": {"basic": [[{"coeff_re": 1.0, "power": 0, "rate_re": 1.0}]]}
        }"#;
        let file: ConfigFile = serde_json::from_str(json).unwrap();
        let rc = resolve(file, None).unwrap();
        assert_eq!(rc.space.m(), 1);
        assert_eq!(rc.quad.rel_tol, 1e-9);
        assert_eq!(rc.t_grid, vec![0.5, 1.0, 2.0]);
        assert_eq!(rc.corpus["basic"].len(), 1);
    }

    #[test]
    fn m_mismatch_rejected() {
        let json = r#"{"m": 2, "measures": [{"atoms": [{"r": 0, "mass": 1}]}]}"#;
        let file: ConfigFile = serde_json::from_str(json).unwrap();
        let err = resolve(file, None).unwrap_err();
        assert!(matches!(err, ConfigError::Invalid { ref field, .. } if field == "m"));
    }

    #[test]
    fn unknown_preset_rejected() {
        let err = resolve(ConfigFile::default(), Some("nope")).unwrap_err();
        assert!(matches!(err, ConfigError::Invalid { ref field, .. } if field == "preset"));
    }

    #[test]
    fn invalid_measure_field_is_located() {
        let json = r#"{"measures": [{"atoms": [{"r": -1.0, "mass": 1.0}]}]}"#;
        let file: ConfigFile = serde_json::from_str(json).unwrap();
        let err = resolve(file, None).unwrap_err();
        match err {
            ConfigError::Invalid { field, .. } => assert_eq!(field, "measures[0]"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = resolve(ConfigFile::default(), Some("hardy")).unwrap();
        let b = resolve(ConfigFile::default(), Some("hardy")).unwrap();
        let c = resolve(ConfigFile::default(), Some("dirichlet")).unwrap();
        assert_eq!(a.config_hash, b.config_hash);
        assert_ne!(a.config_hash, c.config_hash);
        assert_eq!(a.config_hash.len(), 64);
    }
}

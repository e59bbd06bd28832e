//! Structured-text (JSON) configuration: which category to build, at which
//! truncation and coefficient mode, and which checks to run on it.
//!
//! Two file formats live here.  A *scenario file* names a single category
//! (used by `hall-number --scenario`); a *run config* wraps a scenario with a
//! truncation, a coefficient mode, and a list of named checks (used by
//! `run`).  Both are plain JSON with tagged enums, so a malformed file fails
//! with a line/column diagnostic rather than a partial parse.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::hallcore::{Cat, HallAlgebra, HallError};
use crate::jordan::{self, JordanCat};
use crate::repfield::{fixtures, IsoClass};
use crate::scalar::QMode;

// ============================ Error type ============================

/// Configuration-layer failures: unreadable files, malformed JSON, or
/// well-formed JSON describing something the tool cannot build.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

// ============================ Scenario spec ============================

/// A buildable category or torus, as named in configuration files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScenarioSpec {
    /// A bundled quiver category: `single_vertex`, `a2`..`a5`, or
    /// `bound_square`, over the prime field `F_p`.
    Quiver { name: String, p: u32 },
    /// Nilpotent-operator classes over `F_p`; `max_len` caps block length
    /// and defaults to the truncation bound.
    Jordan {
        p: u32,
        #[serde(default)]
        max_len: Option<usize>,
    },
    /// A rank-2 weighted Grothendieck lattice `(a0, a1, d0, d1)` with
    /// `d0·a0 = d1·a1`, for orbit and dimension-formula checks.
    ValuedRank2 { a0: i64, a1: i64, d0: i64, d1: i64 },
    /// A rank-2 quantum torus `x1·x0 = q^{d0·a0}·x0·x1`, for the
    /// exponential-series identities.
    Torus {
        a0: u32,
        a1: u32,
        d0: u32,
        d1: u32,
        #[serde(default = "default_torus_order")]
        order: u32,
    },
}

fn default_torus_order() -> u32 {
    8
}

impl ScenarioSpec {
    /// Short display name used in report records.
    pub fn display_name(&self) -> String {
        match self {
            ScenarioSpec::Quiver { name, p } => format!("{}(p={})", name, p),
            ScenarioSpec::Jordan { p, .. } => format!("jordan(p={})", p),
            ScenarioSpec::ValuedRank2 { a0, a1, d0, d1 } => {
                format!("rank2(a={},{} d={},{})", a0, a1, d0, d1)
            }
            ScenarioSpec::Torus { a0, a1, d0, d1, order } => {
                format!("torus(a={},{} d={},{} order={})", a0, a1, d0, d1, order)
            }
        }
    }

    /// Builds the category for quiver/jordan kinds; `None` for the kinds
    /// that do not carry a module category.
    pub fn build_cat(&self, trunc: &[usize]) -> Result<Option<Cat>, ConfigError> {
        match self {
            ScenarioSpec::Quiver { name, p } => {
                let scn = fixtures::by_name(name, *p).ok_or_else(|| {
                    ConfigError::Invalid(format!(
                        "unknown quiver scenario {:?}; bundled names: single_vertex, a2, a3, a4, a5, bound_square",
                        name
                    ))
                })?;
                Ok(Some(Cat::Quiver(scn)))
            }
            ScenarioSpec::Jordan { p, max_len } => {
                let len = max_len.unwrap_or_else(|| trunc.first().copied().unwrap_or(3));
                Ok(Some(Cat::Jordan(JordanCat::new(*p, len))))
            }
            _ => Ok(None),
        }
    }
}

/// Reads a scenario file (a bare [`ScenarioSpec`]) from disk.
pub fn load_scenario(path: &Path) -> Result<ScenarioSpec, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
        path: path.display().to_string(),
        source,
    })
}

// ============================== Run config ==============================

/// One requested check: a registered name plus free-form options the check
/// may consult (orders, depths, seeds, index pairs).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRequest {
    pub name: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub options: BTreeMap<String, serde_json::Value>,
}

impl CheckRequest {
    pub fn named(name: &str) -> Self {
        CheckRequest { name: name.to_string(), options: BTreeMap::new() }
    }

    /// Integer-valued option accessor (JSON numbers only).
    pub fn opt_i64(&self, key: &str) -> Option<i64> {
        self.options.get(key).and_then(|v| v.as_i64())
    }

    pub fn opt_usize(&self, key: &str) -> Option<usize> {
        self.opt_i64(key).and_then(|v| usize::try_from(v).ok())
    }
}

/// A whole run: scenario, truncation, coefficient mode, checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioSpec,
    #[serde(default)]
    pub truncation: Vec<usize>,
    /// `"specialized"` (exact integers at q = p) or `"symbolic"` (Laurent
    /// polynomials in q, available on one- and two-vertex quivers).
    #[serde(default = "default_q_mode")]
    pub q_mode: String,
    pub checks: Vec<CheckRequest>,
}

fn default_q_mode() -> String {
    "specialized".to_string()
}

impl RunConfig {
    pub fn from_str_validated(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|source| ConfigError::Parse {
            path: origin.to_string(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_str_validated(&text, &path.display().to_string())
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.checks.is_empty() {
            return Err(ConfigError::Invalid("config requests no checks".into()));
        }
        match self.q_mode.as_str() {
            "specialized" | "symbolic" => {}
            other => {
                return Err(ConfigError::Invalid(format!(
                    "unknown q_mode {:?}; expected \"specialized\" or \"symbolic\"",
                    other
                )))
            }
        }
        match &self.scenario {
            ScenarioSpec::ValuedRank2 { a0, a1, d0, d1 } => {
                if *a0 <= 0 || *a1 <= 0 || *d0 <= 0 || *d1 <= 0 {
                    return Err(ConfigError::Invalid(
                        "rank-2 weights and symmetrisers must be positive".into(),
                    ));
                }
                if a0 * d0 != a1 * d1 {
                    return Err(ConfigError::Invalid(format!(
                        "weights do not symmetrise: a0·d0 = {} but a1·d1 = {}",
                        a0 * d0,
                        a1 * d1
                    )));
                }
            }
            ScenarioSpec::Torus { a0, a1, d0, d1, .. } => {
                if *a0 == 0 || *a1 == 0 || *d0 == 0 || *d1 == 0 {
                    return Err(ConfigError::Invalid(
                        "torus weights and symmetrisers must be positive".into(),
                    ));
                }
                if u64::from(*a0) * u64::from(*d0) != u64::from(*a1) * u64::from(*d1) {
                    return Err(ConfigError::Invalid(format!(
                        "torus weights do not symmetrise: a0·d0 = {} but a1·d1 = {}",
                        u64::from(*a0) * u64::from(*d0),
                        u64::from(*a1) * u64::from(*d1)
                    )));
                }
            }
            _ => {}
        }
        for c in &self.checks {
            if !crate::checks::is_registered(&c.name) {
                return Err(ConfigError::Invalid(format!(
                    "unknown check {:?}; see `hall-forge list-checks`",
                    c.name
                )));
            }
        }
        Ok(())
    }

    /// The coefficient mode the config asks for.  For `"specialized"` the
    /// prime is read off the scenario; kinds without a field prime fall back
    /// to q = 2 (torus checks accept any specialization point).
    pub fn mode(&self) -> QMode {
        match self.q_mode.as_str() {
            "symbolic" => QMode::Symbolic,
            _ => {
                let p = match &self.scenario {
                    ScenarioSpec::Quiver { p, .. } | ScenarioSpec::Jordan { p, .. } => *p,
                    _ => 2,
                };
                QMode::at_int(p as i64)
            }
        }
    }

    /// Builds the truncated Hall algebra when the scenario is a module
    /// category; `None` for lattice/torus scenarios.
    pub fn build_algebra(&self) -> Result<Option<HallAlgebra>, HallError> {
        let cat = match self
            .scenario
            .build_cat(&self.truncation)
            .map_err(|e| HallError::Unsupported(e.to_string()))?
        {
            Some(cat) => cat,
            None => return Ok(None),
        };
        let trunc = if self.truncation.is_empty() {
            vec![2; cat.grade_rank()]
        } else {
            self.truncation.clone()
        };
        Ok(Some(HallAlgebra::new(cat, trunc, self.mode())?))
    }
}

// ========================= Class-expression syntax =========================

/// Parses a class expression against a category's label table.
///
/// Quiver categories use summand syntax: `"S0"`, `"E^2"`, `"S1^2 + E"`
/// (labels from the scenario's indecomposable table, `^` for multiplicity,
/// `+` between summands, `"0"` for the zero object).  The nilpotent-operator
/// category uses block-length lists: `"2,1"` means blocks of sizes 2 and 1;
/// the empty string or `"0"` is the zero object.
pub fn parse_class(cat: &Cat, text: &str) -> Result<IsoClass, ConfigError> {
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed == "0" {
        return Ok(IsoClass::empty());
    }
    match cat {
        Cat::Quiver(scn) => {
            let mut acc = IsoClass::empty();
            for part in trimmed.split('+') {
                let part = part.trim();
                let (label, mult) = match part.split_once('^') {
                    Some((l, m)) => {
                        let mult: usize = m.trim().parse().map_err(|_| {
                            ConfigError::Invalid(format!("bad multiplicity in {:?}", part))
                        })?;
                        (l.trim(), mult)
                    }
                    None => (part, 1),
                };
                if mult == 0 {
                    continue;
                }
                let idx = scn.table.index_of(label).ok_or_else(|| {
                    ConfigError::Invalid(format!(
                        "unknown summand label {:?}; known labels: {}",
                        label,
                        scn.table
                            .entries
                            .iter()
                            .map(|e| e.label.as_str())
                            .collect::<Vec<_>>()
                            .join(", ")
                    ))
                })?;
                acc = acc.add(&IsoClass::with_multiplicity(idx, mult));
            }
            Ok(acc)
        }
        Cat::Jordan(_) => {
            let mut parts = Vec::new();
            for piece in trimmed.split(',') {
                let n: usize = piece.trim().parse().map_err(|_| {
                    ConfigError::Invalid(format!("bad block length {:?} in {:?}", piece, trimmed))
                })?;
                if n == 0 {
                    return Err(ConfigError::Invalid("block lengths must be positive".into()));
                }
                parts.push(n);
            }
            parts.sort_unstable_by(|a, b| b.cmp(a));
            Ok(jordan::class_of(&parts))
        }
    }
}

// ================================= Tests =================================

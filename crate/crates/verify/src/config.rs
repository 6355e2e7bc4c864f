use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("unknown suite `{0}` (see `verify list`)")]
    UnknownSuite(String),
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for `{key}`")]
    BadValue { key: String, value: String },
    #[error("{what} = {value} exceeds the cap {cap}")]
    CapExceeded { what: &'static str, value: usize, cap: usize },
    #[error("cannot read config file {path}: {reason}")]
    Unreadable { path: PathBuf, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    PropertyIi,
    StandardSubspace,
    Tomita,
    Quasifree,
    Twist,
    IdentityChain,
    SpinStatistics,
    WedgeGeometry,
    Covering,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::PropertyIi,
        Suite::StandardSubspace,
        Suite::Tomita,
        Suite::Quasifree,
        Suite::Twist,
        Suite::IdentityChain,
        Suite::SpinStatistics,
        Suite::WedgeGeometry,
        Suite::Covering,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::PropertyIi => "property_ii",
            Suite::StandardSubspace => "standard_subspace",
            Suite::Tomita => "tomita",
            Suite::Quasifree => "quasifree",
            Suite::Twist => "twist",
            Suite::IdentityChain => "identity_chain",
            Suite::SpinStatistics => "spin_statistics",
            Suite::WedgeGeometry => "wedge_geometry",
            Suite::Covering => "covering",
        }
    }

    pub fn default_tol(self) -> f64 {
        match self {
            Suite::PropertyIi | Suite::StandardSubspace | Suite::Tomita | Suite::Quasifree => 1e-8,
            Suite::Twist | Suite::WedgeGeometry => 1e-12,
            Suite::IdentityChain => 1e-10,
            Suite::SpinStatistics => 0.0,
            Suite::Covering => 1e-11,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::PropertyIi => "boost conjugation of the rotation generator in irreducible sl(2,R) reps",
            Suite::StandardSubspace => "modular laws of random standard subspaces",
            Suite::Tomita => "Tomita-Takesaki theorem and KMS identity by brute force",
            Suite::Quasifree => "GNS modular spectrum vs closed-form quasi-free spectrum",
            Suite::Twist => "twist relations and twisted locality on the CAR algebra",
            Suite::IdentityChain => "one-particle wedge identities, word reduction vs pointwise",
            Suite::SpinStatistics => "rotation by 2π against CAR statistics phases",
            Suite::WedgeGeometry => "PCT region map and boosted cone inclusion",
            Suite::Covering => "covering map homomorphism and reflection automorphism",
        }
    }

    /// Anchor slugs the suite emits; each is documented in `docs/identities.md`.
    pub fn anchors(self) -> &'static [&'static str] {
        match self {
            Suite::PropertyIi => &["sl2-boost-conjugation", "sl2-bracket"],
            Suite::StandardSubspace => &[
                "ss-j-involution",
                "ss-j-inverts-delta",
                "ss-flow-invariance",
                "ss-j-complement",
                "ss-complement-delta",
                "ss-polar-reassembly",
            ],
            Suite::Tomita => &[
                "tomita-flow",
                "tomita-commutant",
                "kms-boundary",
                "tomita-s-action",
                "tomita-polar",
                "tomita-product-spectrum",
            ],
            Suite::Quasifree => &["quasifree-log-delta-spectrum", "quasifree-covariance"],
            Suite::Twist => &[
                "twist-even",
                "twist-odd",
                "twist-antiunitary",
                "twist-square-grading",
                "twisted-locality",
                "graded-twisted-equivalence",
            ],
            Suite::IdentityChain => &[
                "wedge-j-boost-inversion",
                "wedge-reflection-covariance",
                "pct-conjugation",
            ],
            Suite::SpinStatistics => &["spin-statistics-chain", "rotation-2pi-statistics"],
            Suite::WedgeGeometry => &["pct-region-map", "boost-cone-inclusion"],
            Suite::Covering => &[
                "cover-homomorphism",
                "cover-reflection-automorphism",
                "cover-rotation-angle",
            ],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| ConfigError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(ConfigError::BadValue {
                key: "format".into(),
                value: s.into(),
            }),
        }
    }
}

pub const MAX_DIM: usize = 12;
pub const MAX_MODES: usize = 4;
pub const MIN_SAMPLES: usize = 100;
pub const MAX_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suites: Vec<Suite>,
    pub seed: u64,
    /// Overrides every suite's default tolerance
    pub tol: Option<f64>,
    pub suite_tol: BTreeMap<Suite, f64>,
    pub dims: RangeInclusive<usize>,
    pub modes: usize,
    /// Momenta per sample set (at least 100)
    pub samples: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suites: Suite::ALL.to_vec(),
            seed: 0,
            tol: None,
            suite_tol: BTreeMap::new(),
            dims: 2..=8,
            modes: 4,
            samples: MIN_SAMPLES,
            out: None,
            format: Format::Json,
        }
    }
}

impl SuiteConfig {
    pub fn tol_for(&self, suite: Suite) -> f64 {
        self.tol
            .or_else(|| self.suite_tol.get(&suite).copied())
            .unwrap_or_else(|| suite.default_tol())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if *self.dims.start() < 2 || self.dims.start() > self.dims.end() {
            return Err(ConfigError::BadValue {
                key: "dims".into(),
                value: format!("{}..{}", self.dims.start(), self.dims.end()),
            });
        }
        if *self.dims.end() > MAX_DIM {
            return Err(ConfigError::CapExceeded {
                what: "dims",
                value: *self.dims.end(),
                cap: MAX_DIM,
            });
        }
        if self.modes == 0 {
            return Err(ConfigError::BadValue {
                key: "modes".into(),
                value: "0".into(),
            });
        }
        if self.modes > MAX_MODES {
            return Err(ConfigError::CapExceeded {
                what: "modes",
                value: self.modes,
                cap: MAX_MODES,
            });
        }
        if self.samples < MIN_SAMPLES {
            return Err(ConfigError::BadValue {
                key: "samples".into(),
                value: self.samples.to_string(),
            });
        }
        if self.samples > MAX_SAMPLES {
            return Err(ConfigError::CapExceeded {
                what: "samples",
                value: self.samples,
                cap: MAX_SAMPLES,
            });
        }
        if self.suites.is_empty() {
            return Err(ConfigError::BadValue {
                key: "suite".into(),
                value: String::new(),
            });
        }
        Ok(())
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = || ConfigError::BadValue {
            key: key.to_string(),
            value: value.to_string(),
        };
        match key {
            "suite" => self.suites = parse_suites(value)?,
            "seed" => self.seed = value.parse().map_err(|_| bad())?,
            "tol" => self.tol = Some(parse_tol(value).ok_or_else(bad)?),
            "dims" => self.dims = parse_range(value).ok_or_else(bad)?,
            "modes" => self.modes = value.parse().map_err(|_| bad())?,
            "samples" => self.samples = value.parse().map_err(|_| bad())?,
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            _ => match key.strip_prefix("tol.") {
                Some(name) => {
                    let suite: Suite = name.parse()?;
                    self.suite_tol.insert(suite, parse_tol(value).ok_or_else(bad)?);
                }
                None => return Err(ConfigError::UnknownKey(key.to_string())),
            },
        }
        Ok(())
    }

    /// Reads `key = value` lines; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = fs::read_to_string(path).map_err(|e| ConfigError::Unreadable {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::BadValue {
                key: "config line".into(),
                value: line.to_string(),
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }
}

fn parse_tol(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|t| t.is_finite() && *t >= 0.0)
}

/// `all`, a single name, or a comma-separated list.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>, ConfigError> {
    if s.trim() == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    let mut out: Vec<Suite> = s
        .split(',')
        .map(|x| x.trim().parse())
        .collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// `a..b` (inclusive), `a..=b`, or a single value.
pub fn parse_range(s: &str) -> Option<RangeInclusive<usize>> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        Some(a.trim().parse().ok()?..=b.trim().parse().ok()?)
    } else {
        let v = s.parse().ok()?;
        Some(v..=v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert!(!s.anchors().is_empty());
        }
        assert_eq!(
            "nosuch".parse::<Suite>().unwrap_err(),
            ConfigError::UnknownSuite("nosuch".into())
        );
    }

    #[test]
    fn ranges_and_lists() {
        assert_eq!(parse_range("2..8"), Some(2..=8));
        assert_eq!(parse_range("2..=5"), Some(2..=5));
        assert_eq!(parse_range("3"), Some(3..=3));
        assert_eq!(parse_range("x..3"), None);
        assert_eq!(
            parse_suites("twist,property_ii,twist").unwrap(),
            vec![Suite::PropertyIi, Suite::Twist]
        );
        assert_eq!(parse_suites("all").unwrap().len(), 9);
    }

    #[test]
    fn settings_and_caps() {
        let mut cfg = SuiteConfig::default();
        cfg.set("tol.twist", "1e-10").unwrap();
        assert_eq!(cfg.tol_for(Suite::Twist), 1e-10);
        assert_eq!(cfg.tol_for(Suite::Tomita), 1e-8);
        cfg.set("tol", "1e-6").unwrap();
        assert_eq!(cfg.tol_for(Suite::Twist), 1e-6);
        assert!(matches!(cfg.set("colour", "red"), Err(ConfigError::UnknownKey(_))));
        assert!(matches!(cfg.set("tol", "-1"), Err(ConfigError::BadValue { .. })));
        cfg.set("modes", "5").unwrap();
        assert!(matches!(cfg.validate(), Err(ConfigError::CapExceeded { .. })));
        cfg.set("modes", "3").unwrap();
        cfg.set("dims", "2..13").unwrap();
        assert!(matches!(cfg.validate(), Err(ConfigError::CapExceeded { .. })));
        cfg.set("dims", "1..3").unwrap();
        assert!(matches!(cfg.validate(), Err(ConfigError::BadValue { .. })));
        cfg.set("dims", "2..3").unwrap();
        cfg.set("samples", "10").unwrap();
        assert!(cfg.validate().is_err());
        cfg.set("samples", "100").unwrap();
        assert!(cfg.validate().is_ok());
    }
}

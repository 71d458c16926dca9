//! The experiment config (TOML).
//!
//! ```toml
//! input = "survey.csv"        # relative paths resolve against this file
//! target = "Evc"
//! algorithm = "pc-stable"     # or "inter-iamb"
//! alpha = 0.05
//! replicates = 1000
//! master_seed = 1
//! workers = 4                 # optional; defaults to available cores
//! max_condition_size = 3      # optional; unbounded when absent
//! select = true               # MI selection before learning
//! blacklist = [["Nbr", "CstDst"]]
//! recode_file = "recode.toml" # optional, or an inline [recode] table
//!
//! [thresholds]
//! selection_fraction = 0.01
//! strength_cutoff = 0.3
//! direction_cutoff = 0.6
//!
//! [tiers]
//! CstDst = 1
//! Rsk = 3
//!
//! [recode]
//! drop = ["RskWind"]
//! [recode.levels.Income]
//! "under 25k" = "low"
//! ```
//!
//! A recode file has the same shape as the inline `[recode]` table. An empty
//! `[tiers]` table puts every feature in one tier.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use bnstruct_core::averaging::{Algorithm, DIRECTION_CUTOFF, STRENGTH_CUTOFF};
use bnstruct_core::dataset::RecodeSpec;
use bnstruct_core::select::DEFAULT_THRESHOLD_FRACTION;

use crate::error::{read_file, Error, Result};
use crate::network::toml_error;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecodeToml {
    #[serde(default)]
    pub drop: Vec<String>,
    #[serde(default)]
    pub levels: BTreeMap<String, BTreeMap<String, String>>,
}

impl From<RecodeToml> for RecodeSpec {
    fn from(r: RecodeToml) -> Self {
        RecodeSpec {
            levels: r.levels,
            drop: r.drop,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct ThresholdsToml {
    selection_fraction: Option<f64>,
    strength_cutoff: Option<f64>,
    direction_cutoff: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigToml {
    input: Option<PathBuf>,
    target: Option<String>,
    algorithm: Option<String>,
    alpha: Option<f64>,
    replicates: Option<u64>,
    master_seed: Option<u64>,
    workers: Option<usize>,
    max_condition_size: Option<usize>,
    select: Option<bool>,
    #[serde(default)]
    blacklist: Vec<(String, String)>,
    recode_file: Option<PathBuf>,
    recode: Option<RecodeToml>,
    #[serde(default)]
    tiers: BTreeMap<String, u32>,
    #[serde(default)]
    thresholds: ThresholdsToml,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub selection_fraction: f64,
    pub strength_cutoff: f64,
    pub direction_cutoff: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            selection_fraction: DEFAULT_THRESHOLD_FRACTION,
            strength_cutoff: STRENGTH_CUTOFF,
            direction_cutoff: DIRECTION_CUTOFF,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub input: Option<PathBuf>,
    pub target: Option<String>,
    pub recode: RecodeSpec,
    pub tiers: BTreeMap<String, u32>,
    pub blacklist: Vec<(String, String)>,
    pub algorithm: Algorithm,
    pub alpha: f64,
    pub replicates: u64,
    pub master_seed: u64,
    pub workers: usize,
    pub max_condition_size: Option<usize>,
    pub select: bool,
    pub thresholds: Thresholds,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            input: None,
            target: None,
            recode: RecodeSpec::default(),
            tiers: BTreeMap::new(),
            blacklist: Vec::new(),
            algorithm: Algorithm::PcStable,
            alpha: 0.05,
            replicates: 1000,
            master_seed: 0,
            workers: default_workers(),
            max_condition_size: None,
            select: true,
            thresholds: Thresholds::default(),
        }
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub input: Option<PathBuf>,
    pub target: Option<String>,
    pub algorithm: Option<Algorithm>,
    pub alpha: Option<f64>,
    pub replicates: Option<u64>,
    pub master_seed: Option<u64>,
    pub workers: Option<usize>,
    pub max_condition_size: Option<usize>,
    pub select: Option<bool>,
    pub selection_fraction: Option<f64>,
    pub strength_cutoff: Option<f64>,
    pub direction_cutoff: Option<f64>,
}

fn resolve(base: Option<&Path>, p: PathBuf) -> PathBuf {
    match base {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p,
    }
}

pub fn parse_recode(text: &str, source: &str) -> Result<RecodeSpec> {
    let r: RecodeToml = toml::from_str(text).map_err(|e| toml_error(text, source, e))?;
    Ok(r.into())
}

impl PipelineConfig {
    /// Parses config text; `base` is the directory relative paths resolve
    /// against.
    pub fn parse(text: &str, source: &str, base: Option<&Path>) -> Result<Self> {
        let raw: ConfigToml = toml::from_str(text).map_err(|e| toml_error(text, source, e))?;
        let d = PipelineConfig::default();
        let recode = match (raw.recode, raw.recode_file) {
            (Some(_), Some(_)) => {
                return Err(Error::config(
                    source,
                    "use either `recode` or `recode_file`, not both",
                ));
            }
            (Some(r), None) => r.into(),
            (None, Some(path)) => {
                let path = resolve(base, path);
                parse_recode(&read_file(&path)?, &path.display().to_string())?
            }
            (None, None) => RecodeSpec::default(),
        };
        let algorithm = match raw.algorithm {
            Some(a) => a
                .parse()
                .map_err(|_| Error::config(source, format!("unknown algorithm `{a}`")))?,
            None => d.algorithm,
        };
        let cfg = PipelineConfig {
            input: raw.input.map(|p| resolve(base, p)),
            target: raw.target,
            recode,
            tiers: raw.tiers,
            blacklist: raw.blacklist,
            algorithm,
            alpha: raw.alpha.unwrap_or(d.alpha),
            replicates: raw.replicates.unwrap_or(d.replicates),
            master_seed: raw.master_seed.unwrap_or(d.master_seed),
            workers: raw.workers.unwrap_or(d.workers),
            max_condition_size: raw.max_condition_size,
            select: raw.select.unwrap_or(d.select),
            thresholds: Thresholds {
                selection_fraction: raw
                    .thresholds
                    .selection_fraction
                    .unwrap_or(d.thresholds.selection_fraction),
                strength_cutoff: raw
                    .thresholds
                    .strength_cutoff
                    .unwrap_or(d.thresholds.strength_cutoff),
                direction_cutoff: raw
                    .thresholds
                    .direction_cutoff
                    .unwrap_or(d.thresholds.direction_cutoff),
            },
        };
        cfg.validate(source)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(
            &read_file(path)?,
            &path.display().to_string(),
            path.parent(),
        )
    }

    pub fn apply(&mut self, o: Overrides) {
        macro_rules! set {
            ($($field:ident).+ <- $value:expr) => {
                if let Some(v) = $value {
                    self.$($field).+ = v;
                }
            };
        }
        if o.input.is_some() {
            self.input = o.input;
        }
        if o.target.is_some() {
            self.target = o.target;
        }
        if o.max_condition_size.is_some() {
            self.max_condition_size = o.max_condition_size;
        }
        set!(algorithm <- o.algorithm);
        set!(alpha <- o.alpha);
        set!(replicates <- o.replicates);
        set!(master_seed <- o.master_seed);
        set!(workers <- o.workers);
        set!(select <- o.select);
        set!(thresholds.selection_fraction <- o.selection_fraction);
        set!(thresholds.strength_cutoff <- o.strength_cutoff);
        set!(thresholds.direction_cutoff <- o.direction_cutoff);
    }

    /// Range checks that do not need the data.
    pub fn validate(&self, source: &str) -> Result<()> {
        let unit = |v: f64, what: &str| {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(Error::config(
                    source,
                    format!("{what} must lie in (0, 1), got {v}"),
                ))
            }
        };
        unit(self.alpha, "alpha")?;
        unit(
            self.thresholds.selection_fraction,
            "thresholds.selection_fraction",
        )?;
        unit(
            self.thresholds.strength_cutoff,
            "thresholds.strength_cutoff",
        )?;
        unit(
            self.thresholds.direction_cutoff,
            "thresholds.direction_cutoff",
        )?;
        if self.replicates == 0 {
            return Err(Error::config(source, "replicates must be at least 1"));
        }
        if self.workers == 0 {
            return Err(Error::config(source, "workers must be at least 1"));
        }
        if let Some((a, _)) = self.blacklist.iter().find(|(a, b)| a == b) {
            return Err(Error::config(
                source,
                format!("blacklist pair ({a}, {a}) is a self-loop"),
            ));
        }
        Ok(())
    }

    pub fn require_input(&self) -> Result<&Path> {
        self.input.as_deref().ok_or_else(|| {
            Error::config("pipeline", "no input dataset (set `input` or pass --input)")
        })
    }

    pub fn require_target(&self) -> Result<&str> {
        self.target.as_deref().ok_or_else(|| {
            Error::config(
                "pipeline",
                "no target variable (set `target` or pass --target)",
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"
input = "data/survey.csv"
target = "Evc"
algorithm = "inter-iamb"
alpha = 0.01
replicates = 200
master_seed = 7
workers = 3
blacklist = [["Nbr", "CstDst"]]

[thresholds]
strength_cutoff = 0.35

[tiers]
CstDst = 1
Nbr = 2

[recode]
drop = ["RskWind"]
[recode.levels.Income]
"a" = "low"
"b" = "low"
"c" = "high"
"#;

    #[test]
    fn parses_every_key() {
        let c = PipelineConfig::parse(FULL, "full.toml", Some(Path::new("/exp"))).unwrap();
        assert_eq!(c.input.as_deref(), Some(Path::new("/exp/data/survey.csv")));
        assert_eq!(c.algorithm, Algorithm::InterIamb);
        assert_eq!(c.alpha, 0.01);
        assert_eq!(c.replicates, 200);
        assert_eq!(c.workers, 3);
        assert_eq!(c.blacklist, [("Nbr".to_string(), "CstDst".to_string())]);
        assert_eq!(c.tiers["Nbr"], 2);
        assert_eq!(c.recode.drop, ["RskWind"]);
        assert_eq!(c.recode.levels["Income"]["b"], "low");
        assert_eq!(c.thresholds.strength_cutoff, 0.35);
        assert_eq!(c.thresholds.direction_cutoff, 0.6);
        assert_eq!(c.thresholds.selection_fraction, 0.01);
    }

    #[test]
    fn overrides_win() {
        let mut c = PipelineConfig::parse(FULL, "full.toml", None).unwrap();
        c.apply(Overrides {
            alpha: Some(0.1),
            replicates: Some(5),
            target: Some("X".into()),
            direction_cutoff: Some(0.7),
            ..Overrides::default()
        });
        assert_eq!(
            (c.alpha, c.replicates, c.target.as_deref()),
            (0.1, 5, Some("X"))
        );
        assert_eq!(c.thresholds.direction_cutoff, 0.7);
        assert_eq!(c.master_seed, 7);
    }

    #[test]
    fn rejects_bad_values() {
        for text in [
            "alpha = 1.0",
            "replicates = 0",
            "algorithm = \"gs\"",
            "[thresholds]\nstrength_cutoff = 0",
            "blacklist = [[\"A\", \"A\"]]",
        ] {
            assert!(
                matches!(
                    PipelineConfig::parse(text, "c", None),
                    Err(Error::Config { .. })
                ),
                "{text}"
            );
        }
        match PipelineConfig::parse("alpha = 0.05\nbogus = 1\n", "c.toml", None).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, Some(2)),
            e => panic!("unexpected {e}"),
        }
    }
}

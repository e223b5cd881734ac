//! Run configuration: command-line flags over an optional TOML file over defaults.

use std::path::{Path, PathBuf};

use mdlp_core::{DescriptorMode, FeatureConfig, PatternParams};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::ingest::LabelRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
}

/// Settings that may come from flags or a config file; `None` means "not given".
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Settings {
    pub dataset: Option<PathBuf>,
    pub labels: Option<String>,
    pub nb: Option<u32>,
    pub radius: Option<u32>,
    pub mode: Option<String>,
    pub normalize: Option<bool>,
    pub index: Option<PathBuf>,
    pub nr_grid: Option<Vec<usize>>,
    pub format: Option<OutputFormat>,
    pub jobs: Option<usize>,
}

impl Settings {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `self` win over those in `fallback`.
    pub fn over(self, fallback: Settings) -> Settings {
        Settings {
            dataset: self.dataset.or(fallback.dataset),
            labels: self.labels.or(fallback.labels),
            nb: self.nb.or(fallback.nb),
            radius: self.radius.or(fallback.radius),
            mode: self.mode.or(fallback.mode),
            normalize: self.normalize.or(fallback.normalize),
            index: self.index.or(fallback.index),
            nr_grid: self.nr_grid.or(fallback.nr_grid),
            format: self.format.or(fallback.format),
            jobs: self.jobs.or(fallback.jobs),
        }
    }
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dataset: Option<PathBuf>,
    pub labels: LabelRule,
    pub feature: FeatureConfig,
    /// True when any descriptor setting was given explicitly rather than defaulted.
    pub feature_explicit: bool,
    pub index: Option<PathBuf>,
    pub nr_grid: Option<Vec<usize>>,
    pub format: OutputFormat,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn resolve(s: Settings) -> Result<Self> {
        let feature_explicit = s.nb.is_some() || s.radius.is_some() || s.mode.is_some() || s.normalize.is_some();
        let defaults = FeatureConfig::default();
        let params = PatternParams::new(
            s.nb.unwrap_or(defaults.params.neighbors()),
            s.radius.unwrap_or(defaults.params.radius()),
        )?;
        let mode = match s.mode.as_deref() {
            Some(m) => m.parse::<DescriptorMode>()?,
            None => defaults.mode,
        };
        if mode != DescriptorMode::LbpOnly {
            params.require_mesh_family()?;
        }
        if let Some(grid) = &s.nr_grid {
            if grid.is_empty() || grid.contains(&0) {
                return Err(Error::Config("--nr-grid needs positive depths".into()));
            }
        }
        if s.jobs == Some(0) {
            return Err(Error::Config("--jobs must be at least 1".into()));
        }
        Ok(Self {
            dataset: s.dataset,
            labels: s.labels.as_deref().unwrap_or("folders").parse()?,
            feature: FeatureConfig {
                params,
                mode,
                normalize: s.normalize.unwrap_or(defaults.normalize),
            },
            feature_explicit,
            index: s.index,
            nr_grid: s.nr_grid,
            format: s.format.unwrap_or_default(),
            jobs: s.jobs,
        })
    }
}

/// Default retrieval depths: `1..=16` for small-category (tiled texture) sets, else `10, 20, ..., 100`.
pub fn default_grid(largest_category: usize) -> Vec<usize> {
    if largest_category <= 16 {
        (1..=16).collect()
    } else {
        (1..=10).map(|k| 10 * k).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = RunConfig::resolve(Settings::default()).unwrap();
        assert_eq!(cfg.feature, FeatureConfig::default());
        assert!(!cfg.feature_explicit);
        assert_eq!(cfg.labels, LabelRule::Folders);
        assert_eq!(cfg.format, OutputFormat::Table);
    }

    #[test]
    fn flags_override_file() {
        let file: Settings =
            toml::from_str("nb = 16\nmode = \"lbp\"\nnormalize = false\nnr-grid = [1, 2]\nformat = \"csv\"").unwrap();
        let flags = Settings {
            mode: Some("lmep".into()),
            ..Settings::default()
        };
        let cfg = RunConfig::resolve(flags.over(file)).unwrap();
        assert_eq!(cfg.feature.mode, DescriptorMode::LmepOnly);
        assert_eq!(cfg.feature.params.neighbors(), 16);
        assert!(!cfg.feature.normalize);
        assert_eq!(cfg.nr_grid, Some(vec![1, 2]));
        assert_eq!(cfg.format, OutputFormat::Csv);
        assert!(cfg.feature_explicit);
    }

    #[test]
    fn unknown_keys_and_bad_values_are_rejected() {
        assert!(toml::from_str::<Settings>("colour = 1").is_err());
        let bad = |s: Settings| RunConfig::resolve(s).is_err();
        assert!(bad(Settings {
            nb: Some(7),
            ..Default::default()
        }));
        assert!(bad(Settings {
            nb: Some(6),
            ..Default::default()
        }));
        assert!(!bad(Settings {
            nb: Some(6),
            mode: Some("lbp".into()),
            ..Default::default()
        }));
        assert!(bad(Settings {
            mode: Some("ltp".into()),
            ..Default::default()
        }));
        assert!(bad(Settings {
            nr_grid: Some(vec![0]),
            ..Default::default()
        }));
        assert!(bad(Settings {
            labels: Some("tags".into()),
            ..Default::default()
        }));
        assert!(bad(Settings {
            jobs: Some(0),
            ..Default::default()
        }));
    }

    #[test]
    fn grid_by_category_size() {
        assert_eq!(default_grid(16), (1..=16).collect::<Vec<_>>());
        assert_eq!(default_grid(100), vec![10, 20, 30, 40, 50, 60, 70, 80, 90, 100]);
    }
}

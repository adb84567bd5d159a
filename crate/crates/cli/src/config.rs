use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use szl_core::numerics::EvalSettings;

use crate::Cli;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Values a config file may set; every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    group: Option<String>,
    census_cutoff: Option<f64>,
    series_cutoff: Option<f64>,
    c_max: Option<f64>,
    m0_override: Option<u32>,
    systole: Option<f64>,
    format: Option<Format>,
    plot: Option<bool>,
    cache_dir: Option<PathBuf>,
    settings: Option<EvalSettings>,
}

/// Fully resolved run configuration: defaults, then config file, then flags.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub group_id: String,
    pub census_cutoff: f64,
    pub series_cutoff: Option<f64>,
    pub c_max: Option<f64>,
    pub m0_override: Option<u32>,
    pub systole: Option<f64>,
    pub settings: EvalSettings,
    pub format: Format,
    pub plot: bool,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
}

pub const DEFAULT_CENSUS_CUTOFF: f64 = 1e4;

impl RunConfig {
    pub fn resolve(cli: &Cli) -> Result<Self> {
        let file = match &cli.config {
            Some(p) => load(p)?,
            None => FileConfig::default(),
        };
        let cfg = Self {
            group_id: cli.group.clone().or(file.group).unwrap_or_else(|| "psl2z".into()),
            census_cutoff: cli.census_cutoff.or(file.census_cutoff).unwrap_or(DEFAULT_CENSUS_CUTOFF),
            series_cutoff: cli.series_cutoff.or(file.series_cutoff),
            c_max: cli.c_max.or(file.c_max),
            m0_override: cli.m0_override.or(file.m0_override),
            systole: cli.systole.or(file.systole),
            settings: file.settings.unwrap_or_default(),
            format: cli.format.or(file.format).unwrap_or(Format::Json),
            plot: cli.plot || file.plot.unwrap_or(false),
            cache_dir: if cli.no_cache { None } else { cli.cache_dir.clone().or(file.cache_dir).or_else(default_cache_dir) },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("census cutoff", Some(self.census_cutoff)), ("series cutoff", self.series_cutoff), ("c-max", self.c_max)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    bail!("{name} must be a positive finite number, got {v}");
                }
            }
        }
        if self.m0_override == Some(0) {
            bail!("m0 override must be positive");
        }
        self.settings.validate()?;
        Ok(())
    }
}

fn load(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

fn default_cache_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os("SZL_CACHE_DIR") {
        return Some(PathBuf::from(d));
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(d).join("szl"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("szl"))
}

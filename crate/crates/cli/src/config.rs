//! Probe settings: defaults, then the TOML file, then environment and flags.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Deserialize;
use wikiindex::source::DEFAULT_BASE_URL;

use crate::args::ProbeArgs;
use crate::error::CliError;

/// Mirror of the probe flags for `--config` files.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeFile {
    pub seed: Option<String>,
    pub full_name: Option<String>,
    pub short_name: Option<String>,
    #[serde(default)]
    pub anchors: Vec<String>,
    pub bare_surname: Option<bool>,
    #[serde(default)]
    pub sections: Vec<String>,
    pub source: Option<String>,
    pub cache_dir: Option<PathBuf>,
    pub user_agent: Option<String>,
    pub rate_limit: Option<u32>,
    pub timeout: Option<f64>,
    pub max_pages: Option<usize>,
    pub max_links_per_page: Option<usize>,
    pub expand_endnotes: Option<bool>,
    pub growth: Option<String>,
    pub top_k: Option<usize>,
    #[serde(default)]
    pub exports: Vec<String>,
    pub out: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
    pub resume: Option<PathBuf>,
}

impl ProbeFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(CliError::io(path))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {}", path.display(), e.message())))
    }
}

/// Fully resolved probe settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub seed: Option<String>,
    pub full_name: Option<String>,
    pub short_name: Option<String>,
    pub anchors: Vec<String>,
    pub bare_surname: bool,
    pub sections: Vec<String>,
    pub source: String,
    pub cache_dir: Option<PathBuf>,
    pub user_agent: Option<String>,
    pub rate_limit: Option<u32>,
    pub timeout: Option<Duration>,
    pub max_pages: Option<usize>,
    pub max_links_per_page: usize,
    pub expand_endnotes: bool,
    pub growth: String,
    pub top_k: usize,
    pub exports: Vec<String>,
    pub out: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
    pub resume: Option<PathBuf>,
}

fn list_or(flags: Vec<String>, file: Vec<String>) -> Vec<String> {
    if flags.is_empty() {
        file
    } else {
        flags
    }
}

impl Settings {
    pub fn resolve(args: ProbeArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => ProbeFile::load(path)?,
            None => ProbeFile::default(),
        };
        let timeout = match args.timeout.or(file.timeout) {
            Some(secs) if secs.is_finite() && secs > 0.0 => Some(Duration::from_secs_f64(secs)),
            Some(secs) => return Err(CliError::Usage(format!("timeout must be positive, got {secs}"))),
            None => None,
        };
        Ok(Settings {
            seed: args.seed.or(file.seed),
            full_name: args.full_name.or(file.full_name),
            short_name: args.short_name.or(file.short_name),
            anchors: list_or(args.anchors, file.anchors),
            bare_surname: args.bare_surname || file.bare_surname.unwrap_or(false),
            sections: list_or(args.sections, file.sections),
            source: args
                .source
                .or(file.source)
                .unwrap_or_else(|| format!("live:{DEFAULT_BASE_URL}")),
            cache_dir: args.cache_dir.or(file.cache_dir),
            user_agent: args.user_agent.or(file.user_agent),
            rate_limit: args.rate_limit.or(file.rate_limit),
            timeout,
            max_pages: args.max_pages.or(file.max_pages),
            max_links_per_page: args.max_links_per_page.or(file.max_links_per_page).unwrap_or(0),
            expand_endnotes: args.expand_endnotes || file.expand_endnotes.unwrap_or(false),
            growth: args.growth.or(file.growth).unwrap_or_else(|| "sqrt".into()),
            top_k: args.top_k.or(file.top_k).unwrap_or(10),
            exports: list_or(args.exports, file.exports),
            out: args.out.or(file.out),
            trace: args.trace.or(file.trace),
            checkpoint: args.checkpoint.or(file.checkpoint),
            resume: args.resume.or(file.resume),
        })
    }
}

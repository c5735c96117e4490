//! Page retrieval: a live MediaWiki endpoint (backed by a disk cache) or an
//! offline fixture corpus. Both sit behind [`PageSource`]; [`fetch_page`]
//! adds redirect resolution on top.

mod cache;
mod fixture;
mod live;
mod title;

use std::fmt;
use std::path::PathBuf;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cache::{CacheEntry, CacheEntryError, PageCache};
pub use fixture::{FixtureCorpus, FixturePageRecord, BibliographyRecord};
pub use live::{
    Clock, HttpTransport, LiveSource, RateLimiter, SystemClock, Transport, TransportError,
    UreqTransport,
};
pub use title::{is_namespaced, normalize_title, TitleError};

/// Maximum number of redirect hops followed by [`fetch_page`].
pub const MAX_REDIRECT_DEPTH: usize = 3;

/// Default MediaWiki Action API endpoint (English Wikipedia).
pub const DEFAULT_BASE_URL: &str = "https://en.wikipedia.org/w/api.php";

pub const DEFAULT_USER_AGENT: &str =
    concat!("wikiindex/", env!("CARGO_PKG_VERSION"), " (sounding crawler)");

/// A normalized article title plus an optional revision hint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PageRef {
    title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source_hint: Option<String>,
}

impl PageRef {
    /// Builds a reference from any spelling of a title, normalizing it.
    pub fn new(title: &str) -> Result<Self, TitleError> {
        Ok(PageRef {
            title: normalize_title(title)?,
            source_hint: None,
        })
    }

    pub fn with_hint(mut self, hint: impl Into<String>) -> Self {
        self.source_hint = Some(hint.into());
        self
    }

    pub fn title(&self) -> &str {
        &self.title
    }

    pub fn source_hint(&self) -> Option<&str> {
        self.source_hint.as_deref()
    }

    /// Title with underscores turned back into spaces.
    pub fn display_name(&self) -> String {
        self.title.replace('_', " ")
    }
}

impl fmt::Display for PageRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.title)
    }
}

/// Raw page material as delivered by a source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPage {
    pub page: PageRef,
    pub markup: String,
    /// Unix seconds of the network fetch; `None` for static fixture pages.
    pub fetched_at: Option<u64>,
    pub from_cache: bool,
}

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("page not found: {0}")]
    PageNotFound(String),
    #[error("network error fetching {title}: {reason}")]
    NetworkError { title: String, reason: String },
    #[error("redirect chain from {0} exceeds {MAX_REDIRECT_DEPTH} hops")]
    RedirectLoop(String),
    #[error("fixture corpus error: {0}")]
    CorpusError(String),
    #[error("invalid source configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Title(#[from] TitleError),
}

/// Anything that can hand back raw markup for a title.
///
/// Implementations return the page stored under exactly `page`; redirect
/// stubs are returned as-is and resolved by [`fetch_page`].
pub trait PageSource {
    fn fetch_raw(&self, page: &PageRef) -> Result<RawPage, SourceError>;

    /// Short human-readable description, echoed into reports.
    fn describe(&self) -> String;

    /// Number of requests that actually left the process.
    fn network_requests(&self) -> u64 {
        0
    }
}

impl<S: PageSource + ?Sized> PageSource for &S {
    fn fetch_raw(&self, page: &PageRef) -> Result<RawPage, SourceError> {
        (**self).fetch_raw(page)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
    fn network_requests(&self) -> u64 {
        (**self).network_requests()
    }
}

impl<S: PageSource + ?Sized> PageSource for Box<S> {
    fn fetch_raw(&self, page: &PageRef) -> Result<RawPage, SourceError> {
        (**self).fetch_raw(page)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
    fn network_requests(&self) -> u64 {
        (**self).network_requests()
    }
}

/// Fetches `page`, following redirect stubs for at most
/// [`MAX_REDIRECT_DEPTH`] hops. The returned page carries the final title.
pub fn fetch_page<S: PageSource + ?Sized>(source: &S, page: &PageRef) -> Result<RawPage, SourceError> {
    let mut current = page.clone();
    let mut seen = vec![current.title().to_string()];
    for _ in 0..=MAX_REDIRECT_DEPTH {
        let raw = source.fetch_raw(&current)?;
        match crate::analysis::redirect_target(&raw.markup) {
            Some(target) => {
                if seen.iter().any(|t| t == target.title()) {
                    return Err(SourceError::RedirectLoop(page.title().to_string()));
                }
                seen.push(target.title().to_string());
                current = target;
            }
            None => return Ok(raw),
        }
    }
    Err(SourceError::RedirectLoop(page.title().to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceMode {
    Live,
    Fixture,
}

/// How to reach pages.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SourceConfig {
    pub mode: SourceMode,
    pub base_url: Option<String>,
    pub corpus_path: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    /// Max live requests in any one-second window.
    pub rate_limit: u32,
    #[serde(with = "duration_secs")]
    pub request_timeout: Duration,
    pub user_agent: String,
}

impl SourceConfig {
    pub fn fixture(corpus_path: impl Into<PathBuf>) -> Self {
        SourceConfig {
            mode: SourceMode::Fixture,
            base_url: None,
            corpus_path: Some(corpus_path.into()),
            cache_dir: None,
            rate_limit: 1,
            request_timeout: Duration::from_secs(30),
            user_agent: DEFAULT_USER_AGENT.to_string(),
        }
    }

    pub fn live(base_url: impl Into<String>, cache_dir: Option<PathBuf>) -> Self {
        SourceConfig {
            mode: SourceMode::Live,
            base_url: Some(base_url.into()),
            corpus_path: None,
            cache_dir,
            rate_limit: 5,
            request_timeout: Duration::from_secs(30),
            user_agent: DEFAULT_USER_AGENT.to_string(),
        }
    }

    /// Parses the `live:<base-url>` / `fixture:<path>` shorthand.
    pub fn from_spec(spec: &str) -> Result<Self, SourceError> {
        if let Some(url) = spec.strip_prefix("live:") {
            let url = if url.is_empty() { DEFAULT_BASE_URL } else { url };
            Ok(SourceConfig::live(url, None))
        } else if let Some(path) = spec.strip_prefix("fixture:") {
            if path.is_empty() {
                return Err(SourceError::Config("fixture source needs a path".into()));
            }
            Ok(SourceConfig::fixture(path))
        } else {
            Err(SourceError::Config(format!(
                "unrecognized source {spec:?}; expected live:<base-url> or fixture:<path>"
            )))
        }
    }

    pub fn validate(&self) -> Result<(), SourceError> {
        match self.mode {
            SourceMode::Live => {
                if self.base_url.as_deref().is_none_or(str::is_empty) {
                    return Err(SourceError::Config("live mode requires base_url".into()));
                }
                if self.corpus_path.is_some() {
                    return Err(SourceError::Config("live mode takes no corpus_path".into()));
                }
                if self.rate_limit == 0 {
                    return Err(SourceError::Config("rate_limit must be positive".into()));
                }
            }
            SourceMode::Fixture => {
                if self.corpus_path.is_none() {
                    return Err(SourceError::Config("fixture mode requires corpus_path".into()));
                }
                if self.base_url.is_some() {
                    return Err(SourceError::Config("fixture mode takes no base_url".into()));
                }
            }
        }
        Ok(())
    }

    /// Opens the configured source.
    pub fn open(&self) -> Result<Box<dyn PageSource + Send + Sync>, SourceError> {
        self.validate()?;
        match self.mode {
            SourceMode::Fixture => {
                let path = self.corpus_path.as_ref().expect("validated");
                Ok(Box::new(FixtureCorpus::load(path)?))
            }
            SourceMode::Live => Ok(Box::new(LiveSource::from_config(self)?)),
        }
    }
}

mod duration_secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let secs = f64::deserialize(d)?;
        Duration::try_from_secs_f64(secs).map_err(serde::de::Error::custom)
    }
}

//! Live retrieval through the MediaWiki Action API (`action=parse`).

use std::collections::VecDeque;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use percent_encoding::{utf8_percent_encode, NON_ALPHANUMERIC};
use serde::Deserialize;
use thiserror::Error;

use super::{CacheEntry, PageCache, PageRef, PageSource, RawPage, SourceConfig, SourceError};

const WINDOW: Duration = Duration::from_secs(1);
const MAX_RETRIES: u32 = 3;
const RETRY_BASE_DELAY: Duration = Duration::from_millis(500);

/// Time source for rate limiting and retry back-off.
pub trait Clock: Send + Sync {
    /// Monotonic time since an arbitrary origin.
    fn now(&self) -> Duration;
    fn sleep(&self, d: Duration);
}

#[derive(Debug)]
pub struct SystemClock {
    origin: Instant,
}

impl Default for SystemClock {
    fn default() -> Self {
        SystemClock {
            origin: Instant::now(),
        }
    }
}

impl Clock for SystemClock {
    fn now(&self) -> Duration {
        self.origin.elapsed()
    }
    fn sleep(&self, d: Duration) {
        std::thread::sleep(d)
    }
}

/// Sliding-window limiter: at most `limit` acquisitions in any window of
/// one second.
#[derive(Debug)]
pub struct RateLimiter {
    limit: usize,
    recent: VecDeque<Duration>,
}

impl RateLimiter {
    pub fn new(limit: u32) -> Self {
        assert!(limit > 0, "rate limit must be positive");
        RateLimiter {
            limit: limit as usize,
            recent: VecDeque::with_capacity(limit as usize),
        }
    }

    /// Blocks (via `clock`) until a request may be issued, then records it.
    pub fn acquire(&mut self, clock: &dyn Clock) -> Duration {
        let mut now = clock.now();
        self.expire(now);
        if self.recent.len() >= self.limit {
            let oldest = self.recent[0];
            let wait = (oldest + WINDOW).saturating_sub(now);
            if !wait.is_zero() {
                clock.sleep(wait);
            }
            now = clock.now().max(oldest + WINDOW);
            self.expire(now);
        }
        self.recent.push_back(now);
        now
    }

    fn expire(&mut self, now: Duration) {
        while let Some(&front) = self.recent.front() {
            if front + WINDOW <= now {
                self.recent.pop_front();
            } else {
                break;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
}

#[derive(Debug, Error)]
#[error("{0}")]
pub struct TransportError(pub String);

/// Minimal GET-only HTTP transport.
pub trait Transport: Send + Sync {
    fn get(&self, url: &str, user_agent: &str) -> Result<HttpResponse, TransportError>;
}

pub type HttpTransport = Box<dyn Transport>;

pub struct UreqTransport {
    agent: ureq::Agent,
}

impl UreqTransport {
    pub fn new(timeout: Duration) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(false)
            .build()
            .into();
        UreqTransport { agent }
    }
}

impl Transport for UreqTransport {
    fn get(&self, url: &str, user_agent: &str) -> Result<HttpResponse, TransportError> {
        let mut resp = self
            .agent
            .get(url)
            .header("User-Agent", user_agent)
            .call()
            .map_err(|e| TransportError(e.to_string()))?;
        let status = resp.status().as_u16();
        let body = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| TransportError(e.to_string()))?;
        Ok(HttpResponse { status, body })
    }
}

#[derive(Deserialize)]
struct ParseResponse {
    parse: Option<ParseBody>,
    error: Option<ApiError>,
}

#[derive(Deserialize)]
struct ParseBody {
    text: String,
}

#[derive(Deserialize)]
struct ApiError {
    code: String,
    #[serde(default)]
    info: String,
}

/// Live MediaWiki source with an optional write-through disk cache.
pub struct LiveSource {
    base_url: String,
    user_agent: String,
    transport: HttpTransport,
    cache: Option<PageCache>,
    clock: Arc<dyn Clock>,
    limiter: Mutex<RateLimiter>,
    requests: AtomicU64,
}

impl LiveSource {
    pub fn new(
        base_url: impl Into<String>,
        user_agent: impl Into<String>,
        rate_limit: u32,
        transport: HttpTransport,
        cache: Option<PageCache>,
        clock: Arc<dyn Clock>,
    ) -> Self {
        LiveSource {
            base_url: base_url.into(),
            user_agent: user_agent.into(),
            transport,
            cache,
            clock,
            limiter: Mutex::new(RateLimiter::new(rate_limit)),
            requests: AtomicU64::new(0),
        }
    }

    pub fn from_config(cfg: &SourceConfig) -> Result<Self, SourceError> {
        let base = cfg
            .base_url
            .clone()
            .ok_or_else(|| SourceError::Config("live mode requires base_url".into()))?;
        let cache = match &cfg.cache_dir {
            Some(dir) => Some(PageCache::open(dir).map_err(|e| {
                SourceError::Config(format!("cannot open cache dir {}: {e}", dir.display()))
            })?),
            None => None,
        };
        Ok(LiveSource::new(
            base,
            cfg.user_agent.clone(),
            cfg.rate_limit,
            Box::new(UreqTransport::new(cfg.request_timeout)),
            cache,
            Arc::new(SystemClock::default()),
        ))
    }

    pub fn cache(&self) -> Option<&PageCache> {
        self.cache.as_ref()
    }

    fn request_url(&self, page: &PageRef) -> String {
        let sep = if self.base_url.contains('?') { '&' } else { '?' };
        format!(
            "{}{sep}action=parse&format=json&formatversion=2&prop=text&page={}",
            self.base_url,
            utf8_percent_encode(page.title(), NON_ALPHANUMERIC)
        )
    }

    fn fetch_remote(&self, page: &PageRef) -> Result<String, SourceError> {
        let url = self.request_url(page);
        let mut last_error = String::new();
        for attempt in 0..=MAX_RETRIES {
            if attempt > 0 {
                self.clock.sleep(RETRY_BASE_DELAY * 2u32.pow(attempt - 1));
            }
            self.limiter
                .lock()
                .expect("rate limiter poisoned")
                .acquire(self.clock.as_ref());
            self.requests.fetch_add(1, Ordering::Relaxed);
            let resp = match self.transport.get(&url, &self.user_agent) {
                Ok(r) => r,
                Err(e) => {
                    last_error = e.0;
                    continue;
                }
            };
            if resp.status == 429 || resp.status >= 500 {
                last_error = format!("HTTP {}", resp.status);
                continue;
            }
            if resp.status == 404 {
                return Err(SourceError::PageNotFound(page.title().to_string()));
            }
            if resp.status != 200 {
                return Err(SourceError::NetworkError {
                    title: page.title().to_string(),
                    reason: format!("HTTP {}", resp.status),
                });
            }
            let parsed: ParseResponse =
                serde_json::from_str(&resp.body).map_err(|e| SourceError::NetworkError {
                    title: page.title().to_string(),
                    reason: format!("unreadable API response: {e}"),
                })?;
            if let Some(err) = parsed.error {
                return match err.code.as_str() {
                    "missingtitle" | "invalidtitle" | "nosuchpageid" => {
                        Err(SourceError::PageNotFound(page.title().to_string()))
                    }
                    _ => Err(SourceError::NetworkError {
                        title: page.title().to_string(),
                        reason: format!("API error {}: {}", err.code, err.info),
                    }),
                };
            }
            return match parsed.parse {
                Some(body) if !body.text.is_empty() => Ok(body.text),
                _ => Err(SourceError::NetworkError {
                    title: page.title().to_string(),
                    reason: "API response without page text".into(),
                }),
            };
        }
        Err(SourceError::NetworkError {
            title: page.title().to_string(),
            reason: format!("giving up after {} attempts: {last_error}", MAX_RETRIES + 1),
        })
    }
}

impl PageSource for LiveSource {
    fn fetch_raw(&self, page: &PageRef) -> Result<RawPage, SourceError> {
        match self.cache.as_ref().and_then(|c| c.lookup(page)) {
            Some(CacheEntry::Page(hit)) => return Ok(hit),
            Some(CacheEntry::Missing) => {
                return Err(SourceError::PageNotFound(page.title().to_string()))
            }
            None => {}
        }
        let fetched_at = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let markup = match self.fetch_remote(page) {
            Err(SourceError::PageNotFound(t)) => {
                if let Some(cache) = &self.cache {
                    if let Err(e) = cache.store_missing(page, Some(fetched_at)) {
                        log::warn!("could not cache {}: {e}", page.title());
                    }
                }
                return Err(SourceError::PageNotFound(t));
            }
            other => other?,
        };
        let raw = RawPage {
            page: page.clone(),
            markup,
            fetched_at: Some(fetched_at),
            from_cache: false,
        };
        if let Some(cache) = &self.cache {
            if let Err(e) = cache.store(&raw) {
                log::warn!("could not cache {}: {e}", page.title());
            }
        }
        Ok(raw)
    }

    fn describe(&self) -> String {
        format!("live:{}", self.base_url)
    }

    fn network_requests(&self) -> u64 {
        self.requests.load(Ordering::Relaxed)
    }
}

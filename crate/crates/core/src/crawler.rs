//! Sounding crawl: a deterministic walk from a seed article that expands only
//! pages inside the author's subject domain.
//!
//! Pages are fetched from a single FIFO of discovered link targets. A fetched
//! page that does not mention the short name or an anchor term is a leaf; a
//! page that does but has no bibliographic mentions is an endnote; only pages
//! with at least one mention (and the seed) contribute links.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{
    contains_anchor, count_mentions, default_sections, parse_page, AuthorPatterns, PageContent,
};
use crate::graph::{DomainGraph, EdgeKind, NodeStatus};
use crate::source::{fetch_page, PageRef, PageSource, SourceError};

pub const CHECKPOINT_FORMAT: &str = "wikiindex-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CrawlError {
    #[error("seed page not found: {0}")]
    SeedNotFound(String),
    #[error("seed page {title} could not be read: {reason}")]
    SeedUnreadable { title: String, reason: String },
    #[error("checkpoint is corrupt: {0}")]
    CheckpointCorrupt(String),
    #[error("invalid probe configuration: {0}")]
    Config(String),
}

/// What to crawl and how to recognize the author.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub seed: PageRef,
    pub patterns: AuthorPatterns,
    /// Maximum pages fetched after the seed; 0 = unbounded.
    pub max_pages: usize,
    /// Links kept per page; 0 = unbounded.
    pub max_links_per_page: usize,
    pub expand_endnotes: bool,
    pub recognized_sections: Vec<String>,
}

impl ProbeConfig {
    pub fn new(seed: PageRef, patterns: AuthorPatterns) -> Self {
        ProbeConfig {
            seed,
            patterns,
            max_pages: 0,
            max_links_per_page: 0,
            expand_endnotes: false,
            recognized_sections: default_sections(),
        }
    }

    pub fn validate(&self) -> Result<(), CrawlError> {
        self.patterns
            .validate()
            .map_err(|e| CrawlError::Config(e.to_string()))
    }

    /// Everything except `max_pages` must match for a checkpoint to resume.
    fn resumable_with(&self, other: &ProbeConfig) -> bool {
        self.seed == other.seed
            && self.patterns == other.patterns
            && self.max_links_per_page == other.max_links_per_page
            && self.expand_endnotes == other.expand_endnotes
            && self.recognized_sections == other.recognized_sections
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub step: u64,
    pub title: String,
    pub sign: Sign,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// The probe's transcript: a header naming the seed and its mention count,
/// then one line per fetched page.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub seed: String,
    pub seed_mentions: u64,
    pub events: Vec<TraceEvent>,
}

impl Trace {
    /// ```text
    /// 1: Albert_Einstein
    /// SCI Links (1): 174
    /// 0 Rd +: Ulm
    /// ```
    pub fn render(&self) -> String {
        let mut out = format!("1: {}\nSCI Links (1): {}\n", self.seed, self.seed_mentions);
        for e in &self.events {
            out.push_str(&format!("{} Rd {}: {}\n", e.step, e.sign, e.title));
        }
        out
    }

    pub fn plus_count(&self) -> usize {
        self.events.iter().filter(|e| e.sign == Sign::Plus).count()
    }
}

/// Everything needed to continue a crawl.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct CrawlState {
    graph: DomainGraph,
    queue: VecDeque<String>,
    fetched: BTreeSet<String>,
    /// Requested title -> canonical title, for redirects seen so far.
    aliases: BTreeMap<String, String>,
    trace: Trace,
    warnings: Vec<String>,
    pages_fetched: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub config: ProbeConfig,
    state: CrawlState,
}

impl Checkpoint {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("checkpoint serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, CrawlError> {
        let cp: Checkpoint =
            serde_json::from_str(text).map_err(|e| CrawlError::CheckpointCorrupt(e.to_string()))?;
        if cp.format != CHECKPOINT_FORMAT || cp.version != CHECKPOINT_VERSION {
            return Err(CrawlError::CheckpointCorrupt(format!(
                "unsupported checkpoint {} v{}",
                cp.format, cp.version
            )));
        }
        Ok(cp)
    }

    /// Pages fetched after the seed when the checkpoint was taken.
    pub fn pages_fetched(&self) -> usize {
        self.state.pages_fetched
    }
}

/// Result of a finished (or truncated) probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeOutcome {
    pub graph: DomainGraph,
    /// `(title, mentions)` for every fetched page with at least one mention,
    /// in discovery order. Its length is N.
    pub mentions: Vec<(String, u64)>,
    pub trace: Trace,
    pub truncated: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Fetched,
    Done,
}

pub struct Crawler<S> {
    cfg: ProbeConfig,
    source: S,
    state: CrawlState,
    truncated: bool,
}

impl<S: PageSource> Crawler<S> {
    /// Fetches and expands the seed.
    pub fn start(cfg: ProbeConfig, source: S) -> Result<Self, CrawlError> {
        cfg.validate()?;
        let raw = fetch_page(&source, &cfg.seed).map_err(|e| match e {
            SourceError::PageNotFound(_) => CrawlError::SeedNotFound(cfg.seed.title().to_string()),
            other => CrawlError::SeedUnreadable {
                title: cfg.seed.title().to_string(),
                reason: other.to_string(),
            },
        })?;
        let content =
            parse_page(&raw, &cfg.recognized_sections).map_err(|e| CrawlError::SeedUnreadable {
                title: cfg.seed.title().to_string(),
                reason: e.to_string(),
            })?;
        let seed = raw.page.title().to_string();
        let mentions = count_mentions(&content.bibliography, &cfg.patterns);

        let mut state = CrawlState {
            graph: DomainGraph::new(),
            queue: VecDeque::new(),
            fetched: BTreeSet::from([seed.clone()]),
            aliases: BTreeMap::new(),
            trace: Trace {
                seed: seed.clone(),
                seed_mentions: mentions,
                events: Vec::new(),
            },
            warnings: Vec::new(),
            pages_fetched: 0,
        };
        if seed != cfg.seed.title() {
            state.aliases.insert(cfg.seed.title().to_string(), seed.clone());
            state.fetched.insert(cfg.seed.title().to_string());
        }
        state.graph.add_node(&seed, NodeStatus::Seed);
        state.graph.set_status(&seed, NodeStatus::Seed, Some(mentions));
        let mut crawler = Crawler {
            cfg,
            source,
            state,
            truncated: false,
        };
        crawler.expand(&seed, &content);
        Ok(crawler)
    }

    /// Continues from a checkpoint. The configuration must match the one
    /// the checkpoint was taken with, except for `max_pages`.
    pub fn resume(checkpoint: Checkpoint, cfg: ProbeConfig, source: S) -> Result<Self, CrawlError> {
        cfg.validate()?;
        if checkpoint.config.seed != cfg.seed {
            return Err(CrawlError::CheckpointCorrupt(format!(
                "checkpoint seed {} does not match {}",
                checkpoint.config.seed, cfg.seed
            )));
        }
        if !checkpoint.config.resumable_with(&cfg) {
            return Err(CrawlError::CheckpointCorrupt(
                "checkpoint was taken with a different probe configuration".into(),
            ));
        }
        Ok(Crawler {
            cfg,
            source,
            state: checkpoint.state,
            truncated: false,
        })
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            format: CHECKPOINT_FORMAT.to_string(),
            version: CHECKPOINT_VERSION,
            config: self.cfg.clone(),
            state: self.state.clone(),
        }
    }

    pub fn config(&self) -> &ProbeConfig {
        &self.cfg
    }

    pub fn source(&self) -> &S {
        &self.source
    }

    pub fn pages_fetched(&self) -> usize {
        self.state.pages_fetched
    }

    /// Takes the first not-yet-fetched link and processes it.
    pub fn step(&mut self) -> Step {
        loop {
            let Some(front) = self.state.queue.front() else {
                return Step::Done;
            };
            if self.state.fetched.contains(front) {
                self.state.queue.pop_front();
                continue;
            }
            if self.cfg.max_pages > 0 && self.state.pages_fetched >= self.cfg.max_pages {
                self.truncated = true;
                return Step::Done;
            }
            let title = self.state.queue.pop_front().expect("front exists");
            self.visit(&title);
            return Step::Fetched;
        }
    }

    /// Runs to completion (or to `max_pages`).
    pub fn run(mut self) -> ProbeOutcome {
        while self.step() == Step::Fetched {}
        self.finish()
    }

    pub fn finish(self) -> ProbeOutcome {
        let mentions = self
            .state
            .graph
            .nodes()
            .iter()
            .filter(|n| matches!(n.status, NodeStatus::Seed | NodeStatus::Expanded))
            .filter_map(|n| n.mentions.filter(|&m| m > 0).map(|m| (n.title.clone(), m)))
            .collect();
        ProbeOutcome {
            graph: self.state.graph,
            mentions,
            trace: self.state.trace,
            truncated: self.truncated,
            warnings: self.state.warnings,
        }
    }

    fn warn(&mut self, msg: String) {
        log::warn!("{msg}");
        self.state.warnings.push(msg);
    }

    fn record(&mut self, title: &str, sign: Sign, note: Option<String>) {
        let step = self.state.trace.events.len() as u64;
        self.state.trace.events.push(TraceEvent {
            step,
            title: title.to_string(),
            sign,
            note,
        });
        self.state.pages_fetched += 1;
    }

    fn visit(&mut self, requested: &str) {
        self.state.fetched.insert(requested.to_string());
        let page = match PageRef::new(requested) {
            Ok(p) => p,
            Err(e) => {
                self.fail(requested, e.to_string());
                return;
            }
        };
        let raw = match fetch_page(&self.source, &page) {
            Ok(raw) => raw,
            Err(e) => {
                self.fail(requested, e.to_string());
                return;
            }
        };

        let canonical = raw.page.title().to_string();
        let title = if canonical == requested {
            canonical
        } else {
            self.state
                .aliases
                .insert(requested.to_string(), canonical.clone());
            if self.state.graph.contains(&canonical) {
                self.state.graph.merge_into(requested, &canonical);
                if !self.state.fetched.insert(canonical.clone()) {
                    // Alias of a page already processed: only the edges move.
                    return;
                }
            } else {
                self.state.graph.rename_node(requested, &canonical);
                self.state.fetched.insert(canonical.clone());
            }
            canonical
        };

        let content = match parse_page(&raw, &self.cfg.recognized_sections) {
            Ok(c) => c,
            Err(e) => {
                self.fail(&title, e.to_string());
                return;
            }
        };

        if !contains_anchor(&content, &self.cfg.patterns) {
            self.state.graph.set_status(&title, NodeStatus::Leaf, None);
            self.record(&title, Sign::Minus, Some("leaf".into()));
            return;
        }
        let mentions = count_mentions(&content.bibliography, &self.cfg.patterns);
        if mentions >= 1 {
            self.state
                .graph
                .set_status(&title, NodeStatus::Expanded, Some(mentions));
            self.record(&title, Sign::Plus, Some(format!("mentions {mentions}")));
            self.expand(&title, &content);
        } else {
            self.state
                .graph
                .set_status(&title, NodeStatus::Endnote, Some(0));
            self.record(&title, Sign::Minus, Some("endnote".into()));
            if self.cfg.expand_endnotes {
                self.expand(&title, &content);
            }
        }
    }

    fn fail(&mut self, title: &str, reason: String) {
        self.warn(format!("{title}: {reason}; treated as leaf"));
        self.state.graph.set_status(title, NodeStatus::Leaf, None);
        self.record(title, Sign::Minus, Some(format!("error: {reason}")));
    }

    fn expand(&mut self, from: &str, content: &PageContent) {
        let mut links: &[PageRef] = &content.links;
        let cap = self.cfg.max_links_per_page;
        if cap > 0 && links.len() > cap {
            self.warn(format!(
                "{from}: {} links, keeping the first {cap}",
                links.len()
            ));
            links = &links[..cap];
        }
        for link in links {
            let target = self
                .state
                .aliases
                .get(link.title())
                .cloned()
                .unwrap_or_else(|| link.title().to_string());
            if target == from {
                continue;
            }
            if self.state.graph.contains(&target) {
                self.state.graph.add_edge(from, &target, EdgeKind::Back);
            } else {
                self.state
                    .graph
                    .add_node(&target, NodeStatus::UndiscoveredPage);
                self.state.graph.add_edge(from, &target, EdgeKind::Forward);
                self.state.queue.push_back(target);
            }
        }
    }
}

/// Runs a complete probe.
pub fn probe<S: PageSource>(cfg: ProbeConfig, source: S) -> Result<ProbeOutcome, CrawlError> {
    Ok(Crawler::start(cfg, source)?.run())
}

/// Finishes a probe from a checkpoint.
pub fn resume<S: PageSource>(
    checkpoint: Checkpoint,
    cfg: ProbeConfig,
    source: S,
) -> Result<ProbeOutcome, CrawlError> {
    Ok(Crawler::resume(checkpoint, cfg, source)?.run())
}

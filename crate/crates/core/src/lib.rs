//! Wiki-index of an author's popularity.
//!
//! A probe starts at a seed article, follows links while pages stay inside
//! the author's subject domain (they mention the author's short name or an
//! anchor term), counts author mentions in each page's bibliography sections
//! and condenses them into the Hirsch-like core `WH` and the index
//! `WI = WH × f(N)`.
//!
//! ```no_run
//! use wikiindex::{probe, AuthorPatterns, FixtureCorpus, GrowthFunction, PageRef, ProbeConfig, ProbeReport};
//!
//! let corpus = FixtureCorpus::load("testdata/einstein")?;
//! let patterns = AuthorPatterns::new("Albert Einstein", Some("Einstein"))?
//!     .with_anchors(["physics", "relativity"]);
//! let cfg = ProbeConfig::new(PageRef::new("Albert Einstein")?, patterns);
//! let outcome = probe(cfg.clone(), &corpus)?;
//! let report = ProbeReport::from_outcome(&cfg, "fixture", &outcome, &GrowthFunction::Sqrt, 10)?;
//! println!("{}", report.wiki_index.formula_line());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod analysis;
pub mod crawler;
pub mod export;
pub mod graph;
pub mod index;
pub mod metrics;
pub mod source;

pub use analysis::{
    contains_anchor, count_mentions, extract_bibliography, parse_page, AuthorPatterns, BibSection,
    PageContent,
};
pub use crawler::{probe, resume, Checkpoint, Crawler, ProbeConfig, ProbeOutcome, Sign, Trace, TraceEvent};
pub use export::{
    export_graph, import_graph, write_trace, GraphFormat, ProbeReport, ReportFormat,
};
pub use graph::{ConceptNode, DomainGraph, Edge, EdgeKind, NodeStatus};
pub use index::{build_ref_sequence, compute_wh, compute_wi, wiki_index, GrowthFunction, RefSequence};
pub use metrics::{compute_metrics, to_undirected, UndirectedGraph};
pub use source::{fetch_page, FixtureCorpus, PageRef, PageSource, RawPage, SourceConfig};

/// Index result in double precision.
pub type WikiIndexResult = index::IndexResult<f64>;
/// Index result in single precision.
pub type WikiIndexResultF32 = index::IndexResult<f32>;
/// Graph statistics in double precision.
pub type GraphMetrics = metrics::Metrics<f64>;
/// Graph statistics in single precision.
pub type GraphMetricsF32 = metrics::Metrics<f32>;
/// Growth function evaluated in double precision.
pub type Growth = GrowthFunction<f64>;

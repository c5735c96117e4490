#![allow(dead_code)]

pub mod mock;
pub mod oracle;

use std::path::PathBuf;

use serde_json::Value;
use wikiindex::{AuthorPatterns, FixtureCorpus, PageRef, ProbeConfig};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("testdata/einstein")
}

pub fn corpus() -> FixtureCorpus {
    FixtureCorpus::load(corpus_dir()).expect("fixture corpus loads")
}

pub fn einstein_config() -> ProbeConfig {
    let patterns = AuthorPatterns::new("Albert Einstein", Some("Einstein"))
        .unwrap()
        .with_anchors(["physics", "relativity"]);
    ProbeConfig::new(PageRef::new("Albert Einstein").unwrap(), patterns)
}

/// Values produced by `testdata/einstein/oracle.py`.
pub fn expected() -> Value {
    let text = std::fs::read_to_string(corpus_dir().join("golden/expected.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

pub fn golden_trace() -> String {
    std::fs::read_to_string(corpus_dir().join("golden/einstein.trace")).unwrap()
}

pub const SOURCE_LABEL: &str = "fixture:testdata/einstein";

pub fn report_of(outcome: &wikiindex::ProbeOutcome) -> wikiindex::ProbeReport {
    wikiindex::ProbeReport::from_outcome(
        &einstein_config(),
        SOURCE_LABEL,
        outcome,
        &wikiindex::GrowthFunction::Sqrt,
        10,
    )
    .unwrap()
}

/// Checked-in report for the default Einstein probe. Set `WIKIINDEX_BLESS=1`
/// to rewrite it after the oracle comparisons pass.
pub fn golden_report_path() -> PathBuf {
    corpus_dir().join("golden/einstein.report.json")
}

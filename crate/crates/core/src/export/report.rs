use std::fmt::Write;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{io_err, ExportError};
use crate::crawler::{ProbeConfig, ProbeOutcome, Trace};
use crate::graph::DomainGraph;
use crate::index::{build_ref_sequence, compute_wh, compute_wi, GrowthFunction, IndexError};
use crate::metrics::compute_metrics;
use crate::{GraphMetrics, WikiIndexResult};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

impl FromStr for ReportFormat {
    type Err = ExportError;
    fn from_str(s: &str) -> Result<Self, ExportError> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "text" | "txt" => Ok(ReportFormat::Text),
            other => Err(ExportError::UnsupportedFormat(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefEntry {
    pub title: String,
    pub mentions: u64,
}

/// Unix seconds; left empty for fixture probes so reports stay reproducible.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timestamps {
    pub started_at: Option<u64>,
    pub finished_at: Option<u64>,
}

/// Everything a probe produced, in one schema-versioned record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub schema_version: u32,
    pub config: Option<ProbeConfig>,
    pub source: Option<String>,
    pub wiki_index: WikiIndexResult,
    pub metrics: Option<GraphMetrics>,
    pub ref_sequence: Vec<RefEntry>,
    pub trace: Trace,
    pub graph: DomainGraph,
    pub truncated: bool,
    pub warnings: Vec<String>,
    pub timestamps: Timestamps,
}

impl ProbeReport {
    pub fn from_outcome(
        config: &ProbeConfig,
        source: &str,
        outcome: &ProbeOutcome,
        growth: &GrowthFunction<f64>,
        top_k: usize,
    ) -> Result<Self, IndexError> {
        let seq = build_ref_sequence(&outcome.mentions);
        let wiki_index = compute_wi(compute_wh(&seq), seq.n(), growth)?;
        let metrics = compute_metrics::<f64>(&outcome.graph, top_k).ok();
        Ok(ProbeReport {
            schema_version: REPORT_SCHEMA_VERSION,
            config: Some(config.clone()),
            source: Some(source.to_string()),
            wiki_index,
            metrics,
            ref_sequence: seq
                .iter()
                .map(|(t, m)| RefEntry {
                    title: t.to_string(),
                    mentions: m,
                })
                .collect(),
            trace: outcome.trace.clone(),
            graph: outcome.graph.clone(),
            truncated: outcome.truncated,
            warnings: outcome.warnings.clone(),
            timestamps: Timestamps::default(),
        })
    }

    /// A report for a probe that found nothing: N = 0, WI = 0.
    pub fn empty(growth: &GrowthFunction<f64>) -> Self {
        ProbeReport {
            schema_version: REPORT_SCHEMA_VERSION,
            config: None,
            source: None,
            wiki_index: compute_wi(0, 0, growth).expect("0 <= 0"),
            metrics: None,
            ref_sequence: Vec::new(),
            trace: Trace::default(),
            graph: DomainGraph::new(),
            truncated: false,
            warnings: Vec::new(),
            timestamps: Timestamps::default(),
        }
    }

    pub fn with_timestamps(mut self, started_at: u64, finished_at: u64) -> Self {
        self.timestamps = Timestamps {
            started_at: Some(started_at),
            finished_at: Some(finished_at),
        };
        self
    }

    /// `(title, mentions)` pairs of the R-sequence.
    pub fn mention_pairs(&self) -> Vec<(String, u64)> {
        self.ref_sequence
            .iter()
            .map(|e| (e.title.clone(), e.mentions))
            .collect()
    }

    pub fn validate(&self) -> Result<(), ExportError> {
        let n = self.ref_sequence.len() as u64;
        if self.wiki_index.n != n {
            return Err(ExportError::Inconsistent(format!(
                "N = {} but the R-sequence has {n} entries",
                self.wiki_index.n
            )));
        }
        if self.wiki_index.wh > n {
            return Err(ExportError::Inconsistent("WH exceeds N".into()));
        }
        if self
            .ref_sequence
            .windows(2)
            .any(|w| w[0].mentions < w[1].mentions)
            || self.ref_sequence.iter().any(|e| e.mentions == 0)
        {
            return Err(ExportError::Inconsistent(
                "R-sequence must be positive and non-increasing".into(),
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, ExportError> {
        let report: ProbeReport =
            serde_json::from_str(text).map_err(|e| ExportError::Malformed(e.to_string()))?;
        if report.schema_version != REPORT_SCHEMA_VERSION {
            return Err(ExportError::Malformed(format!(
                "unsupported report schema version {}",
                report.schema_version
            )));
        }
        report.validate()?;
        Ok(report)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let wi = &self.wiki_index;
        if !self.trace.seed.is_empty() {
            let _ = writeln!(out, "Seed: {}", self.trace.seed);
        }
        if let Some(src) = &self.source {
            let _ = writeln!(out, "Source: {src}");
        }
        let _ = writeln!(
            out,
            "Pages fetched: {}{}",
            self.trace.events.len(),
            if self.truncated { " (truncated)" } else { "" }
        );
        let _ = writeln!(out);
        let _ = writeln!(out, "N = {}, WH = {}", wi.n, wi.wh);
        let _ = writeln!(out, "{}", wi.formula_line());
        let _ = writeln!(out, "WI (raw) = {:.6}, f = {}", wi.wi_raw, wi.growth);
        if let Some(m) = &self.metrics {
            let _ = writeln!(out);
            out.push_str(&metrics_text(m));
        }
        if !self.ref_sequence.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(out, "Article\tMentions");
            for e in &self.ref_sequence {
                let _ = writeln!(out, "{}\t{}", e.title, e.mentions);
            }
        }
        if !self.warnings.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(out, "Warnings:");
            for w in &self.warnings {
                let _ = writeln!(out, "  {w}");
            }
        }
        out
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Text => self.to_text(),
        }
    }

    pub fn export(&self, format: ReportFormat, path: &Path) -> Result<(), ExportError> {
        self.validate()?;
        fs::write(path, self.render(format)).map_err(io_err(path))
    }

    pub fn import(path: &Path) -> Result<Self, ExportError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_json(&text)
    }
}

/// Network parameters as a dash list followed by the top-degree table.
pub fn metrics_text(m: &GraphMetrics) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "- nodes – {}", m.node_count);
    let _ = writeln!(out, "- edges – {}", m.edge_count);
    let _ = writeln!(out, "- average degree – {:.2}", m.average_degree);
    if m.component_count > 1 {
        let _ = writeln!(
            out,
            "- diameter – {} (largest component: {} of {} nodes, {} components)",
            m.diameter, m.largest_component_size, m.node_count, m.component_count
        );
    } else {
        let _ = writeln!(out, "- diameter – {}", m.diameter);
    }
    let _ = writeln!(out, "- average clustering – {:.2}", m.average_clustering);
    if !m.top_nodes.is_empty() {
        let _ = writeln!(out, "- the largest nodes:");
        let _ = writeln!(out, "Concept\tThe node degree");
        for n in &m.top_nodes {
            let _ = writeln!(out, "{}\t{}", n.title, n.degree);
        }
    }
    out
}

//! Serialization of probe results: graph documents, report records and the
//! plain-text trace.
//!
//! All outputs are byte-deterministic: nodes are written in discovery order
//! and edges in insertion order.

mod gexf;
mod graphml;
mod report;
mod xml;

use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::crawler::Trace;
use crate::graph::{ConceptNode, DomainGraph, Edge, EdgeKind, NodeStatus};

pub use report::{metrics_text, ProbeReport, RefEntry, ReportFormat, Timestamps, REPORT_SCHEMA_VERSION};

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("I/O error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("unsupported format {0:?}")]
    UnsupportedFormat(String),
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("inconsistent report: {0}")]
    Inconsistent(String),
}

pub(crate) fn io_err(path: &Path) -> impl FnOnce(io::Error) -> ExportError + '_ {
    move |source| ExportError::Io {
        path: path.display().to_string(),
        source,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Gexf,
    GraphMl,
    EdgeCsv,
}

impl FromStr for GraphFormat {
    type Err = ExportError;
    fn from_str(s: &str) -> Result<Self, ExportError> {
        match s.to_ascii_lowercase().as_str() {
            "gexf" => Ok(GraphFormat::Gexf),
            "graphml" => Ok(GraphFormat::GraphMl),
            "edge-csv" | "csv" => Ok(GraphFormat::EdgeCsv),
            other => Err(ExportError::UnsupportedFormat(other.to_string())),
        }
    }
}

impl GraphFormat {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Result<Self, ExportError> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .unwrap_or_default();
        ext.parse()
    }
}

/// Renders a graph document in memory.
pub fn render_graph(g: &DomainGraph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Gexf => gexf::render(g),
        GraphFormat::GraphMl => graphml::render(g),
        GraphFormat::EdgeCsv => render_edge_csv(g),
    }
}

pub fn export_graph(g: &DomainGraph, format: GraphFormat, path: &Path) -> Result<(), ExportError> {
    fs::write(path, render_graph(g, format)).map_err(io_err(path))
}

/// Reads a graph document back. Edge CSV carries no node attributes, so
/// nodes come back as undiscovered pages in first-appearance order.
pub fn parse_graph(text: &str, format: GraphFormat) -> Result<DomainGraph, ExportError> {
    match format {
        GraphFormat::Gexf => gexf::import(text),
        GraphFormat::GraphMl => graphml::import(text),
        GraphFormat::EdgeCsv => parse_edge_csv(text),
    }
}

pub fn import_graph(path: &Path, format: GraphFormat) -> Result<DomainGraph, ExportError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_graph(&text, format)
}

fn render_edge_csv(g: &DomainGraph) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["from", "to", "kind"]).expect("in-memory write");
    for e in g.edges() {
        w.write_record([e.from.as_str(), e.to.as_str(), e.kind.as_str()])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn parse_edge_csv(text: &str) -> Result<DomainGraph, ExportError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r
        .headers()
        .map_err(|e| ExportError::Malformed(e.to_string()))?
        .clone();
    if headers.iter().take(2).collect::<Vec<_>>() != ["from", "to"] {
        return Err(ExportError::Malformed("edge CSV must start with from,to".into()));
    }
    let mut nodes: Vec<ConceptNode> = Vec::new();
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| ExportError::Malformed(e.to_string()))?;
        let from = rec.get(0).unwrap_or_default().to_string();
        let to = rec.get(1).unwrap_or_default().to_string();
        let kind = match rec.get(2) {
            Some(k) if !k.is_empty() => EdgeKind::parse(k)
                .ok_or_else(|| ExportError::Malformed(format!("unknown edge kind {k}")))?,
            _ => EdgeKind::Forward,
        };
        for t in [&from, &to] {
            if seen.insert(t.clone()) {
                nodes.push(ConceptNode {
                    title: t.clone(),
                    discovery_index: nodes.len() as u64,
                    status: NodeStatus::UndiscoveredPage,
                    mentions: None,
                });
            }
        }
        edges.push(Edge { from, to, kind });
    }
    DomainGraph::from_parts(nodes, edges).map_err(|e| ExportError::Malformed(e.to_string()))
}

/// Writes the trace in its golden-file format.
pub fn write_trace(trace: &Trace, path: &Path) -> Result<(), ExportError> {
    fs::write(path, trace.render()).map_err(io_err(path))
}

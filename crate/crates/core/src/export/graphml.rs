//! GraphML documents.

use std::collections::HashMap;
use std::fmt::Write;

use super::xml::{escape, parse, Element};
use super::ExportError;
use crate::graph::{ConceptNode, DomainGraph, Edge, EdgeKind, NodeStatus};

pub(super) fn render(g: &DomainGraph) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    out.push_str("  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n");
    out.push_str("  <key id=\"status\" for=\"node\" attr.name=\"status\" attr.type=\"string\"/>\n");
    out.push_str("  <key id=\"mentions\" for=\"node\" attr.name=\"mentions\" attr.type=\"long\"/>\n");
    out.push_str(
        "  <key id=\"discovery_index\" for=\"node\" attr.name=\"discovery_index\" attr.type=\"long\"/>\n",
    );
    out.push_str("  <key id=\"kind\" for=\"edge\" attr.name=\"kind\" attr.type=\"string\"/>\n");
    out.push_str("  <graph id=\"G\" edgedefault=\"directed\">\n");
    let ids: HashMap<&str, u64> = g
        .nodes()
        .iter()
        .map(|n| (n.title.as_str(), n.discovery_index))
        .collect();
    for n in g.nodes() {
        let _ = writeln!(out, "    <node id=\"n{}\">", n.discovery_index);
        let _ = writeln!(out, "      <data key=\"label\">{}</data>", escape(&n.title));
        let _ = writeln!(out, "      <data key=\"status\">{}</data>", n.status);
        if let Some(m) = n.mentions {
            let _ = writeln!(out, "      <data key=\"mentions\">{m}</data>");
        }
        let _ = writeln!(
            out,
            "      <data key=\"discovery_index\">{}</data>",
            n.discovery_index
        );
        out.push_str("    </node>\n");
    }
    for (i, e) in g.edges().iter().enumerate() {
        let _ = writeln!(
            out,
            "    <edge id=\"e{i}\" source=\"n{}\" target=\"n{}\"><data key=\"kind\">{}</data></edge>",
            ids[e.from.as_str()],
            ids[e.to.as_str()],
            e.kind.as_str()
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

fn bad(msg: impl Into<String>) -> ExportError {
    ExportError::Malformed(msg.into())
}

/// Key id -> attribute name for keys declared `for` the given domain.
fn key_names(root: &Element, domain: &str) -> HashMap<String, String> {
    root.children_named("key")
        .filter(|k| matches!(k.attr("for"), Some(f) if f == domain || f == "all"))
        .filter_map(|k| {
            let id = k.attr("id")?.to_string();
            let name = k.attr("attr.name").unwrap_or(&id).to_string();
            Some((id, name))
        })
        .collect()
}

fn data(el: &Element, keys: &HashMap<String, String>) -> HashMap<String, String> {
    el.children_named("data")
        .filter_map(|d| {
            let key = d.attr("key")?;
            let name = keys.get(key).cloned().unwrap_or_else(|| key.to_string());
            Some((name, d.text.trim().to_string()))
        })
        .collect()
}

pub(super) fn import(text: &str) -> Result<DomainGraph, ExportError> {
    let root = parse(text)?;
    if root.name != "graphml" {
        return Err(bad(format!("expected <graphml>, found <{}>", root.name)));
    }
    let node_keys = key_names(&root, "node");
    let edge_keys = key_names(&root, "edge");
    let graph = root.child("graph").ok_or_else(|| bad("missing <graph>"))?;

    let mut titles = HashMap::new();
    let mut nodes = Vec::new();
    for (pos, n) in graph.children_named("node").enumerate() {
        let id = n.attr("id").ok_or_else(|| bad("node without id"))?;
        let vals = data(n, &node_keys);
        let title = vals.get("label").cloned().unwrap_or_else(|| id.to_string());
        let status = match vals.get("status") {
            Some(s) => NodeStatus::parse(s).ok_or_else(|| bad(format!("unknown status {s}")))?,
            None => NodeStatus::UndiscoveredPage,
        };
        let mentions = vals
            .get("mentions")
            .map(|m| m.parse::<u64>().map_err(|e| bad(format!("mentions {m:?}: {e}"))))
            .transpose()?;
        let discovery_index = match vals.get("discovery_index") {
            Some(d) => d.parse().map_err(|e| bad(format!("discovery_index {d:?}: {e}")))?,
            None => pos as u64,
        };
        titles.insert(id.to_string(), title.clone());
        nodes.push(ConceptNode {
            title,
            discovery_index,
            status,
            mentions,
        });
    }

    let mut edges = Vec::new();
    for e in graph.children_named("edge") {
        let lookup = |key: &str| -> Result<String, ExportError> {
            let id = e.attr(key).ok_or_else(|| bad(format!("edge without {key}")))?;
            titles
                .get(id)
                .cloned()
                .ok_or_else(|| bad(format!("edge references unknown node {id}")))
        };
        let kind = match data(e, &edge_keys).get("kind") {
            Some(k) => EdgeKind::parse(k).ok_or_else(|| bad(format!("unknown edge kind {k}")))?,
            None => EdgeKind::Forward,
        };
        edges.push(Edge {
            from: lookup("source")?,
            to: lookup("target")?,
            kind,
        });
    }
    DomainGraph::from_parts(nodes, edges).map_err(|e| bad(e.to_string()))
}

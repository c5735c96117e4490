//! GEXF 1.2 documents, as loaded by Gephi.

use std::collections::HashMap;
use std::fmt::Write;

use super::xml::{escape, parse, Element};
use super::ExportError;
use crate::graph::{ConceptNode, DomainGraph, Edge, EdgeKind, NodeStatus};

pub(super) fn render(g: &DomainGraph) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<gexf xmlns=\"http://gexf.net/1.2\" version=\"1.2\">\n");
    out.push_str("  <meta>\n    <creator>wikiindex</creator>\n");
    out.push_str("    <description>subject-domain concept graph</description>\n  </meta>\n");
    out.push_str("  <graph mode=\"static\" defaultedgetype=\"directed\">\n");
    out.push_str("    <attributes class=\"node\">\n");
    out.push_str("      <attribute id=\"status\" title=\"status\" type=\"string\"/>\n");
    out.push_str("      <attribute id=\"mentions\" title=\"mentions\" type=\"integer\"/>\n");
    out.push_str("      <attribute id=\"discovery_index\" title=\"discovery_index\" type=\"integer\"/>\n");
    out.push_str("    </attributes>\n");
    out.push_str("    <attributes class=\"edge\">\n");
    out.push_str("      <attribute id=\"kind\" title=\"kind\" type=\"string\"/>\n");
    out.push_str("    </attributes>\n");

    let ids: HashMap<&str, u64> = g
        .nodes()
        .iter()
        .map(|n| (n.title.as_str(), n.discovery_index))
        .collect();
    out.push_str("    <nodes>\n");
    for n in g.nodes() {
        let _ = writeln!(
            out,
            "      <node id=\"{}\" label=\"{}\">",
            n.discovery_index,
            escape(&n.title)
        );
        out.push_str("        <attvalues>\n");
        let _ = writeln!(out, "          <attvalue for=\"status\" value=\"{}\"/>", n.status);
        if let Some(m) = n.mentions {
            let _ = writeln!(out, "          <attvalue for=\"mentions\" value=\"{m}\"/>");
        }
        let _ = writeln!(
            out,
            "          <attvalue for=\"discovery_index\" value=\"{}\"/>",
            n.discovery_index
        );
        out.push_str("        </attvalues>\n      </node>\n");
    }
    out.push_str("    </nodes>\n    <edges>\n");
    for (i, e) in g.edges().iter().enumerate() {
        let _ = writeln!(
            out,
            "      <edge id=\"{i}\" source=\"{}\" target=\"{}\">",
            ids[e.from.as_str()],
            ids[e.to.as_str()]
        );
        let _ = writeln!(
            out,
            "        <attvalues><attvalue for=\"kind\" value=\"{}\"/></attvalues>",
            e.kind.as_str()
        );
        out.push_str("      </edge>\n");
    }
    out.push_str("    </edges>\n  </graph>\n</gexf>\n");
    out
}

/// Attribute id -> title, for one `<attributes class=...>` block.
fn attribute_titles(graph: &Element, class: &str) -> HashMap<String, String> {
    graph
        .children_named("attributes")
        .filter(|a| a.attr("class") == Some(class))
        .flat_map(|a| a.children_named("attribute"))
        .filter_map(|a| {
            let id = a.attr("id")?.to_string();
            let title = a.attr("title").unwrap_or(&id).to_string();
            Some((id, title))
        })
        .collect()
}

fn attvalues(el: &Element, titles: &HashMap<String, String>) -> HashMap<String, String> {
    el.child("attvalues")
        .into_iter()
        .flat_map(|a| a.children_named("attvalue"))
        .filter_map(|v| {
            let key = v.attr("for")?;
            let name = titles.get(key).cloned().unwrap_or_else(|| key.to_string());
            Some((name, v.attr("value")?.to_string()))
        })
        .collect()
}

fn bad(msg: impl Into<String>) -> ExportError {
    ExportError::Malformed(msg.into())
}

pub(super) fn import(text: &str) -> Result<DomainGraph, ExportError> {
    let root = parse(text)?;
    if root.name != "gexf" {
        return Err(bad(format!("expected <gexf>, found <{}>", root.name)));
    }
    let graph = root.child("graph").ok_or_else(|| bad("missing <graph>"))?;
    let node_attrs = attribute_titles(graph, "node");
    let edge_attrs = attribute_titles(graph, "edge");

    let mut titles = HashMap::new();
    let mut nodes = Vec::new();
    for (pos, n) in graph
        .child("nodes")
        .into_iter()
        .flat_map(|ns| ns.children_named("node"))
        .enumerate()
    {
        let id = n.attr("id").ok_or_else(|| bad("node without id"))?;
        let title = n.attr("label").unwrap_or(id).to_string();
        let vals = attvalues(n, &node_attrs);
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
    for e in graph
        .child("edges")
        .into_iter()
        .flat_map(|es| es.children_named("edge"))
    {
        let lookup = |key: &str| -> Result<String, ExportError> {
            let id = e.attr(key).ok_or_else(|| bad(format!("edge without {key}")))?;
            titles
                .get(id)
                .cloned()
                .ok_or_else(|| bad(format!("edge references unknown node {id}")))
        };
        let vals = attvalues(e, &edge_attrs);
        let kind = match vals.get("kind") {
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

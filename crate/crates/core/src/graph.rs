//! The directed concept graph built by a probe.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeStatus {
    Seed,
    Expanded,
    Endnote,
    Leaf,
    /// Discovered as a link target but never fetched.
    UndiscoveredPage,
}

impl NodeStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeStatus::Seed => "seed",
            NodeStatus::Expanded => "expanded",
            NodeStatus::Endnote => "endnote",
            NodeStatus::Leaf => "leaf",
            NodeStatus::UndiscoveredPage => "undiscovered_page",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "seed" => NodeStatus::Seed,
            "expanded" => NodeStatus::Expanded,
            "endnote" => NodeStatus::Endnote,
            "leaf" => NodeStatus::Leaf,
            "undiscovered_page" | "undiscovered-page" => NodeStatus::UndiscoveredPage,
            _ => return None,
        })
    }

    /// Whether a node with this status carries a mention count.
    pub fn has_mentions(self) -> bool {
        matches!(self, NodeStatus::Seed | NodeStatus::Expanded | NodeStatus::Endnote)
    }
}

impl fmt::Display for NodeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Forward,
    Back,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Forward => "forward",
            EdgeKind::Back => "back",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "forward" => Some(EdgeKind::Forward),
            "back" => Some(EdgeKind::Back),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptNode {
    pub title: String,
    pub discovery_index: u64,
    pub status: NodeStatus,
    pub mentions: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub kind: EdgeKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate node {0}")]
    DuplicateNode(String),
    #[error("duplicate discovery index {0}")]
    DuplicateIndex(u64),
    #[error("edge {from} -> {to} references a missing node")]
    DanglingEdge { from: String, to: String },
    #[error("duplicate edge {from} -> {to}")]
    DuplicateEdge { from: String, to: String },
    #[error("node {0}: mentions must be present exactly for seed/expanded/endnote")]
    MentionStatus(String),
    #[error("forward edge from {0}, which was never expanded")]
    ForwardFromUnexpanded(String),
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    nodes: Vec<ConceptNode>,
    edges: Vec<Edge>,
}

/// Nodes are kept in discovery order, edges in insertion order; both orders
/// are part of the graph's identity and drive every export.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct DomainGraph {
    nodes: Vec<ConceptNode>,
    edges: Vec<Edge>,
    by_title: HashMap<String, usize>,
    pairs: HashSet<(String, String)>,
    next_index: u64,
}

impl PartialEq for DomainGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

impl Eq for DomainGraph {}

impl From<DomainGraph> for GraphRepr {
    fn from(g: DomainGraph) -> Self {
        GraphRepr {
            nodes: g.nodes,
            edges: g.edges,
        }
    }
}

impl TryFrom<GraphRepr> for DomainGraph {
    type Error = GraphError;
    fn try_from(r: GraphRepr) -> Result<Self, GraphError> {
        DomainGraph::from_parts(r.nodes, r.edges)
    }
}

impl DomainGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rebuilds a graph from node and edge lists, checking structural invariants.
    pub fn from_parts(nodes: Vec<ConceptNode>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut g = DomainGraph::new();
        let mut indices = HashSet::new();
        for node in nodes {
            if g.by_title.contains_key(&node.title) {
                return Err(GraphError::DuplicateNode(node.title));
            }
            if !indices.insert(node.discovery_index) {
                return Err(GraphError::DuplicateIndex(node.discovery_index));
            }
            g.next_index = g.next_index.max(node.discovery_index + 1);
            g.by_title.insert(node.title.clone(), g.nodes.len());
            g.nodes.push(node);
        }
        for e in edges {
            if !g.contains(&e.from) || !g.contains(&e.to) {
                return Err(GraphError::DanglingEdge {
                    from: e.from,
                    to: e.to,
                });
            }
            if !g.pairs.insert((e.from.clone(), e.to.clone())) {
                return Err(GraphError::DuplicateEdge {
                    from: e.from,
                    to: e.to,
                });
            }
            g.edges.push(e);
        }
        Ok(g)
    }

    pub fn nodes(&self) -> &[ConceptNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, title: &str) -> bool {
        self.by_title.contains_key(title)
    }

    pub fn node(&self, title: &str) -> Option<&ConceptNode> {
        self.by_title.get(title).map(|&i| &self.nodes[i])
    }

    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        self.pairs.contains(&(from.to_string(), to.to_string()))
    }

    /// Adds a node with the next discovery index. Returns false if present.
    pub fn add_node(&mut self, title: &str, status: NodeStatus) -> bool {
        if self.contains(title) {
            return false;
        }
        self.by_title.insert(title.to_string(), self.nodes.len());
        self.nodes.push(ConceptNode {
            title: title.to_string(),
            discovery_index: self.next_index,
            status,
            mentions: None,
        });
        self.next_index += 1;
        true
    }

    pub fn set_status(&mut self, title: &str, status: NodeStatus, mentions: Option<u64>) {
        if let Some(&i) = self.by_title.get(title) {
            self.nodes[i].status = status;
            self.nodes[i].mentions = mentions;
        }
    }

    /// Adds `from -> to` unless the pair exists, an endpoint is missing, or
    /// it would be a self-loop.
    pub fn add_edge(&mut self, from: &str, to: &str, kind: EdgeKind) -> bool {
        if from == to || !self.contains(from) || !self.contains(to) {
            return false;
        }
        if !self.pairs.insert((from.to_string(), to.to_string())) {
            return false;
        }
        self.edges.push(Edge {
            from: from.to_string(),
            to: to.to_string(),
            kind,
        });
        true
    }

    /// Renames a node in place; edges follow. `to` must be unused.
    pub fn rename_node(&mut self, from: &str, to: &str) {
        let Some(i) = self.by_title.remove(from) else {
            return;
        };
        assert!(!self.contains(to), "rename target {to} already present");
        self.nodes[i].title = to.to_string();
        self.by_title.insert(to.to_string(), i);
        for e in &mut self.edges {
            if e.from == from {
                e.from = to.to_string();
            }
            if e.to == from {
                e.to = to.to_string();
            }
        }
        self.rebuild_pairs();
    }

    /// Folds node `alias` into existing node `target`. Edges into the alias
    /// are re-pointed at the target as back edges; duplicates and self-loops
    /// are dropped.
    pub fn merge_into(&mut self, alias: &str, target: &str) {
        let Some(i) = self.by_title.get(alias).copied() else {
            return;
        };
        self.nodes.remove(i);
        self.by_title = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.title.clone(), i))
            .collect();
        let old = std::mem::take(&mut self.edges);
        self.pairs.clear();
        for mut e in old {
            if e.from == alias {
                e.from = target.to_string();
                e.kind = EdgeKind::Back;
            }
            if e.to == alias {
                e.to = target.to_string();
                e.kind = EdgeKind::Back;
            }
            self.add_edge(&e.from.clone(), &e.to.clone(), e.kind);
        }
    }

    fn rebuild_pairs(&mut self) {
        self.pairs = self
            .edges
            .iter()
            .map(|e| (e.from.clone(), e.to.clone()))
            .collect();
    }

    /// Out-going forward edges of `title`.
    pub fn forward_out_degree(&self, title: &str) -> usize {
        self.edges
            .iter()
            .filter(|e| e.from == title && e.kind == EdgeKind::Forward)
            .count()
    }

    /// Checks the crawl invariants. With `endnotes_expand` set, endnotes may
    /// also originate forward edges.
    pub fn validate(&self, endnotes_expand: bool) -> Result<(), GraphError> {
        for n in &self.nodes {
            if n.status.has_mentions() != n.mentions.is_some() {
                return Err(GraphError::MentionStatus(n.title.clone()));
            }
        }
        for e in &self.edges {
            if e.kind != EdgeKind::Forward {
                continue;
            }
            let status = self.node(&e.from).map(|n| n.status);
            let ok = match status {
                Some(NodeStatus::Seed | NodeStatus::Expanded) => true,
                Some(NodeStatus::Endnote) => endnotes_expand,
                _ => false,
            };
            if !ok {
                return Err(GraphError::ForwardFromUnexpanded(e.from.clone()));
            }
        }
        Ok(())
    }
}

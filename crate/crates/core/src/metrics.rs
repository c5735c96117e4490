//! Network statistics over the undirected simple projection of a domain graph.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_traits::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::DomainGraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("graph has no nodes")]
    EmptyGraph,
}

/// Simple undirected graph; vertices keep the domain graph's node order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    titles: Vec<String>,
    adjacency: Vec<BTreeSet<usize>>,
}

impl UndirectedGraph {
    pub fn new(titles: Vec<String>) -> Self {
        let n = titles.len();
        UndirectedGraph {
            titles,
            adjacency: vec![BTreeSet::new(); n],
        }
    }

    /// Adds `{a, b}`; self-loops and repeats are ignored.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.adjacency[a].insert(b);
            self.adjacency[b].insert(a);
        }
    }

    pub fn node_count(&self) -> usize {
        self.titles.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().copied()
    }

    pub fn titles(&self) -> &[String] {
        &self.titles
    }

    /// Connected components, each sorted, ordered by their smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.node_count()];
        let mut out = Vec::new();
        for start in 0..self.node_count() {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Largest hop distance from `source` to any reachable vertex.
    pub fn eccentricity(&self, source: usize) -> usize {
        let mut dist = vec![usize::MAX; self.node_count()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        let mut far = 0;
        while let Some(v) = queue.pop_front() {
            far = far.max(dist[v]);
            for w in self.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        far
    }

    /// Local clustering coefficient; 0 for degree below 2.
    pub fn local_clustering<T: Float>(&self, v: usize) -> T {
        let k = self.degree(v);
        if k < 2 {
            return T::zero();
        }
        let nbrs: Vec<usize> = self.neighbors(v).collect();
        let mut links = 0usize;
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if self.adjacency[a].contains(&b) {
                    links += 1;
                }
            }
        }
        let possible = k * (k - 1) / 2;
        T::from(links).expect("count fits") / T::from(possible).expect("count fits")
    }
}

/// Merges forward and back edges into one undirected edge per linked pair.
pub fn to_undirected(g: &DomainGraph) -> UndirectedGraph {
    let titles: Vec<String> = g.nodes().iter().map(|n| n.title.clone()).collect();
    let index: HashMap<&str, usize> = titles
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_str(), i))
        .collect();
    let mut u = UndirectedGraph::new(titles.clone());
    for e in g.edges() {
        if let (Some(&a), Some(&b)) = (index.get(e.from.as_str()), index.get(e.to.as_str())) {
            u.add_edge(a, b);
        }
    }
    u
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeDegree {
    pub title: String,
    pub degree: usize,
}

/// Per-graph statistics, generic over the float type used for averages.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics<T> {
    pub node_count: usize,
    /// Undirected simple edges.
    pub edge_count: usize,
    pub average_degree: T,
    /// Diameter of the largest connected component.
    pub diameter: usize,
    pub largest_component_size: usize,
    pub component_count: usize,
    pub average_clustering: T,
    pub top_nodes: Vec<NodeDegree>,
}

/// Computes [`Metrics`] on the undirected projection of `g`.
pub fn compute_metrics<T: Float>(g: &DomainGraph, top_k: usize) -> Result<Metrics<T>, MetricsError> {
    metrics_of(&to_undirected(g), top_k)
}

pub fn metrics_of<T: Float>(u: &UndirectedGraph, top_k: usize) -> Result<Metrics<T>, MetricsError> {
    let n = u.node_count();
    if n == 0 {
        return Err(MetricsError::EmptyGraph);
    }
    let e = u.edge_count();
    let to_t = |x: usize| T::from(x).expect("count fits");

    let components = u.components();
    // Largest by size; ties go to the component discovered first.
    let largest = components
        .iter()
        .fold(&components[0], |best, c| if c.len() > best.len() { c } else { best });
    let diameter = largest.iter().map(|&v| u.eccentricity(v)).max().unwrap_or(0);

    let clustering_sum = (0..n).fold(T::zero(), |acc, v| acc + u.local_clustering::<T>(v));

    let mut ranked: Vec<NodeDegree> = (0..n)
        .map(|v| NodeDegree {
            title: u.titles()[v].clone(),
            degree: u.degree(v),
        })
        .collect();
    ranked.sort_by(|a, b| b.degree.cmp(&a.degree).then_with(|| a.title.cmp(&b.title)));
    ranked.truncate(top_k);

    Ok(Metrics {
        node_count: n,
        edge_count: e,
        average_degree: to_t(2 * e) / to_t(n),
        diameter,
        largest_component_size: largest.len(),
        component_count: components.len(),
        average_clustering: clustering_sum / to_t(n),
        top_nodes: ranked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EdgeKind, NodeStatus};

    fn graph(nodes: &[&str], edges: &[(&str, &str, EdgeKind)]) -> DomainGraph {
        let mut g = DomainGraph::new();
        for n in nodes {
            g.add_node(n, NodeStatus::UndiscoveredPage);
        }
        for (a, b, k) in edges {
            g.add_edge(a, b, *k);
        }
        g
    }

    #[test]
    fn back_edges_merge() {
        let g = graph(
            &["A", "B"],
            &[("A", "B", EdgeKind::Forward), ("B", "A", EdgeKind::Back)],
        );
        let u = to_undirected(&g);
        assert_eq!(u.edge_count(), 1);
        assert!(to_undirected(&DomainGraph::new()).node_count() == 0);
    }

    #[test]
    fn triangle() {
        use EdgeKind::Forward as F;
        let g = graph(&["A", "B", "C"], &[("A", "B", F), ("B", "C", F), ("C", "A", F)]);
        let m = compute_metrics::<f64>(&g, 10).unwrap();
        assert_eq!(m.diameter, 1);
        assert_eq!(m.average_clustering, 1.0);
        assert_eq!(m.average_degree, 2.0);
    }

    #[test]
    fn path() {
        use EdgeKind::Forward as F;
        let g = graph(&["A", "B", "C"], &[("A", "B", F), ("B", "C", F)]);
        let m = compute_metrics::<f32>(&g, 1).unwrap();
        assert_eq!(m.diameter, 2);
        assert_eq!(m.average_clustering, 0.0);
        assert_eq!(m.top_nodes, vec![NodeDegree { title: "B".into(), degree: 2 }]);
    }

    #[test]
    fn components_do_not_mix() {
        use EdgeKind::Forward as F;
        // Path of 4 (diameter 3) and a triangle: diameter must be 3 from the
        // larger component, never an infinite/cross-component distance.
        let g = graph(
            &["A", "B", "C", "D", "X", "Y", "Z"],
            &[("A", "B", F), ("B", "C", F), ("C", "D", F), ("X", "Y", F), ("Y", "Z", F), ("Z", "X", F)],
        );
        let m = compute_metrics::<f64>(&g, 3).unwrap();
        assert_eq!(m.component_count, 2);
        assert_eq!(m.largest_component_size, 4);
        assert_eq!(m.diameter, 3);
    }

    #[test]
    fn singleton_and_empty() {
        let m = compute_metrics::<f64>(&graph(&["A"], &[]), 5).unwrap();
        assert_eq!(m.diameter, 0);
        assert_eq!(m.average_degree, 0.0);
        assert_eq!(compute_metrics::<f64>(&DomainGraph::new(), 5), Err(MetricsError::EmptyGraph));
    }

    #[test]
    fn top_nodes_tie_by_title() {
        use EdgeKind::Forward as F;
        let g = graph(&["Hub", "b", "a", "c"], &[("Hub", "b", F), ("Hub", "a", F), ("Hub", "c", F)]);
        let m = compute_metrics::<f64>(&g, 4).unwrap();
        let names: Vec<_> = m.top_nodes.iter().map(|n| n.title.as_str()).collect();
        assert_eq!(names, ["Hub", "a", "b", "c"]);
    }
}

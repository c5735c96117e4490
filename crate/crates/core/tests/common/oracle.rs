//! Brute-force reference implementations, kept deliberately naive.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use wikiindex::{DomainGraph, EdgeKind, NodeStatus};

/// max{i : R_i >= i} by a linear scan over the sorted counts.
pub fn brute_wh(counts: &[u64]) -> u64 {
    let mut sorted: Vec<u64> = counts.iter().copied().filter(|&c| c > 0).collect();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut best = 0;
    for (i, &c) in sorted.iter().enumerate() {
        if c >= (i + 1) as u64 {
            best = (i + 1) as u64;
        }
    }
    best
}

pub fn random_counts(rng: &mut ChaCha8Rng) -> Vec<u64> {
    let len = rng.gen_range(0..=200);
    (0..len).map(|_| rng.gen_range(0..=500)).collect()
}

/// A random directed graph of at most `max_nodes` nodes with mixed edge kinds.
pub fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize) -> DomainGraph {
    let n = rng.gen_range(1..=max_nodes);
    let p: f64 = rng.gen_range(0.0..0.35);
    let mut g = DomainGraph::new();
    for i in 0..n {
        g.add_node(&format!("v{i:02}"), NodeStatus::Expanded);
    }
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(p) {
                let kind = if rng.gen_bool(0.5) { EdgeKind::Forward } else { EdgeKind::Back };
                g.add_edge(&format!("v{a:02}"), &format!("v{b:02}"), kind);
            }
        }
    }
    g
}

/// Symmetric adjacency matrix of the undirected projection, indexed by node order.
pub fn adjacency(g: &DomainGraph) -> Vec<Vec<bool>> {
    let idx = |t: &str| g.nodes().iter().position(|n| n.title == t).unwrap();
    let n = g.nodes().len();
    let mut m = vec![vec![false; n]; n];
    for e in g.edges() {
        let (a, b) = (idx(&e.from), idx(&e.to));
        if a != b {
            m[a][b] = true;
            m[b][a] = true;
        }
    }
    m
}

pub fn edge_count(m: &[Vec<bool>]) -> usize {
    let n = m.len();
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| m[a][b]).count()
}

/// Floyd-Warshall distances; `None` means unreachable.
fn all_pairs(m: &[Vec<bool>]) -> Vec<Vec<Option<usize>>> {
    let n = m.len();
    let mut d = vec![vec![None; n]; n];
    for a in 0..n {
        d[a][a] = Some(0);
        for b in 0..n {
            if m[a][b] {
                d[a][b] = Some(1);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(x), Some(y)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|cur| x + y < cur) {
                        d[i][j] = Some(x + y);
                    }
                }
            }
        }
    }
    d
}

/// Longest shortest path inside the largest component (ties: the component
/// holding the lowest-numbered vertex), plus that component's size.
pub fn diameter(m: &[Vec<bool>]) -> (usize, usize) {
    let d = all_pairs(m);
    let n = m.len();
    let mut best: Option<Vec<usize>> = None;
    let mut assigned = vec![false; n];
    for v in 0..n {
        if assigned[v] {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&w| d[v][w].is_some()).collect();
        for &w in &comp {
            assigned[w] = true;
        }
        if best.as_ref().is_none_or(|b| comp.len() > b.len()) {
            best = Some(comp);
        }
    }
    let comp = best.unwrap_or_default();
    let diam = comp
        .iter()
        .flat_map(|&a| comp.iter().map(move |&b| (a, b)))
        .map(|(a, b)| d[a][b].unwrap())
        .max()
        .unwrap_or(0);
    (diam, comp.len())
}

/// Mean local clustering by counting triangles directly.
pub fn average_clustering(m: &[Vec<bool>]) -> f64 {
    let n = m.len();
    let mut sum = 0.0;
    for v in 0..n {
        let nb: Vec<usize> = (0..n).filter(|&w| m[v][w]).collect();
        let k = nb.len();
        if k < 2 {
            continue;
        }
        let mut triangles = 0usize;
        for i in 0..k {
            for j in i + 1..k {
                if m[nb[i]][nb[j]] {
                    triangles += 1;
                }
            }
        }
        sum += 2.0 * triangles as f64 / (k * (k - 1)) as f64;
    }
    sum / n as f64
}

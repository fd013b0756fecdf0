//! Directed graph of an interconnection and its connectivity test.
//!
//! Edge `(i, j)` is present iff `γ_ij ≠ 0`, i.e. oscillator `i` listens to
//! oscillator `j`. The graph is connected when some node can be reached by a
//! directed path from every other node.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::coupling::Interconnection;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    nodes: usize,
    edges: Vec<(usize, usize)>,
}

impl DirectedGraph {
    /// Self-loops are dropped.
    pub fn new(nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut edges: Vec<_> = edges
            .into_iter()
            .filter(|&(i, j)| i != j && i < nodes && j < nodes)
            .collect();
        edges.sort_unstable();
        edges.dedup();
        Self { nodes, edges }
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    fn adjacency(&self, reversed: bool) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes];
        for &(i, j) in &self.edges {
            if reversed {
                adj[j].push(i);
            } else {
                adj[i].push(j);
            }
        }
        adj
    }
}

pub fn build_graph(net: &Interconnection) -> DirectedGraph {
    DirectedGraph::new(net.nodes(), net.edges().map(|(i, j, _)| (i, j)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivityReport {
    pub nodes: usize,
    pub connected: bool,
    /// 0-based nodes reachable from every other node.
    pub witnesses: Vec<usize>,
    /// The same witnesses labelled `n1 … np`.
    pub witness_labels: Vec<String>,
    /// When disconnected: two nodes whose reachable sets are disjoint.
    pub counterexample: Option<(usize, usize)>,
}

fn bfs(adj: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// One reverse BFS per candidate; a candidate is a witness iff it reaches all
/// nodes along reversed edges.
pub fn is_connected(g: &DirectedGraph) -> ConnectivityReport {
    let reversed = g.adjacency(true);
    let witnesses: Vec<usize> = (0..g.nodes)
        .filter(|&c| bfs(&reversed, c).iter().all(|&r| r))
        .collect();
    let connected = !witnesses.is_empty();

    let counterexample = if connected {
        None
    } else {
        // Not connected means at least two sink components; a node from each
        // reaches disjoint sets.
        let forward = g.adjacency(false);
        let reach: Vec<Vec<bool>> = (0..g.nodes).map(|u| bfs(&forward, u)).collect();
        (0..g.nodes)
            .flat_map(|a| (a + 1..g.nodes).map(move |b| (a, b)))
            .find(|&(a, b)| !reach[a].iter().zip(&reach[b]).any(|(x, y)| *x && *y))
    };

    ConnectivityReport {
        nodes: g.nodes,
        connected,
        witness_labels: witnesses.iter().map(|w| format!("n{}", w + 1)).collect(),
        witnesses,
        counterexample,
    }
}

/// Weakly connected components, used to split disconnected examples.
pub fn weak_components(g: &DirectedGraph) -> Vec<Vec<usize>> {
    let mut adj = g.adjacency(false);
    for &(i, j) in &g.edges {
        adj[j].push(i);
    }
    let mut label = vec![usize::MAX; g.nodes];
    let mut comps = Vec::new();
    for s in 0..g.nodes {
        if label[s] != usize::MAX {
            continue;
        }
        let seen = bfs(&adj, s);
        let comp: Vec<usize> = (0..g.nodes).filter(|&v| seen[v]).collect();
        for &v in &comp {
            label[v] = comps.len();
        }
        comps.push(comp);
    }
    comps
}

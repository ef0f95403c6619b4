//! Weighted undirected graphs with per-node map attributes.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::VariableKind;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub label: String,
    pub kind: Option<VariableKind>,
    /// Optional size attribute (e.g. document frequency).
    pub size: Option<f64>,
    /// Community or factor index used for coloring.
    pub cluster: Option<usize>,
    /// Set when the node has no incident edge.
    pub isolated: bool,
}

impl Node {
    pub fn new(label: impl Into<String>) -> Self {
        Self { label: label.into(), kind: None, size: None, cluster: None, isolated: true }
    }
}

/// Undirected edge with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

/// Simple undirected graph: no self-loops, at most one edge per pair.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightedGraph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    lookup: BTreeMap<(usize, usize), usize>,
}

impl WeightedGraph {
    pub fn new(nodes: Vec<Node>) -> Self {
        let mut nodes = nodes;
        for n in &mut nodes {
            n.isolated = true;
        }
        Self { nodes, edges: Vec::new(), lookup: BTreeMap::new() }
    }

    pub fn from_labels<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(labels.into_iter().map(Node::new).collect())
    }

    pub fn add_edge(&mut self, a: usize, b: usize, weight: f64) -> Result<()> {
        let n = self.nodes.len();
        if a >= n || b >= n {
            return Err(Error::InvalidArgument(alloc::format!("edge ({a}, {b}) outside 0..{n}")));
        }
        if a == b {
            return Err(Error::InvalidArgument(alloc::format!("self-loop on node {a}")));
        }
        if !weight.is_finite() {
            return Err(Error::InvalidArgument(alloc::format!("non-finite weight on edge ({a}, {b})")));
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        if self.lookup.contains_key(&(a, b)) {
            return Err(Error::InvalidArgument(alloc::format!("duplicate edge ({a}, {b})")));
        }
        self.lookup.insert((a, b), self.edges.len());
        self.edges.push(Edge { a, b, weight });
        self.nodes[a].isolated = false;
        self.nodes[b].isolated = false;
        Ok(())
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn nodes_mut(&mut self) -> &mut [Node] {
        &mut self.nodes
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

    pub fn weight(&self, a: usize, b: usize) -> Option<f64> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.lookup.get(&key).map(|&e| self.edges[e].weight)
    }

    pub fn label_index(&self) -> BTreeMap<&str, usize> {
        self.nodes.iter().enumerate().map(|(i, n)| (n.label.as_str(), i)).collect()
    }

    /// Neighbor lists sorted by neighbor index.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.a].push((e.b, e.weight));
            adj[e.b].push((e.a, e.weight));
        }
        for list in &mut adj {
            list.sort_by_key(|&(j, _)| j);
        }
        adj
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Copy without the nodes that have no incident edge.
    pub fn drop_isolates(&self) -> WeightedGraph {
        let keep: Vec<usize> = (0..self.nodes.len()).filter(|&i| !self.nodes[i].isolated).collect();
        self.induced(&keep)
    }

    /// Subgraph on `keep` (in that order).
    pub fn induced(&self, keep: &[usize]) -> WeightedGraph {
        let mut remap = vec![usize::MAX; self.nodes.len()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let mut g = WeightedGraph::new(keep.iter().map(|&i| self.nodes[i].clone()).collect());
        for e in &self.edges {
            let (a, b) = (remap[e.a], remap[e.b]);
            if a != usize::MAX && b != usize::MAX {
                g.add_edge(a, b, e.weight).expect("edges of a simple graph stay simple");
            }
        }
        g
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; self.nodes.len()];
        let mut out = Vec::new();
        for start in 0..self.nodes.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut k = 0;
            while k < members.len() {
                let v = members[k];
                for &(w, _) in &adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loops_and_duplicates() {
        let mut g = WeightedGraph::from_labels(["a", "b"]);
        assert!(g.add_edge(0, 0, 1.0).is_err());
        g.add_edge(1, 0, 0.5).unwrap();
        assert!(g.add_edge(0, 1, 0.5).is_err());
        assert_eq!(g.edges()[0], Edge { a: 0, b: 1, weight: 0.5 });
        assert_eq!(g.weight(1, 0), Some(0.5));
    }

    #[test]
    fn isolates_are_flagged_and_dropped() {
        let mut g = WeightedGraph::from_labels(["a", "b", "c", "d"]);
        g.add_edge(0, 2, 1.0).unwrap();
        assert!(g.nodes()[1].isolated && g.nodes()[3].isolated);
        let h = g.drop_isolates();
        assert_eq!(h.node_count(), 2);
        assert_eq!(h.nodes()[1].label, "c");
        assert_eq!(h.edges()[0], Edge { a: 0, b: 1, weight: 1.0 });
    }

    #[test]
    fn components_in_order() {
        let mut g = WeightedGraph::from_labels(["a", "b", "c", "d", "e"]);
        g.add_edge(3, 1, 1.0).unwrap();
        g.add_edge(0, 4, 1.0).unwrap();
        assert_eq!(g.components(), [vec![0, 4], vec![1, 3], vec![2]]);
    }
}

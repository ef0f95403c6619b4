use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::WeightedGraph;

/// Neighbor count, or incident weight sum when `weighted`.
pub fn degree_centrality(g: &WeightedGraph, weighted: bool) -> Vec<f64> {
    let mut deg = vec![0.0; g.node_count()];
    for e in g.edges() {
        let w = if weighted { e.weight } else { 1.0 };
        deg[e.a] += w;
        deg[e.b] += w;
    }
    deg
}

/// Shortest-path betweenness (Brandes accumulation) over hop-count
/// geodesics; edge weights do not affect path lengths. With `normalized`,
/// scores are divided by the number of node pairs excluding the node,
/// `(v - 1)(v - 2) / 2`.
pub fn betweenness_centrality(g: &WeightedGraph, normalized: bool) -> Vec<f64> {
    let n = g.node_count();
    let adj = g.adjacency();
    let mut bc = vec![0.0; n];

    let mut stack = Vec::with_capacity(n);
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut depth = vec![usize::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut queue = VecDeque::with_capacity(n);

    for s in 0..n {
        stack.clear();
        for v in 0..n {
            preds[v].clear();
            sigma[v] = 0.0;
            depth[v] = usize::MAX;
            delta[v] = 0.0;
        }
        sigma[s] = 1.0;
        depth[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &(w, _) in &adj[v] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                }
                if depth[w] == depth[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                bc[w] += delta[w];
            }
        }
    }

    // every unordered pair was counted from both ends
    let scale = if normalized && n > 2 { ((n - 1) * (n - 2)) as f64 } else { 2.0 };
    for b in &mut bc {
        *b /= scale;
    }
    bc
}

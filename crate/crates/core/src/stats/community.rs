use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Community assignment with contiguous indices from 0 and its modularity.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub assignment: Vec<usize>,
    pub q: f64,
}

impl Partition {
    pub fn communities(&self) -> usize {
        self.assignment.iter().max().map_or(0, |m| m + 1)
    }
}

/// Newman-Girvan modularity with resolution 1:
/// `Q = (1/2W) sum_ij [w_ij - k_i k_j / 2W] [c_i = c_j]`.
/// A graph without edge weight has `Q = 0`.
pub fn modularity_q(g: &WeightedGraph, assignment: &[usize]) -> Result<f64> {
    if assignment.len() != g.node_count() {
        return Err(Error::DimensionMismatch { expected: g.node_count(), found: assignment.len() });
    }
    let two_w = 2.0 * g.total_weight();
    if two_w == 0.0 {
        return Ok(0.0);
    }
    let mut internal: BTreeMap<usize, f64> = BTreeMap::new();
    let mut total: BTreeMap<usize, f64> = BTreeMap::new();
    for e in g.edges() {
        *total.entry(assignment[e.a]).or_default() += e.weight;
        *total.entry(assignment[e.b]).or_default() += e.weight;
        if assignment[e.a] == assignment[e.b] {
            *internal.entry(assignment[e.a]).or_default() += 2.0 * e.weight;
        }
    }
    Ok(total
        .iter()
        .map(|(c, &tot)| internal.get(c).copied().unwrap_or(0.0) / two_w - (tot / two_w) * (tot / two_w))
        .sum())
}

struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
}

impl Level {
    fn strengths(&self) -> Vec<f64> {
        self.adj
            .iter()
            .zip(&self.self_loops)
            .map(|(nbrs, s)| nbrs.iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * s)
            .collect()
    }
}

const MIN_GAIN: f64 = 1e-12;

/// Moves nodes between communities until no move improves modularity.
/// Returns the community of each node and whether anything moved.
fn local_moving(level: &Level, rng: &mut ChaCha8Rng, two_w: f64) -> (Vec<usize>, bool) {
    let n = level.adj.len();
    let k = level.strengths();
    let mut comm: Vec<usize> = (0..n).collect();
    let mut tot = k.clone();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut improved = false;
    let mut links: BTreeMap<usize, f64> = BTreeMap::new();
    loop {
        let mut moved = false;
        for &i in &order {
            let current = comm[i];
            links.clear();
            for &(j, w) in &level.adj[i] {
                *links.entry(comm[j]).or_default() += w;
            }
            tot[current] -= k[i];
            let gain = |c: usize, kic: f64| kic - tot[c] * k[i] / two_w;
            let stay = gain(current, links.get(&current).copied().unwrap_or(0.0));
            let mut best = current;
            let mut best_gain = f64::NEG_INFINITY;
            // ascending community index, so ties keep the lowest
            for (&c, &kic) in &links {
                let g = gain(c, kic);
                if g > best_gain {
                    best = c;
                    best_gain = g;
                }
            }
            if best != current && best_gain - stay > MIN_GAIN {
                comm[i] = best;
                moved = true;
            } else {
                best = current;
            }
            tot[best] += k[i];
        }
        if !moved {
            break;
        }
        improved = true;
    }
    (comm, improved)
}

fn renumber(comm: &[usize]) -> (Vec<usize>, usize) {
    let mut map = BTreeMap::new();
    let out = comm
        .iter()
        .map(|c| {
            let next = map.len();
            *map.entry(*c).or_insert(next)
        })
        .collect();
    (out, map.len())
}

fn aggregate(level: &Level, comm: &[usize], count: usize) -> Level {
    let mut self_loops = vec![0.0; count];
    let mut links: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (i, nbrs) in level.adj.iter().enumerate() {
        self_loops[comm[i]] += level.self_loops[i];
        for &(j, w) in nbrs {
            if j <= i {
                continue;
            }
            let (a, b) = (comm[i], comm[j]);
            if a == b {
                self_loops[a] += w;
            } else {
                *links.entry((a.min(b), a.max(b))).or_default() += w;
            }
        }
    }
    let mut adj = vec![Vec::new(); count];
    for (&(a, b), &w) in &links {
        adj[a].push((b, w));
        adj[b].push((a, w));
    }
    Level { adj, self_loops }
}

/// Louvain modularity optimization: local moving followed by aggregation,
/// repeated until a level brings no improvement. Node visiting order is
/// shuffled once per level by the seeded generator.
pub fn louvain_communities(g: &WeightedGraph, seed: u64) -> Result<Partition> {
    if let Some(e) = g.edges().iter().find(|e| e.weight < 0.0) {
        return Err(Error::NegativeWeight { a: e.a, b: e.b, weight: e.weight });
    }
    let two_w = 2.0 * g.total_weight();
    if g.edge_count() == 0 || two_w == 0.0 {
        return Err(Error::NoEdges);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = Level { adj: g.adjacency(), self_loops: vec![0.0; g.node_count()] };
    let mut membership: Vec<usize> = (0..g.node_count()).collect();
    loop {
        let (comm, improved) = local_moving(&level, &mut rng, two_w);
        if !improved {
            break;
        }
        let (comm, count) = renumber(&comm);
        for m in &mut membership {
            *m = comm[*m];
        }
        level = aggregate(&level, &comm, count);
        if count == 1 {
            break;
        }
    }
    let (assignment, _) = renumber(&membership);
    let q = modularity_q(g, &assignment)?;
    if q < 0.0 {
        let assignment = vec![0; g.node_count()];
        let q = modularity_q(g, &assignment)?;
        return Ok(Partition { assignment, q });
    }
    Ok(Partition { assignment, q })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> WeightedGraph {
        let mut g = WeightedGraph::from_labels((0..n).map(|i| alloc::format!("n{i}")));
        for &(a, b) in edges {
            g.add_edge(a, b, 1.0).unwrap();
        }
        g
    }

    const TWO_TRIANGLES: [(usize, usize); 6] = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)];

    #[test]
    fn modularity_examples() {
        let g = graph(6, &TWO_TRIANGLES);
        assert_eq!(modularity_q(&g, &[0; 6]).unwrap(), 0.0);
        assert!((modularity_q(&g, &[0, 0, 0, 1, 1, 1]).unwrap() - 0.5).abs() < 1e-15);
        assert!((modularity_q(&g, &[7, 7, 7, 2, 2, 2]).unwrap() - 0.5).abs() < 1e-15);
        assert!(modularity_q(&g, &[0; 5]).is_err());
    }

    #[test]
    fn louvain_splits_two_triangles() {
        let g = graph(6, &TWO_TRIANGLES);
        for seed in 0..10 {
            let p = louvain_communities(&g, seed).unwrap();
            assert_eq!(p.communities(), 2);
            assert_eq!(p.assignment[0], p.assignment[2]);
            assert_ne!(p.assignment[0], p.assignment[3]);
            assert!((p.q - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn louvain_keeps_k4_whole() {
        let g = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let p = louvain_communities(&g, 3).unwrap();
        assert_eq!(p.assignment, [0, 0, 0, 0]);
        assert_eq!(p.q, 0.0);
    }

    #[test]
    fn louvain_rejects_edgeless_and_negative() {
        assert_eq!(louvain_communities(&graph(3, &[]), 0), Err(Error::NoEdges));
        let mut g = graph(2, &[]);
        g.add_edge(0, 1, -1.0).unwrap();
        assert!(matches!(louvain_communities(&g, 0), Err(Error::NegativeWeight { .. })));
    }

    #[test]
    fn louvain_is_seed_deterministic() {
        let edges: Vec<(usize, usize)> =
            (0..12).flat_map(|a| ((a + 1)..12).filter(move |b| (a * 7 + b * 3) % 5 < 2).map(move |b| (a, b))).collect();
        let g = graph(12, &edges);
        assert_eq!(louvain_communities(&g, 42).unwrap(), louvain_communities(&g, 42).unwrap());
    }
}

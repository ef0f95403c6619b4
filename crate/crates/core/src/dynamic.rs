//! Joint layout of a sequence of networks.
//!
//! The objective is the Kamada-Kawai stress of every slice plus a penalty
//! `omega * |x_{i,t} - x_{i,t+1}|^2` for every node present in consecutive
//! slices. With a window `w > 1`, slices `delta <= w` apart are also tied,
//! with weight `omega / delta^2`.
//!
//! Each sweep visits nodes in id order and replaces the node's whole
//! trajectory by the exact minimizer of its majorant. Per slice the majorant
//! is the one used by the static optimizer; the temporal ties are quadratic
//! already, so the trajectory solves a small positive definite system.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::layout::{
    self, node_majorant, pair_weights, random_points, raw_stress, relative_decrease, Init, LayoutConfig, Point,
    Positions, Weighting,
};
use crate::linalg::{cholesky_solve, Matrix};
use crate::matrix::SimilarityMatrix;
use crate::stats::FactorModel;

/// One time slice: the nodes present (global ids, ascending) and their
/// target distances in that order.
#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    nodes: Vec<usize>,
    distances: Matrix,
}

impl Slice {
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn distances(&self) -> &Matrix {
        &self.distances
    }

    fn local(&self, id: usize) -> Option<usize> {
        self.nodes.binary_search(&id).ok()
    }
}

/// Persistent node universe plus one distance matrix per time slice.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSlicedNetwork {
    labels: Vec<String>,
    slices: Vec<Slice>,
}

impl TimeSlicedNetwork {
    /// `slices` pairs each presence list (global ids, any order) with its
    /// distance matrix in that order.
    pub fn new(labels: Vec<String>, slices: Vec<(Vec<usize>, Matrix)>) -> Result<Self> {
        let mut out = Vec::with_capacity(slices.len());
        for (t, (nodes, d)) in slices.into_iter().enumerate() {
            if d.rows() != nodes.len() {
                return Err(Error::DimensionMismatch { expected: nodes.len(), found: d.rows() });
            }
            layout::validate_distances(&d)?;
            if let Some(&bad) = nodes.iter().find(|&&id| id >= labels.len()) {
                return Err(Error::InvalidArgument(alloc::format!("slice {t}: unknown node id {bad}")));
            }
            let mut order: Vec<usize> = (0..nodes.len()).collect();
            order.sort_by_key(|&k| nodes[k]);
            if order.windows(2).any(|w| nodes[w[0]] == nodes[w[1]]) {
                return Err(Error::InvalidArgument(alloc::format!("slice {t}: repeated node id")));
            }
            let mut sorted = Matrix::zeros(nodes.len(), nodes.len());
            for (a, &ka) in order.iter().enumerate() {
                for (b, &kb) in order.iter().enumerate() {
                    sorted[(a, b)] = d[(ka, kb)];
                }
            }
            let nodes = order.iter().map(|&k| nodes[k]).collect();
            out.push(Slice { nodes, distances: sorted });
        }
        Ok(Self { labels, slices: out })
    }

    /// Builds the universe from labelled distance matrices, matching nodes
    /// across slices by label in order of first appearance.
    pub fn from_labelled(slices: &[SimilarityMatrix]) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut ids: BTreeMap<String, usize> = BTreeMap::new();
        let mut parts = Vec::with_capacity(slices.len());
        for s in slices {
            let nodes = s
                .labels()
                .iter()
                .map(|l| {
                    *ids.entry(l.clone()).or_insert_with(|| {
                        labels.push(l.clone());
                        labels.len() - 1
                    })
                })
                .collect();
            parts.push((nodes, s.values().clone()));
        }
        Self::new(labels, parts)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicConfig {
    /// Weight of the displacement penalty between consecutive slices.
    pub omega: f64,
    /// Largest slice gap tied by the penalty (weight `omega / gap^2`).
    pub window: usize,
}

impl Default for DynamicConfig {
    fn default() -> Self {
        Self { omega: 0.5, window: 1 }
    }
}

/// Stress split into the per-slice and displacement parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StressDecomposition {
    pub total: f64,
    pub static_term: f64,
    pub dynamic_term: f64,
}

/// Optimized coordinates for every slice.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutFrameSet {
    /// `frames[t][k]` is the position of `slices[t].nodes()[k]`.
    pub frames: Vec<Positions>,
    pub omega: f64,
    pub window: usize,
    pub static_stress: f64,
    pub dynamic_stress: f64,
    /// Total stress after each sweep.
    pub stress_trace: Vec<f64>,
    pub converged: bool,
}

impl LayoutFrameSet {
    pub fn total_stress(&self) -> f64 {
        self.static_stress + self.dynamic_stress
    }

    /// Sum of squared displacements between consecutive slices, i.e. the
    /// dynamic term without its weight.
    pub fn displacement(&self, net: &TimeSlicedNetwork) -> f64 {
        displacement(&frame_points(&self.frames), net, 1)
    }

    /// Keyframes for interpolation and rendering.
    pub fn animation_frames(&self, net: &TimeSlicedNetwork) -> Vec<AnimationFrame> {
        self.frames
            .iter()
            .zip(net.slices())
            .map(|(pos, slice)| AnimationFrame {
                nodes: slice
                    .nodes()
                    .iter()
                    .zip(pos.as_slice())
                    .map(|(&id, &p)| FrameNode {
                        label: net.labels()[id].clone(),
                        position: p,
                        opacity: 1.0,
                        cluster: None,
                        construct: false,
                    })
                    .collect(),
            })
            .collect()
    }
}

fn frame_points(frames: &[Positions]) -> Vec<Vec<Point>> {
    frames.iter().map(|p| p.as_slice().to_vec()).collect()
}

fn check_frames(frames: &[Vec<Point>], net: &TimeSlicedNetwork) -> Result<()> {
    if frames.len() != net.len() {
        return Err(Error::DimensionMismatch { expected: net.len(), found: frames.len() });
    }
    for (f, s) in frames.iter().zip(net.slices()) {
        if f.len() != s.nodes.len() {
            return Err(Error::DimensionMismatch { expected: s.nodes.len(), found: f.len() });
        }
    }
    Ok(())
}

fn slice_weights(net: &TimeSlicedNetwork) -> Result<Vec<Matrix>> {
    net.slices()
        .iter()
        .enumerate()
        .map(|(t, s)| {
            pair_weights(&s.distances, Weighting::KamadaKawai).map_err(|e| match e {
                Error::ZeroDistance { i, j } => Error::ZeroSliceDistance { i: s.nodes[i], j: s.nodes[j], t },
                other => other,
            })
        })
        .collect()
}

/// `sum_t sum_{delta <= window} (1/delta^2) sum_i |x_{i,t} - x_{i,t+delta}|^2`
/// over nodes present in both slices.
fn displacement(frames: &[Vec<Point>], net: &TimeSlicedNetwork, window: usize) -> f64 {
    let slices = net.slices();
    let mut total = 0.0;
    for t in 0..slices.len() {
        for delta in 1..=window {
            let s = t + delta;
            if s >= slices.len() {
                break;
            }
            let mut part = 0.0;
            for (k, &id) in slices[t].nodes.iter().enumerate() {
                if let Some(m) = slices[s].local(id) {
                    let a = frames[t][k];
                    let b = frames[s][m];
                    part += (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]);
                }
            }
            total += part / (delta * delta) as f64;
        }
    }
    total
}

fn decompose(
    frames: &[Vec<Point>],
    net: &TimeSlicedNetwork,
    weights: &[Matrix],
    cfg: &DynamicConfig,
) -> StressDecomposition {
    let static_term =
        frames.iter().zip(net.slices()).zip(weights).map(|((p, s), w)| raw_stress(p, &s.distances, w)).sum();
    let dynamic_term = if cfg.omega == 0.0 { 0.0 } else { cfg.omega * displacement(frames, net, cfg.window) };
    StressDecomposition { total: static_term + dynamic_term, static_term, dynamic_term }
}

/// Evaluates the dynamic stress of `frames` (aligned with `net`'s slices)
/// with the omega and window recorded in the frame set.
pub fn dynamic_stress(frames: &LayoutFrameSet, net: &TimeSlicedNetwork) -> Result<StressDecomposition> {
    let points = frame_points(&frames.frames);
    check_frames(&points, net)?;
    let weights = slice_weights(net)?;
    Ok(decompose(&points, net, &weights, &DynamicConfig { omega: frames.omega, window: frames.window }))
}

/// Starting coordinates for every slice.
///
/// With `Init::Random`, slice 0 is drawn uniformly from `[-1, 1]^2`; a node
/// present in the previous slice keeps its previous start, and a node that
/// enters is placed at the centroid of its (up to three) nearest
/// already-placed nodes of the slice, or at the origin if there are none.
/// With `Init::Given`, the positions are indexed by global node id and
/// shared by all slices.
pub fn initial_frames(net: &TimeSlicedNetwork, init: &Init, seed: u64) -> Result<Vec<Vec<Point>>> {
    match init {
        Init::Given(p) => {
            if p.len() != net.labels().len() {
                return Err(Error::DimensionMismatch { expected: net.labels().len(), found: p.len() });
            }
            Ok(net.slices().iter().map(|s| s.nodes.iter().map(|&id| p[id]).collect()).collect())
        }
        Init::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut frames: Vec<Vec<Point>> = Vec::with_capacity(net.len());
            for (t, slice) in net.slices().iter().enumerate() {
                if t == 0 {
                    frames.push(random_points(slice.nodes.len(), &mut rng));
                    continue;
                }
                let prev = &net.slices()[t - 1];
                let mut placed: Vec<Option<Point>> =
                    slice.nodes.iter().map(|&id| prev.local(id).map(|m| frames[t - 1][m])).collect();
                for k in 0..slice.nodes.len() {
                    if placed[k].is_some() {
                        continue;
                    }
                    let mut near: Vec<(f64, usize)> = (0..slice.nodes.len())
                        .filter(|&m| m != k && placed[m].is_some())
                        .map(|m| (slice.distances[(k, m)], m))
                        .collect();
                    near.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                    near.truncate(3);
                    let pts: Vec<Point> = near.iter().filter_map(|&(_, m)| placed[m]).collect();
                    placed[k] = Some(layout::centroid(&pts));
                }
                frames.push(placed.into_iter().map(|p| p.unwrap_or([0.0, 0.0])).collect());
            }
            Ok(frames)
        }
    }
}

/// Minimizes the dynamic stress jointly over all slices.
///
/// `layout.weighting` is ignored: slices always use Kamada-Kawai weights.
pub fn dynamic_layout(net: &TimeSlicedNetwork, cfg: &DynamicConfig, layout: &LayoutConfig) -> Result<LayoutFrameSet> {
    layout.validate()?;
    if !(cfg.omega >= 0.0 && cfg.omega.is_finite()) {
        return Err(Error::InvalidArgument("omega must be finite and non-negative".into()));
    }
    if cfg.window == 0 {
        return Err(Error::InvalidArgument("window must be at least 1".into()));
    }
    let weights = slice_weights(net)?;
    let mut frames = initial_frames(net, &layout.init, layout.seed)?;

    // presence[id] = (slice, local index) pairs in slice order
    let mut presence: Vec<Vec<(usize, usize)>> = vec![Vec::new(); net.labels().len()];
    for (t, s) in net.slices().iter().enumerate() {
        for (k, &id) in s.nodes.iter().enumerate() {
            presence[id].push((t, k));
        }
    }

    let mut trace = Vec::new();
    let mut prev = decompose(&frames, net, &weights, cfg).total;
    let mut converged = false;
    let mut system = Vec::new();
    let mut rhs = Vec::new();
    for _ in 0..layout.max_iterations {
        for track in &presence {
            let m = track.len();
            if m == 0 {
                continue;
            }
            system.clear();
            system.resize(m * m, 0.0);
            rhs.clear();
            rhs.resize(m * 2, 0.0);
            for (r, &(t, k)) in track.iter().enumerate() {
                let s = &net.slices()[t];
                let (a, b) = node_majorant(k, &frames[t], &s.distances, &weights[t]);
                if a > 0.0 {
                    system[r * m + r] += 2.0 * a;
                    rhs[2 * r] += 2.0 * b[0];
                    rhs[2 * r + 1] += 2.0 * b[1];
                } else {
                    // alone in its slice: a proximal term keeps the system definite
                    system[r * m + r] += 1.0;
                    rhs[2 * r] += frames[t][k][0];
                    rhs[2 * r + 1] += frames[t][k][1];
                }
            }
            if cfg.omega > 0.0 {
                for r in 0..m {
                    for q in (r + 1)..m {
                        let gap = track[q].0 - track[r].0;
                        if gap > cfg.window {
                            break;
                        }
                        let wt = cfg.omega / (gap * gap) as f64;
                        system[r * m + r] += wt;
                        system[q * m + q] += wt;
                        system[r * m + q] -= wt;
                        system[q * m + r] -= wt;
                    }
                }
            }
            if cholesky_solve(&mut system, m, &mut rhs, 2) {
                for (r, &(t, k)) in track.iter().enumerate() {
                    frames[t][k] = [rhs[2 * r], rhs[2 * r + 1]];
                }
            }
        }
        let cur = decompose(&frames, net, &weights, cfg).total;
        trace.push(cur);
        if cur == 0.0 || relative_decrease(prev, cur) < layout.convergence_epsilon {
            converged = true;
            break;
        }
        prev = cur;
    }

    // a common translation leaves both terms unchanged
    let all: Vec<Point> = frames.iter().flatten().copied().collect();
    let c = layout::centroid(&all);
    for f in &mut frames {
        for p in f.iter_mut() {
            p[0] -= c[0];
            p[1] -= c[1];
        }
    }
    let parts = decompose(&frames, net, &weights, cfg);
    Ok(LayoutFrameSet {
        frames: frames.into_iter().map(|f| Positions::new(f).expect("majorization keeps coordinates finite")).collect(),
        omega: cfg.omega,
        window: cfg.window,
        static_stress: parts.static_term,
        dynamic_stress: parts.dynamic_term,
        stress_trace: trace,
        converged,
    })
}

/// A node in an animation frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameNode {
    pub label: String,
    pub position: Point,
    pub opacity: f64,
    pub cluster: Option<usize>,
    /// Pseudo-node standing for a latent factor; excluded from stress.
    pub construct: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnimationFrame {
    pub nodes: Vec<FrameNode>,
}

impl AnimationFrame {
    fn find(&self, label: &str, construct: bool) -> Option<&FrameNode> {
        self.nodes.iter().find(|n| n.label == label && n.construct == construct)
    }
}

/// Adds a construct node for factor `factor_index` to every frame, placed at
/// the centroid of the frame's nodes weighted by their positive loadings.
/// Frames with no positively loading node get no construct node.
pub fn project_eigenvector_nodes(
    frames: &[AnimationFrame],
    model: &FactorModel,
    factor_index: usize,
) -> Result<Vec<AnimationFrame>> {
    if factor_index >= model.factors() {
        return Err(Error::InvalidArgument(alloc::format!(
            "factor {factor_index} requested but the model has {}",
            model.factors()
        )));
    }
    let loading: BTreeMap<&str, f64> =
        model.labels().iter().enumerate().map(|(i, l)| (l.as_str(), model.loadings()[(i, factor_index)])).collect();
    if !loading.values().any(|&v| v > 0.0) {
        return Err(Error::NoPositiveLoading { factor: factor_index });
    }
    Ok(frames
        .iter()
        .map(|frame| {
            let (mut sw, mut sx, mut sy) = (0.0, 0.0, 0.0);
            for n in frame.nodes.iter().filter(|n| !n.construct) {
                let w = loading.get(n.label.as_str()).copied().unwrap_or(0.0).max(0.0);
                sw += w;
                sx += w * n.position[0];
                sy += w * n.position[1];
            }
            let mut out = frame.clone();
            if sw > 0.0 {
                out.nodes.push(FrameNode {
                    label: alloc::format!("factor {}", factor_index + 1),
                    position: [sx / sw, sy / sw],
                    opacity: 1.0,
                    cluster: Some(factor_index),
                    construct: true,
                });
            }
            out
        })
        .collect())
}

fn lerp(a: f64, b: f64, s: f64) -> f64 {
    a + (b - a) * s
}

/// Inserts `steps_between` linearly interpolated frames between each pair of
/// keyframes. Nodes that enter fade in at their target position; nodes that
/// leave fade out at their last position.
pub fn interpolate_frames(frames: &[AnimationFrame], steps_between: usize) -> Vec<AnimationFrame> {
    let mut out = Vec::new();
    for (k, frame) in frames.iter().enumerate() {
        out.push(frame.clone());
        let Some(next) = frames.get(k + 1) else { break };
        for step in 1..=steps_between {
            let s = step as f64 / (steps_between + 1) as f64;
            let mut nodes = Vec::with_capacity(frame.nodes.len() + next.nodes.len());
            for n in &frame.nodes {
                match next.find(&n.label, n.construct) {
                    Some(m) => nodes.push(FrameNode {
                        label: n.label.clone(),
                        position: [lerp(n.position[0], m.position[0], s), lerp(n.position[1], m.position[1], s)],
                        opacity: lerp(n.opacity, m.opacity, s),
                        cluster: if s < 0.5 { n.cluster } else { m.cluster },
                        construct: n.construct,
                    }),
                    None => nodes.push(FrameNode { opacity: n.opacity * (1.0 - s), ..n.clone() }),
                }
            }
            for m in &next.nodes {
                if frame.find(&m.label, m.construct).is_none() {
                    nodes.push(FrameNode { opacity: m.opacity * s, ..m.clone() });
                }
            }
            out.push(AnimationFrame { nodes });
        }
    }
    out
}

/// Independent static layout of every slice from the same starting frames
/// as [`dynamic_layout`]; the `omega = 0` reference.
pub fn independent_layouts(net: &TimeSlicedNetwork, layout: &LayoutConfig) -> Result<Vec<layout::MdsLayout>> {
    let starts = initial_frames(net, &layout.init, layout.seed)?;
    net.slices()
        .iter()
        .zip(starts)
        .enumerate()
        .map(|(t, (s, start))| {
            let cfg = LayoutConfig {
                init: Init::Given(Positions::new(start)?),
                weighting: Weighting::KamadaKawai,
                ..layout.clone()
            };
            layout::mds_layout(&s.distances, &cfg).map_err(|e| match e {
                Error::ZeroDistance { i, j } => Error::ZeroSliceDistance { i: s.nodes[i], j: s.nodes[j], t },
                other => other,
            })
        })
        .collect()
}

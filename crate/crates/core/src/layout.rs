//! Static map layout: Kruskal and Kamada-Kawai stress, stress
//! majorization, graph geodesics and Procrustes alignment.
//!
//! The optimizer minimizes the weighted raw stress
//! `sum_{i != j} w_ij (|x_i - x_j| - d_ij)^2` with either uniform weights
//! (the numerator of Kruskal's stress) or `w_ij = 1 / d_ij^2` (Kamada-Kawai).
//! Each sweep moves one node at a time to the minimizer of its quadratic
//! majorant, so the objective never increases between sweeps.

use alloc::vec::Vec;
use core::ops::Index;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg::Matrix;
use crate::matrix::{Measure, SimilarityMatrix};

pub type Point = [f64; 2];

/// 2D coordinates in the node order of the distance matrix.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Positions(Vec<Point>);

impl Positions {
    pub fn new(coords: Vec<Point>) -> Result<Self> {
        if coords.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("coordinates must be finite".into()));
        }
        Ok(Self(coords))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Point] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Point> {
        self.0
    }

    pub fn centroid(&self) -> Point {
        centroid(&self.0)
    }

    /// Translated so the centroid is the origin.
    pub fn centered(&self) -> Positions {
        let mut p = self.0.clone();
        center(&mut p);
        Positions(p)
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        dist(self.0[i], self.0[j])
    }
}

impl Index<usize> for Positions {
    type Output = Point;

    fn index(&self, i: usize) -> &Point {
        &self.0[i]
    }
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    libm::hypot(a[0] - b[0], a[1] - b[1])
}

pub(crate) fn centroid(p: &[Point]) -> Point {
    if p.is_empty() {
        return [0.0, 0.0];
    }
    let n = p.len() as f64;
    let (sx, sy) = p.iter().fold((0.0, 0.0), |(sx, sy), q| (sx + q[0], sy + q[1]));
    [sx / n, sy / n]
}

pub(crate) fn center(p: &mut [Point]) {
    let c = centroid(p);
    for q in p.iter_mut() {
        q[0] -= c[0];
        q[1] -= c[1];
    }
}

/// Pair weights of the stress objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    /// Every pair counts equally (Kruskal).
    #[default]
    Uniform,
    /// Pairs weighted by `1 / d_ij^2` (Kamada-Kawai).
    KamadaKawai,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum Init {
    /// Uniform in `[-1, 1]^2` from the seeded generator.
    #[default]
    Random,
    Given(Positions),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutConfig {
    pub max_iterations: usize,
    /// Stop once the relative decrease of the objective falls below this.
    pub convergence_epsilon: f64,
    pub seed: u64,
    pub init: Init,
    pub weighting: Weighting,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            convergence_epsilon: 1e-6,
            seed: 0,
            init: Init::Random,
            weighting: Weighting::Uniform,
        }
    }
}

impl LayoutConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be at least 1".into()));
        }
        if self.convergence_epsilon.is_nan() || self.convergence_epsilon <= 0.0 {
            return Err(Error::InvalidArgument("convergence_epsilon must be positive".into()));
        }
        Ok(())
    }
}

/// Checks that `d` is a usable target-distance matrix: square, symmetric,
/// finite, non-negative, zero diagonal.
pub fn validate_distances(d: &Matrix) -> Result<()> {
    if !d.is_square() {
        return Err(Error::DimensionMismatch { expected: d.rows(), found: d.cols() });
    }
    if let Some((row, col)) = d.asymmetry() {
        return Err(Error::NotSymmetric { row, col });
    }
    for i in 0..d.rows() {
        if d[(i, i)] != 0.0 {
            return Err(Error::InvalidArgument(alloc::format!("distance diagonal at {i} is not zero")));
        }
        if let Some(x) = d.row(i).iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::InvalidArgument(alloc::format!("invalid distance {x} in row {i}")));
        }
    }
    Ok(())
}

fn check_sizes(pos: &Positions, d: &Matrix) -> Result<()> {
    validate_distances(d)?;
    if pos.len() != d.rows() {
        return Err(Error::DimensionMismatch { expected: d.rows(), found: pos.len() });
    }
    Ok(())
}

/// Kruskal's stress and its square (normalized raw stress).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KruskalStress {
    pub s: f64,
    pub normalized_raw: f64,
}

/// Kruskal's stress over all ordered pairs `i != j`.
pub fn kruskal_stress(pos: &Positions, d: &Matrix) -> Result<KruskalStress> {
    check_sizes(pos, d)?;
    let n = d.rows();
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let r = pos.distance(i, j) - d[(i, j)];
                num += r * r;
                den += d[(i, j)] * d[(i, j)];
            }
        }
    }
    if den == 0.0 {
        return Err(Error::ZeroDistances);
    }
    let normalized_raw = num / den;
    Ok(KruskalStress { s: libm::sqrt(normalized_raw), normalized_raw })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KkStress {
    pub total: f64,
    /// `s_ij` for every ordered pair, zero diagonal.
    pub per_pair: Matrix,
}

fn require_positive_off_diagonal(d: &Matrix) -> Result<()> {
    let n = d.rows();
    for i in 0..n {
        for j in (i + 1)..n {
            if d[(i, j)] == 0.0 {
                return Err(Error::ZeroDistance { i, j });
            }
        }
    }
    Ok(())
}

/// Kamada-Kawai stress: `s_ij = (|x_i - x_j| - d_ij)^2 / d_ij^2`, summed over
/// ordered pairs.
pub fn kk_stress(pos: &Positions, d: &Matrix) -> Result<KkStress> {
    check_sizes(pos, d)?;
    require_positive_off_diagonal(d)?;
    let n = d.rows();
    let mut per_pair = Matrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let r = pos.distance(i, j) - d[(i, j)];
            let s = r * r / (d[(i, j)] * d[(i, j)]);
            per_pair[(i, j)] = s;
            per_pair[(j, i)] = s;
        }
    }
    let total = per_pair.as_slice().iter().sum();
    Ok(KkStress { total, per_pair })
}

pub(crate) fn pair_weights(d: &Matrix, weighting: Weighting) -> Result<Matrix> {
    let n = d.rows();
    match weighting {
        Weighting::Uniform => {
            let mut w = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        w[(i, j)] = 1.0;
                    }
                }
            }
            Ok(w)
        }
        Weighting::KamadaKawai => {
            require_positive_off_diagonal(d)?;
            let mut w = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        w[(i, j)] = 1.0 / (d[(i, j)] * d[(i, j)]);
                    }
                }
            }
            Ok(w)
        }
    }
}

/// `sum_{i != j} w_ij (|x_i - x_j| - d_ij)^2`.
pub(crate) fn raw_stress(p: &[Point], d: &Matrix, w: &Matrix) -> f64 {
    let n = p.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let r = dist(p[i], p[j]) - d[(i, j)];
            s += w[(i, j)] * r * r;
        }
    }
    2.0 * s
}

/// Weighted raw stress of a configuration for the chosen weighting.
pub fn weighted_stress(pos: &Positions, d: &Matrix, weighting: Weighting) -> Result<f64> {
    check_sizes(pos, d)?;
    let w = pair_weights(d, weighting)?;
    Ok(raw_stress(pos.as_slice(), d, &w))
}

/// Coefficients of node `i`'s majorant: the node minimizes
/// `a |x|^2 - 2 x . b` (up to a constant), so its update is `b / a`.
pub(crate) fn node_majorant(i: usize, p: &[Point], d: &Matrix, w: &Matrix) -> (f64, Point) {
    let mut a = 0.0;
    let mut b = [0.0, 0.0];
    let xi = p[i];
    for (j, &xj) in p.iter().enumerate() {
        if j == i {
            continue;
        }
        let wij = w[(i, j)];
        if wij == 0.0 {
            continue;
        }
        a += wij;
        let len = dist(xi, xj);
        let (ux, uy) = if len > 0.0 { ((xi[0] - xj[0]) / len, (xi[1] - xj[1]) / len) } else { (0.0, 0.0) };
        b[0] += wij * (xj[0] + d[(i, j)] * ux);
        b[1] += wij * (xj[1] + d[(i, j)] * uy);
    }
    (a, b)
}

pub(crate) fn random_points(n: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    (0..n).map(|_| [rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)]).collect()
}

/// Result of [`mds_layout`].
#[derive(Debug, Clone, PartialEq)]
pub struct MdsLayout {
    /// Mean-centered coordinates.
    pub positions: Positions,
    /// Weighted raw stress after each sweep.
    pub stress_trace: Vec<f64>,
    pub converged: bool,
}

impl MdsLayout {
    pub fn final_stress(&self) -> f64 {
        self.stress_trace.last().copied().unwrap_or(0.0)
    }
}

pub(crate) fn relative_decrease(prev: f64, cur: f64) -> f64 {
    if prev == 0.0 {
        0.0
    } else {
        (prev - cur) / prev
    }
}

/// Lays out `d` in the plane by stress majorization.
pub fn mds_layout(d: &Matrix, cfg: &LayoutConfig) -> Result<MdsLayout> {
    cfg.validate()?;
    validate_distances(d)?;
    let n = d.rows();
    let w = pair_weights(d, cfg.weighting)?;
    let mut p = match &cfg.init {
        Init::Random => random_points(n, &mut ChaCha8Rng::seed_from_u64(cfg.seed)),
        Init::Given(given) => {
            if given.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: given.len() });
            }
            given.as_slice().to_vec()
        }
    };

    let mut trace = Vec::new();
    let mut prev = raw_stress(&p, d, &w);
    let mut converged = false;
    for _ in 0..cfg.max_iterations {
        for i in 0..n {
            let (a, b) = node_majorant(i, &p, d, &w);
            if a > 0.0 {
                p[i] = [b[0] / a, b[1] / a];
            }
        }
        let cur = raw_stress(&p, d, &w);
        trace.push(cur);
        if cur == 0.0 || relative_decrease(prev, cur) < cfg.convergence_epsilon {
            converged = true;
            break;
        }
        prev = cur;
    }
    center(&mut p);
    Ok(MdsLayout { positions: Positions(p), stress_trace: trace, converged })
}

/// How edges translate into path lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathLength {
    /// Every edge has length 1.
    #[default]
    Hop,
    /// An edge of weight `w` has length `1 / w`.
    InverseWeight,
}

/// Treatment of node pairs with no connecting path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Disconnected {
    #[default]
    Error,
    /// Use 1.5 times the largest finite distance.
    Substitute,
}

/// All-pairs shortest path lengths as a labelled distance matrix.
pub fn geodesic_distances(g: &WeightedGraph, mode: PathLength, disconnected: Disconnected) -> Result<SimilarityMatrix> {
    let n = g.node_count();
    let mut d = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                d[(i, j)] = f64::INFINITY;
            }
        }
    }
    for e in g.edges() {
        let len = match mode {
            PathLength::Hop => 1.0,
            PathLength::InverseWeight => {
                if e.weight.is_nan() || e.weight <= 0.0 {
                    return Err(Error::NegativeWeight { a: e.a, b: e.b, weight: e.weight });
                }
                1.0 / e.weight
            }
        };
        d[(e.a, e.b)] = len;
        d[(e.b, e.a)] = len;
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[(i, k)];
            if dik == f64::INFINITY {
                continue;
            }
            for j in (i + 1)..n {
                let via = dik + d[(k, j)];
                if via < d[(i, j)] {
                    d[(i, j)] = via;
                    d[(j, i)] = via;
                }
            }
        }
    }
    let max_finite = d.as_slice().iter().copied().filter(|x| x.is_finite()).fold(0.0, f64::max);
    if d.as_slice().iter().any(|x| x.is_infinite()) {
        match disconnected {
            Disconnected::Error => return Err(Error::Disconnected { components: g.components() }),
            Disconnected::Substitute => {
                let fill = if max_finite > 0.0 { 1.5 * max_finite } else { 1.0 };
                for i in 0..n {
                    for j in 0..n {
                        if d[(i, j)].is_infinite() {
                            d[(i, j)] = fill;
                        }
                    }
                }
            }
        }
    }
    let labels = g.nodes().iter().map(|v| v.label.clone()).collect();
    SimilarityMatrix::new(labels, d, Measure::EuclideanDistance)
}

/// Outcome of aligning one configuration onto another.
#[derive(Debug, Clone, PartialEq)]
pub struct Alignment {
    /// Target mapped into the reference frame.
    pub aligned: Positions,
    /// `sqrt(sum |ref_i - aligned_i|^2)`.
    pub residual: f64,
    /// `sqrt(sum |ref_i - centroid|^2)`, for relative comparisons.
    pub reference_scale: f64,
    pub scale: f64,
    pub reflected: bool,
}

/// Orthogonal Procrustes in the plane: translation, rotation and optional
/// reflection (and uniform scaling when `allow_scaling`).
pub fn procrustes(reference: &Positions, target: &Positions, allow_scaling: bool) -> Result<Alignment> {
    if reference.len() != target.len() {
        return Err(Error::DimensionMismatch { expected: reference.len(), found: target.len() });
    }
    let a = reference.centered().0;
    let b = target.centered().0;
    let fit = |reflect: bool| {
        let (mut sc, mut ss) = (0.0, 0.0);
        for (p, q) in a.iter().zip(&b) {
            let qy = if reflect { -q[1] } else { q[1] };
            sc += p[0] * q[0] + p[1] * qy;
            ss += p[1] * q[0] - p[0] * qy;
        }
        (libm::hypot(sc, ss), libm::atan2(ss, sc))
    };
    let (keep, theta_keep) = fit(false);
    let (flip, theta_flip) = fit(true);
    let reflected = flip > keep;
    let (corr, theta) = if reflected { (flip, theta_flip) } else { (keep, theta_keep) };
    let norm_b: f64 = b.iter().map(|q| q[0] * q[0] + q[1] * q[1]).sum();
    let scale = if allow_scaling && norm_b > 0.0 { corr / norm_b } else { 1.0 };
    let (c, s) = (libm::cos(theta), libm::sin(theta));
    let aligned: Vec<Point> = b
        .iter()
        .map(|q| {
            let qy = if reflected { -q[1] } else { q[1] };
            [scale * (c * q[0] - s * qy), scale * (s * q[0] + c * qy)]
        })
        .collect();
    let residual = libm::sqrt(
        a.iter().zip(&aligned).map(|(p, q)| (p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1])).sum(),
    );
    let reference_scale = libm::sqrt(a.iter().map(|p| p[0] * p[0] + p[1] * p[1]).sum());
    let c_ref = reference.centroid();
    let aligned = aligned.into_iter().map(|q| [q[0] + c_ref[0], q[1] + c_ref[1]]).collect();
    Ok(Alignment { aligned: Positions(aligned), residual, reference_scale, scale, reflected })
}

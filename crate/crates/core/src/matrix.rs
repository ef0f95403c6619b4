//! Occurrence matrices and the symmetric matrices derived from them.
//!
//! All symmetric constructions evaluate the upper triangle once, in a fixed
//! summation order, and mirror it, so results are exactly symmetric and
//! bitwise reproducible.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::corpus::{DocumentRecord, VariableKind, VariableUniverse};
use crate::error::{Error, Result};
use crate::graph::{Node, WeightedGraph};
use crate::linalg::Matrix;

/// Documents × variables count matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OccurrenceMatrix {
    row_ids: Vec<String>,
    labels: Vec<String>,
    kinds: Vec<Option<VariableKind>>,
    values: Matrix,
}

impl OccurrenceMatrix {
    /// Wraps an existing table; every cell must be finite and non-negative.
    pub fn new(row_ids: Vec<String>, labels: Vec<String>, values: Matrix) -> Result<Self> {
        if values.rows() != row_ids.len() {
            return Err(Error::DimensionMismatch { expected: row_ids.len(), found: values.rows() });
        }
        if values.cols() != labels.len() {
            return Err(Error::DimensionMismatch { expected: labels.len(), found: values.cols() });
        }
        if let Some(bad) = values.as_slice().iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidArgument(alloc::format!("occurrence counts must be non-negative, found {bad}")));
        }
        let kinds = vec![None; labels.len()];
        Ok(Self { row_ids, labels, kinds, values })
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn kinds(&self) -> &[Option<VariableKind>] {
        &self.kinds
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn n_docs(&self) -> usize {
        self.row_ids.len()
    }

    pub fn n_vars(&self) -> usize {
        self.labels.len()
    }

    /// Places the columns of `other` after the columns of `self`; both
    /// blocks must describe the same documents in the same order.
    pub fn hconcat(&self, other: &OccurrenceMatrix) -> Result<OccurrenceMatrix> {
        if self.row_ids != other.row_ids {
            return Err(Error::InvalidArgument("blocks describe different documents".into()));
        }
        let (n, a, b) = (self.n_docs(), self.n_vars(), other.n_vars());
        let mut values = Matrix::zeros(n, a + b);
        for i in 0..n {
            for j in 0..a {
                values[(i, j)] = self.values[(i, j)];
            }
            for j in 0..b {
                values[(i, a + j)] = other.values[(i, j)];
            }
        }
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        let mut kinds = self.kinds.clone();
        kinds.extend_from_slice(&other.kinds);
        Ok(OccurrenceMatrix { row_ids: self.row_ids.clone(), labels, kinds, values })
    }
}

/// Word columns hold token counts; author and reference columns hold 0/1
/// presence.
pub fn occurrence_matrix(docs: &[DocumentRecord], universe: &VariableUniverse) -> OccurrenceMatrix {
    let mut values = Matrix::zeros(docs.len(), universe.len());
    for (i, doc) in docs.iter().enumerate() {
        for token in &doc.title_tokens {
            if let Some(j) = universe.position(VariableKind::Word, token) {
                values[(i, j)] += 1.0;
            }
        }
        for (kind, names) in [(VariableKind::Author, &doc.authors), (VariableKind::Reference, &doc.references)] {
            for name in names {
                if let Some(j) = universe.position(kind, name) {
                    values[(i, j)] = 1.0;
                }
            }
        }
    }
    OccurrenceMatrix {
        row_ids: docs.iter().map(|d| d.doc_id.clone()).collect(),
        labels: universe.display_labels(),
        kinds: universe.entries().iter().map(|v| Some(v.kind)).collect(),
        values,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Cosine,
    Pearson,
    /// Any dissimilarity with zero diagonal: Euclidean, `1 - cosine`, geodesic.
    EuclideanDistance,
    Cooccurrence,
}

impl Measure {
    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Cosine => "cosine",
            Measure::Pearson => "pearson",
            Measure::EuclideanDistance => "euclidean_distance",
            Measure::Cooccurrence => "cooccurrence",
        }
    }

    pub fn is_distance(self) -> bool {
        self == Measure::EuclideanDistance
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which vectors of an occurrence matrix are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Axis {
    /// Variables (columns) compared across documents.
    #[default]
    Columns,
    /// Documents (rows) compared across variables.
    Rows,
}

/// Symmetric labelled matrix tagged with the measure that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    labels: Vec<String>,
    values: Matrix,
    measure: Measure,
    /// Zero-norm (cosine) or constant (Pearson) vectors.
    degenerate: Vec<bool>,
}

impl SimilarityMatrix {
    /// Validates squareness and exact symmetry.
    pub fn new(labels: Vec<String>, values: Matrix, measure: Measure) -> Result<Self> {
        if !values.is_square() || values.rows() != labels.len() {
            return Err(Error::DimensionMismatch { expected: labels.len(), found: values.rows() });
        }
        if let Some((row, col)) = values.asymmetry() {
            return Err(Error::NotSymmetric { row, col });
        }
        if values.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("matrix entries must be finite".into()));
        }
        let degenerate = vec![false; labels.len()];
        Ok(Self { labels, values, measure, degenerate })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn degenerate(&self) -> &[bool] {
        &self.degenerate
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }
}

fn vectors(mat: &OccurrenceMatrix, axis: Axis) -> (Vec<String>, Vec<Vec<f64>>) {
    match axis {
        Axis::Columns => (mat.labels.clone(), (0..mat.n_vars()).map(|j| mat.values.column(j)).collect()),
        Axis::Rows => (mat.row_ids.clone(), (0..mat.n_docs()).map(|i| mat.values.row(i).to_vec()).collect()),
    }
}

fn symmetric_from<F>(vecs: &[Vec<f64>], mut entry: F) -> Matrix
where
    F: FnMut(usize, usize) -> f64,
{
    let v = vecs.len();
    let mut m = Matrix::zeros(v, v);
    for i in 0..v {
        for j in i..v {
            let x = entry(i, j);
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    m
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Variable × variable co-occurrence counts over documents. The diagonal
/// holds the column marginal.
pub fn cooccurrence(mat: &OccurrenceMatrix, binarize: bool) -> SimilarityMatrix {
    let (labels, mut vecs) = vectors(mat, Axis::Columns);
    if binarize {
        for v in &mut vecs {
            for x in v.iter_mut() {
                *x = if *x > 0.0 { 1.0 } else { 0.0 };
            }
        }
    }
    let values = symmetric_from(&vecs, |i, j| dot(&vecs[i], &vecs[j]));
    let degenerate = vec![false; labels.len()];
    SimilarityMatrix { labels, values, measure: Measure::Cooccurrence, degenerate }
}

/// Cosine of the angle between vectors. Zero vectors score 0 everywhere,
/// including their own diagonal.
pub fn cosine(mat: &OccurrenceMatrix, axis: Axis) -> SimilarityMatrix {
    let (labels, vecs) = vectors(mat, axis);
    let squares: Vec<f64> = vecs.iter().map(|v| dot(v, v)).collect();
    let values = symmetric_from(&vecs, |i, j| {
        if squares[i] == 0.0 || squares[j] == 0.0 {
            0.0
        } else if i == j {
            1.0
        } else {
            (dot(&vecs[i], &vecs[j]) / libm::sqrt(squares[i] * squares[j])).clamp(-1.0, 1.0)
        }
    });
    let degenerate = squares.iter().map(|&n| n == 0.0).collect();
    SimilarityMatrix { labels, values, measure: Measure::Cosine, degenerate }
}

/// Product-moment correlation. Constant vectors correlate 0 with everything,
/// including themselves, and are flagged as degenerate.
pub fn pearson(mat: &OccurrenceMatrix, axis: Axis) -> Result<SimilarityMatrix> {
    let (labels, vecs) = vectors(mat, axis);
    let n = match axis {
        Axis::Columns => mat.n_docs(),
        Axis::Rows => mat.n_vars(),
    };
    correlate(labels, &vecs, n)
}

/// Pearson correlation between arbitrary real vectors of length `n`.
pub fn pearson_vectors(labels: Vec<String>, vecs: &[Vec<f64>]) -> Result<SimilarityMatrix> {
    if labels.len() != vecs.len() {
        return Err(Error::DimensionMismatch { expected: labels.len(), found: vecs.len() });
    }
    let n = vecs.first().map_or(0, Vec::len);
    if let Some(v) = vecs.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: v.len() });
    }
    correlate(labels, vecs, n)
}

fn correlate(labels: Vec<String>, vecs: &[Vec<f64>], n: usize) -> Result<SimilarityMatrix> {
    if n < 2 {
        return Err(Error::InvalidArgument(alloc::format!(
            "pearson correlation needs at least 2 observations, got {n}"
        )));
    }
    let centered: Vec<Vec<f64>> = vecs
        .iter()
        .map(|v| {
            let mean = v.iter().sum::<f64>() / n as f64;
            v.iter().map(|x| x - mean).collect()
        })
        .collect();
    let squares: Vec<f64> = centered.iter().map(|v| dot(v, v)).collect();
    let degenerate: Vec<bool> = centered.iter().map(|v| v.iter().all(|&x| x == 0.0)).collect();
    let values = symmetric_from(&centered, |i, j| {
        if degenerate[i] || degenerate[j] {
            0.0
        } else if i == j {
            1.0
        } else {
            (dot(&centered[i], &centered[j]) / libm::sqrt(squares[i] * squares[j])).clamp(-1.0, 1.0)
        }
    });
    Ok(SimilarityMatrix { labels, values, measure: Measure::Pearson, degenerate })
}

/// Pairwise L2 distances.
pub fn euclidean_distances(mat: &OccurrenceMatrix, axis: Axis) -> SimilarityMatrix {
    let (labels, vecs) = vectors(mat, axis);
    let values = symmetric_from(&vecs, |i, j| {
        if i == j {
            0.0
        } else {
            libm::sqrt(vecs[i].iter().zip(&vecs[j]).map(|(a, b)| (a - b) * (a - b)).sum())
        }
    });
    let degenerate = vec![false; labels.len()];
    SimilarityMatrix { labels, values, measure: Measure::EuclideanDistance, degenerate }
}

/// `1 - cosine` with a zero diagonal.
pub fn cosine_to_distance(sim: &SimilarityMatrix) -> Result<SimilarityMatrix> {
    if sim.measure != Measure::Cosine {
        return Err(Error::WrongMeasure { expected: "cosine", found: sim.measure.as_str() });
    }
    let v = sim.len();
    let mut values = Matrix::zeros(v, v);
    for i in 0..v {
        for j in 0..v {
            if i != j {
                values[(i, j)] = 1.0 - sim.values[(i, j)];
            }
        }
    }
    Ok(SimilarityMatrix {
        labels: sim.labels.clone(),
        values,
        measure: Measure::EuclideanDistance,
        degenerate: sim.degenerate.clone(),
    })
}

/// Keeps off-diagonal entries above `tau` (or at least `tau` with
/// `include_equal`) as weighted edges. Zero entries never become edges, so
/// zero-norm columns stay isolated for any threshold.
pub fn threshold_graph(sim: &SimilarityMatrix, tau: f64, include_equal: bool) -> WeightedGraph {
    let mut g = WeightedGraph::new(sim.labels.iter().map(Node::new).collect());
    let v = sim.len();
    for i in 0..v {
        for j in (i + 1)..v {
            let w = sim.values[(i, j)];
            let keep = if include_equal { w >= tau } else { w > tau };
            if keep && w != 0.0 {
                g.add_edge(i, j, w).expect("upper-triangle pairs are distinct");
            }
        }
    }
    g
}

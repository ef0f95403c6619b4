use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, Matrix};
use crate::matrix::SimilarityMatrix;

const MAX_SWEEPS: usize = 100;

/// Unrotated principal components of a (correlation) matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorModel {
    labels: Vec<String>,
    loadings: Matrix,
    eigenvectors: Matrix,
    eigenvalues: Vec<f64>,
    variance_explained: Vec<f64>,
}

impl FactorModel {
    /// Builds a model from an existing loading table (e.g. read from disk).
    pub fn from_loadings(labels: Vec<String>, loadings: Matrix) -> Result<Self> {
        if loadings.rows() != labels.len() {
            return Err(Error::DimensionMismatch { expected: labels.len(), found: loadings.rows() });
        }
        let r = loadings.cols();
        let eigenvalues: Vec<f64> = (0..r).map(|j| loadings.column(j).iter().map(|x| x * x).sum()).collect();
        let mut eigenvectors = Matrix::zeros(loadings.rows(), r);
        for j in 0..r {
            let norm = libm::sqrt(eigenvalues[j]);
            for i in 0..loadings.rows() {
                eigenvectors[(i, j)] = if norm > 0.0 { loadings[(i, j)] / norm } else { 0.0 };
            }
        }
        let v = labels.len().max(1) as f64;
        let variance_explained = eigenvalues.iter().map(|l| l / v).collect();
        Ok(Self { labels, loadings, eigenvectors, eigenvalues, variance_explained })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Variables × factors; column `j` is eigenvector `j` scaled by the
    /// square root of its eigenvalue.
    pub fn loadings(&self) -> &Matrix {
        &self.loadings
    }

    /// Unit eigenvectors as columns, same signs as the loadings.
    pub fn eigenvectors(&self) -> &Matrix {
        &self.eigenvectors
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn variance_explained(&self) -> &[f64] {
        &self.variance_explained
    }

    pub fn factors(&self) -> usize {
        self.loadings.cols()
    }
}

/// Top-`r` eigenpairs of `corr`. Variance explained is eigenvalue / trace,
/// i.e. eigenvalue / v for a correlation matrix. Each factor is signed so
/// that its largest-magnitude loading is positive.
pub fn factor_model(corr: &SimilarityMatrix, r: usize) -> Result<FactorModel> {
    let v = corr.len();
    if r == 0 || r > v {
        return Err(Error::InvalidArgument(alloc::format!("number of factors must be in 1..={v}, got {r}")));
    }
    let c = corr.values();
    let (values, vectors) = symmetric_eigen(c, MAX_SWEEPS)?;
    let trace: f64 = (0..v).map(|i| c[(i, i)]).sum();
    let mut eigenvectors = Matrix::zeros(v, r);
    let mut loadings = Matrix::zeros(v, r);
    for j in 0..r {
        let col = vectors.column(j);
        let mut lead = 0;
        for (i, x) in col.iter().enumerate() {
            if libm::fabs(*x) > libm::fabs(col[lead]) {
                lead = i;
            }
        }
        let sign = if col[lead] < 0.0 { -1.0 } else { 1.0 };
        let root = libm::sqrt(values[j].max(0.0));
        for i in 0..v {
            eigenvectors[(i, j)] = sign * col[i];
            loadings[(i, j)] = sign * col[i] * root;
        }
    }
    let eigenvalues: Vec<f64> = values[..r].to_vec();
    let variance_explained = eigenvalues.iter().map(|l| if trace > 0.0 { l / trace } else { 0.0 }).collect();
    Ok(FactorModel { labels: corr.labels().to_vec(), loadings, eigenvectors, eigenvalues, variance_explained })
}

/// First-factor loadings of `sim`, used as eigenvector centrality.
pub fn eigenvector_centrality(sim: &SimilarityMatrix) -> Result<Vec<f64>> {
    Ok(factor_model(sim, 1)?.loadings().column(0))
}

/// Nodes whose loading is at most `threshold` on every factor.
pub fn factor_neutral_nodes(model: &FactorModel, threshold: f64) -> Vec<usize> {
    let l = model.loadings();
    (0..l.rows()).filter(|&i| (0..l.cols()).all(|j| l[(i, j)] <= threshold)).collect()
}

/// Factor with the highest loading above `threshold` for each node, or
/// `None` for factor-neutral nodes.
pub fn dominant_factors(model: &FactorModel, threshold: f64) -> Vec<Option<usize>> {
    let l = model.loadings();
    (0..l.rows())
        .map(|i| {
            let mut best: Option<usize> = None;
            for j in 0..l.cols() {
                if l[(i, j)] > threshold && best.is_none_or(|b| l[(i, j)] > l[(i, b)]) {
                    best = Some(j);
                }
            }
            best
        })
        .collect()
}

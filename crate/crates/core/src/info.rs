//! Shannon entropy and the three-way mutual information (interaction
//! information) `mu = H(X) + H(Y) + H(Z) - H(XY) - H(XZ) - H(YZ) + H(XYZ)`.
//!
//! Negative `mu` signals redundancy among the three variables.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::OccurrenceMatrix;

const SUM_TOLERANCE: f64 = 1e-12;

fn check_distribution(p: &[f64], tolerance: f64) -> Result<()> {
    if let Some(x) = p.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::InvalidDistribution(alloc::format!("probability {x} is not a finite non-negative number")));
    }
    let total: f64 = p.iter().sum();
    if libm::fabs(total - 1.0) > tolerance {
        return Err(Error::InvalidDistribution(alloc::format!("probabilities sum to {total}")));
    }
    Ok(())
}

fn entropy_unchecked(p: impl IntoIterator<Item = f64>) -> f64 {
    -p.into_iter().filter(|&x| x > 0.0).map(|x| x * libm::log2(x)).sum::<f64>()
}

/// `H = -sum p log2 p` in bits, with `0 log 0 = 0`.
pub fn entropy(p: &[f64]) -> Result<f64> {
    check_distribution(p, 1e-9)?;
    Ok(entropy_unchecked(p.iter().copied()))
}

/// Joint distribution of three discrete variables, stored with `z` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution3 {
    dims: [usize; 3],
    p: Vec<f64>,
}

impl JointDistribution3 {
    pub fn new(dims: [usize; 3], p: Vec<f64>) -> Result<Self> {
        if dims.iter().product::<usize>() != p.len() {
            return Err(Error::DimensionMismatch { expected: dims.iter().product(), found: p.len() });
        }
        check_distribution(&p, SUM_TOLERANCE)?;
        Ok(Self { dims, p })
    }

    /// Maximum-likelihood estimate from cell counts.
    pub fn from_counts(dims: [usize; 3], counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::InvalidDistribution("no observations".into()));
        }
        let p = counts.iter().map(|&c| c as f64 / total as f64).collect();
        Self::new(dims, p)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> f64 {
        self.p[(x * self.dims[1] + y) * self.dims[2] + z]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    /// Marginal over the axes listed in `keep` (ascending subset of 0..3).
    fn marginal(&self, keep: &[usize]) -> Vec<f64> {
        let size: usize = keep.iter().map(|&a| self.dims[a]).product();
        let mut out = vec![0.0; size];
        let [dx, dy, dz] = self.dims;
        for x in 0..dx {
            for y in 0..dy {
                for z in 0..dz {
                    let coord = [x, y, z];
                    let idx = keep.iter().fold(0, |acc, &a| acc * self.dims[a] + coord[a]);
                    out[idx] += self.get(x, y, z);
                }
            }
        }
        out
    }

    pub fn marginal_entropy(&self, axes: &[usize]) -> f64 {
        entropy_unchecked(self.marginal(axes))
    }
}

/// Three-way mutual information in millibits.
pub fn mutual_information_3(j: &JointDistribution3) -> f64 {
    let h = |axes: &[usize]| j.marginal_entropy(axes);
    let bits = h(&[0]) + h(&[1]) + h(&[2]) - h(&[0, 1]) - h(&[0, 2]) - h(&[1, 2]) + h(&[0, 1, 2]);
    1000.0 * bits
}

/// Per-document presence indicators of three disjoint column groups,
/// tabulated over the 2 × 2 × 2 outcome space. A document hits a group when
/// any of the group's columns is nonzero.
pub fn group_distribution(mat: &OccurrenceMatrix, groups: [&[usize]; 3]) -> Result<JointDistribution3> {
    let v = mat.n_vars();
    let mut owner = vec![usize::MAX; v];
    for (g, cols) in groups.iter().enumerate() {
        if cols.is_empty() {
            return Err(Error::InvalidArgument(alloc::format!("group {} is empty", g + 1)));
        }
        for &c in cols.iter() {
            if c >= v {
                return Err(Error::InvalidArgument(alloc::format!("column {c} out of range (matrix has {v})")));
            }
            if owner[c] != usize::MAX {
                return Err(Error::InvalidArgument(alloc::format!(
                    "column `{}` appears in groups {} and {}",
                    mat.labels()[c],
                    owner[c] + 1,
                    g + 1
                )));
            }
            owner[c] = g;
        }
    }
    if mat.n_docs() == 0 {
        return Err(Error::InvalidArgument("empty corpus".into()));
    }
    let mut counts = [0u64; 8];
    for i in 0..mat.n_docs() {
        let row = mat.values().row(i);
        let hit = |g: usize| usize::from(groups[g].iter().any(|&c| row[c] > 0.0));
        counts[(hit(0) * 2 + hit(1)) * 2 + hit(2)] += 1;
    }
    JointDistribution3::from_counts([2, 2, 2], &counts)
}

//! Mutual information between blocks of a jointly Gaussian vector.

use crate::error::{Error, Result};

/// Relative pivot threshold below which a principal block counts as singular.
pub const SINGULAR_RELATIVE_THRESHOLD: f64 = 1e-12;
const SYMMETRY_TOLERANCE: f64 = 1e-12;
const PSD_RELATIVE_TOLERANCE: f64 = 1e-9;

/// A symmetric positive semidefinite covariance matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianCov {
    dim: usize,
    data: Vec<f64>,
}

impl GaussianCov {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidCovariance("dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::InvalidCovariance(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                data.len()
            )));
        }
        if let Some(x) = data.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidCovariance(format!("non-finite entry {x}")));
        }
        let scale = data.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        for i in 0..dim {
            for j in (i + 1)..dim {
                let (a, b) = (data[i * dim + j], data[j * dim + i]);
                if (a - b).abs() > SYMMETRY_TOLERANCE * scale {
                    return Err(Error::InvalidCovariance(format!(
                        "entries ({i},{j}) = {a} and ({j},{i}) = {b} differ"
                    )));
                }
            }
        }
        let cov = Self { dim, data };
        let trace = cov.trace();
        let min_eig = symmetric_eigenvalues(&cov.data, dim)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_RELATIVE_TOLERANCE * trace.max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidCovariance(format!(
                "not positive semidefinite (smallest eigenvalue {min_eig:e})"
            )));
        }
        Ok(cov)
    }

    /// Covariance of `L w` where `w` has independent components with the
    /// given variances. `loadings` has one row per output coordinate.
    pub fn from_loadings(loadings: &[Vec<f64>], variances: &[f64]) -> Result<Self> {
        let dim = loadings.len();
        if let Some(row) = loadings.iter().find(|r| r.len() != variances.len()) {
            return Err(Error::InvalidCovariance(format!(
                "loading row has {} entries, expected {}",
                row.len(),
                variances.len()
            )));
        }
        if let Some(v) = variances.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidCovariance(format!("variance {v} is negative")));
        }
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                data[i * dim + j] = loadings[i]
                    .iter()
                    .zip(&loadings[j])
                    .zip(variances)
                    .map(|((a, b), v)| a * b * v)
                    .sum();
            }
        }
        Self::new(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    fn principal(&self, idx: &[usize]) -> Vec<f64> {
        let m = idx.len();
        let mut sub = vec![0.0; m * m];
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                sub[a * m + b] = self.get(i, j);
            }
        }
        sub
    }

    /// `log2 det` of the principal submatrix on `idx`, via a Cholesky
    /// factorization with symmetric (largest-diagonal) pivoting.
    pub fn log2_det(&self, idx: &[usize]) -> Result<f64> {
        let m = idx.len();
        let mut a = self.principal(idx);
        let trace: f64 = (0..m).map(|i| a[i * m + i]).sum();
        let threshold = SINGULAR_RELATIVE_THRESHOLD * trace.abs();
        let mut perm: Vec<usize> = (0..m).collect();
        let mut log_det = 0.0;
        for k in 0..m {
            let p = (k..m)
                .max_by(|&x, &y| a[x * m + x].total_cmp(&a[y * m + y]))
                .expect("nonempty pivot range");
            if p != k {
                for c in 0..m {
                    a.swap(k * m + c, p * m + c);
                }
                for r in 0..m {
                    a.swap(r * m + k, r * m + p);
                }
                perm.swap(k, p);
            }
            let pivot = a[k * m + k];
            if !(pivot > threshold) {
                return Err(Error::SingularCovariance {
                    block: perm[k..].iter().map(|&i| idx[i]).collect(),
                    pivot,
                    threshold,
                });
            }
            log_det += pivot.ln();
            let root = pivot.sqrt();
            for i in (k + 1)..m {
                a[i * m + k] /= root;
            }
            for i in (k + 1)..m {
                for j in (k + 1)..=i {
                    let v = a[i * m + j] - a[i * m + k] * a[j * m + k];
                    a[i * m + j] = v;
                    a[j * m + i] = v;
                }
            }
        }
        Ok(log_det / std::f64::consts::LN_2)
    }
}

/// `I(X_A; X_B) = 1/2 log2( det S_A det S_B / det S_{A u B} )` in bits.
///
/// Conditional terms follow from the chain rule,
/// `I(A; B | C) = I(A; B u C) - I(A; C)`.
pub fn gaussian_mi(cov: &GaussianCov, block_a: &[usize], block_b: &[usize]) -> Result<f64> {
    let check = |block: &[usize], name: &str| -> Result<()> {
        if block.is_empty() {
            return Err(Error::InvalidCovariance(format!("block {name} is empty")));
        }
        if let Some(&i) = block.iter().find(|&&i| i >= cov.dim()) {
            return Err(Error::InvalidCovariance(format!(
                "index {i} in block {name} exceeds dimension {}",
                cov.dim()
            )));
        }
        Ok(())
    };
    check(block_a, "A")?;
    check(block_b, "B")?;
    let mut joint: Vec<usize> = block_a.iter().chain(block_b).copied().collect();
    joint.sort_unstable();
    let len = joint.len();
    joint.dedup();
    if joint.len() != len {
        return Err(Error::InvalidCovariance("blocks overlap or repeat an index".into()));
    }
    let joint: Vec<usize> = block_a.iter().chain(block_b).copied().collect();
    Ok(0.5 * (cov.log2_det(block_a)? + cov.log2_det(block_b)? - cov.log2_det(&joint)?))
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
pub(crate) fn symmetric_eigenvalues(data: &[f64], n: usize) -> Vec<f64> {
    let mut a = data.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        let diag: f64 = (0..n).map(|i| a[i * n + i] * a[i * n + i]).sum();
        if off <= 1e-30 * diag.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

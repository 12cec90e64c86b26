//! Log-sum-exp, its softmax gradient and its Hessian.
//!
//! The Hessian of `f(x) = log Σ exp(x_i)` has entries
//!
//! ```text
//! H_ii = Σ_{j≠i} exp(x_i + x_j) / S²        H_ij = -exp(x_i + x_j) / S²,   S = Σ_k exp(x_k)
//! ```
//!
//! which is the Laplacian of the complete graph whose edge `{i, j}` carries weight `p_i p_j`
//! (`p = softmax(x)`), i.e. `diag(p) - p pᵀ`. The unweighted factorization `D K D` with
//! `D = diag(p)` and `K` the complete-graph Laplacian matches that matrix off the diagonal only;
//! [`dkd_factorization`] builds it so the mismatch can be inspected.

use crate::error::{Error, Result};
use crate::hermitian::{eigvalsh, HermitianMatrix};

/// Default step for first differences.
pub const GRADIENT_FD_STEP: f64 = 1e-5;
/// Default step for second differences.
pub const HESSIAN_FD_STEP: f64 = 1e-4;

fn check_finite(x: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::InvalidArgument("vector must be non-empty".into()));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    Ok(())
}

fn max_of(x: &[f64]) -> f64 {
    x.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// `max(x) + log Σ exp(x_i - max(x))`.
pub fn lse(x: &[f64]) -> Result<f64> {
    check_finite(x)?;
    Ok(lse_unchecked(x))
}

pub(crate) fn lse_unchecked(x: &[f64]) -> f64 {
    let m = max_of(x);
    m + x.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

/// A strictly positive probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftmaxWeights {
    p: Vec<f64>,
}

impl SoftmaxWeights {
    /// Accepts `p` when every entry is positive and the sum is within `1e-14` of one.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidArgument("weights must be non-empty".into()));
        }
        if p.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidArgument("weights must be positive and finite".into()));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-14 {
            return Err(Error::InvalidArgument(format!("weights sum to {total}, not 1")));
        }
        Ok(SoftmaxWeights { p })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// True when all weights are bitwise equal.
    pub fn is_uniform(&self) -> bool {
        self.p.iter().all(|&v| v == self.p[0])
    }
}

/// `p_i = exp(x_i - lse(x))`.
///
/// Entries far below the maximum would underflow to zero; they are clamped to the smallest
/// positive normal double so the weights stay strictly positive.
pub fn softmax(x: &[f64]) -> Result<SoftmaxWeights> {
    check_finite(x)?;
    let m = max_of(x);
    let w: Vec<f64> = x.iter().map(|v| (v - m).exp().max(f64::MIN_POSITIVE)).collect();
    let s: f64 = w.iter().sum();
    let mut p: Vec<f64> = w.iter().map(|wi| wi / s).collect();
    // Division can leave the total a couple of ulps away from 1; fold the residue into the
    // largest weight, where it is relatively smallest.
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-14 {
        let k = argmax(&p);
        p[k] += 1.0 - total;
    }
    SoftmaxWeights::new(p)
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// Central-difference gradient of [`lse`].
pub fn lse_gradient_fd(x: &[f64], h: f64) -> Result<Vec<f64>> {
    check_finite(x)?;
    check_step(h)?;
    let mut y = x.to_vec();
    let mut grad = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        y[i] = x[i] + h;
        let up = lse_unchecked(&y);
        y[i] = x[i] - h;
        let down = lse_unchecked(&y);
        y[i] = x[i];
        grad.push((up - down) / (2.0 * h));
    }
    Ok(grad)
}

fn check_step(h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    Ok(())
}

/// Dense real matrix with `a[i][j] == a[j][i]` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl RealSymmetricMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        for r in rows {
            if r.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: r.len(),
                });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if rows[i][j].to_bits() != rows[j][i].to_bits() {
                    return Err(Error::SymmetryViolation { row: i, col: j });
                }
            }
        }
        Ok(RealSymmetricMatrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    /// Fills the upper triangle from `f(i, j)` with `i <= j` and mirrors it.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        RealSymmetricMatrix { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_upper_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: f64) -> Self {
        RealSymmetricMatrix {
            n: self.n,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// `self * v`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        self.data
            .chunks(self.n)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.data.chunks(self.n).map(|row| row.iter().sum()).collect()
    }

    pub fn to_hermitian(&self) -> HermitianMatrix {
        let rows = self.rows();
        HermitianMatrix::from_parts(&rows, None, 0.0).expect("exactly symmetric finite matrix")
    }

    /// Largest `|self_ij - other_ij|` over the diagonal and off the diagonal, respectively.
    pub fn max_abs_diff_split(&self, other: &Self) -> Result<(f64, f64)> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let (mut diag, mut off) = (0.0f64, 0.0f64);
        for i in 0..self.n {
            for j in 0..self.n {
                let d = (self.get(i, j) - other.get(i, j)).abs();
                if i == j {
                    diag = diag.max(d);
                } else {
                    off = off.max(d);
                }
            }
        }
        Ok((diag, off))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        let (d, o) = self.max_abs_diff_split(other)?;
        Ok(d.max(o))
    }
}

/// Hessian of [`lse`] from the entrywise formulas, evaluated with `x - max(x)` in place of `x`
/// so that every exponential is at most one.
pub fn lse_hessian_analytic(x: &[f64]) -> Result<RealSymmetricMatrix> {
    check_finite(x)?;
    let m = max_of(x);
    let w: Vec<f64> = x.iter().map(|v| (v - m).exp()).collect();
    let s: f64 = w.iter().sum();
    let s2 = s * s;
    let n = x.len();
    Ok(RealSymmetricMatrix::from_upper_fn(n, |i, j| {
        if i == j {
            let cross: f64 = (0..n).filter(|&k| k != i).map(|k| w[i] * w[k]).sum();
            cross / s2
        } else {
            -(w[i] * w[j]) / s2
        }
    }))
}

/// Central second differences of [`lse`]:
/// `H_ij ≈ [f(x+he_i+he_j) - f(x+he_i-he_j) - f(x-he_i+he_j) + f(x-he_i-he_j)] / 4h²`.
pub fn hessian_fd(x: &[f64], h: f64) -> Result<RealSymmetricMatrix> {
    check_finite(x)?;
    check_step(h)?;
    let n = x.len();
    let mut y = x.to_vec();
    let mut f = |di: f64, dj: f64, i: usize, j: usize| {
        y[i] += di;
        y[j] += dj;
        let v = lse_unchecked(&y);
        y[i] = x[i];
        y[j] = x[j];
        v
    };
    let mut raw = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let pp = f(h, h, i, j);
            let pm = f(h, -h, i, j);
            let mp = f(-h, h, i, j);
            let mm = f(-h, -h, i, j);
            raw[i * n + j] = (pp - pm - mp + mm) / (4.0 * h * h);
        }
    }
    Ok(RealSymmetricMatrix::from_upper_fn(n, |i, j| {
        0.5 * (raw[i * n + j] + raw[j * n + i])
    }))
}

/// Laplacian of the unweighted complete graph on `n` vertices: `n - 1` on the diagonal, `-1`
/// elsewhere.
pub fn complete_graph_laplacian(n: usize) -> Result<RealSymmetricMatrix> {
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    Ok(RealSymmetricMatrix::from_upper_fn(n, |i, j| {
        if i == j {
            (n - 1) as f64
        } else {
            -1.0
        }
    }))
}

/// `D K D` with `D = diag(softmax(x))` and `K` the unweighted complete-graph Laplacian.
///
/// Off the diagonal this is `-p_i p_j`, the Hessian entry. On the diagonal it is
/// `(n - 1) p_i²` rather than `p_i (1 - p_i)`; the two agree only for uniform weights.
pub fn dkd_factorization(x: &[f64]) -> Result<RealSymmetricMatrix> {
    let p = softmax(x)?;
    let p = p.as_slice();
    let k = complete_graph_laplacian(p.len())?;
    Ok(RealSymmetricMatrix::from_upper_fn(p.len(), |i, j| {
        p[i] * k.get(i, j) * p[j]
    }))
}

/// `Σ_{i<j} p_i p_j (e_i - e_j)(e_i - e_j)ᵀ`, the complete-graph Laplacian with product
/// weights. Equals `diag(p) - p pᵀ`.
pub fn weighted_laplacian(p: &SoftmaxWeights) -> RealSymmetricMatrix {
    let p = p.as_slice();
    let n = p.len();
    RealSymmetricMatrix::from_upper_fn(n, |i, j| {
        if i == j {
            (0..n).filter(|&k| k != i).map(|k| p[i] * p[k]).sum()
        } else {
            -(p[i] * p[j])
        }
    })
}

/// Numerical evidence that a symmetric matrix is positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCertificate {
    pub min_eigenvalue: f64,
    /// Number of eigenvalues in `[-tol, tol]`.
    pub nullspace_dim: usize,
    pub tol: f64,
    pub pass: bool,
}

/// `1e-10 * max(1, max|M|)`.
pub fn default_psd_tol(m: &RealSymmetricMatrix) -> f64 {
    1e-10 * m.max_abs().max(1.0)
}

pub fn psd_certify(m: &RealSymmetricMatrix, tol: f64) -> Result<PsdCertificate> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be >= 0, got {tol}")));
    }
    let eigenvalues = eigvalsh(&m.to_hermitian())?;
    let min_eigenvalue = eigenvalues[0];
    Ok(PsdCertificate {
        min_eigenvalue,
        nullspace_dim: eigenvalues.iter().filter(|l| l.abs() <= tol).count(),
        tol,
        pass: min_eigenvalue >= -tol,
    })
}

/// [`psd_certify`] at [`default_psd_tol`].
pub fn psd_certify_default(m: &RealSymmetricMatrix) -> Result<PsdCertificate> {
    psd_certify(m, default_psd_tol(m))
}
